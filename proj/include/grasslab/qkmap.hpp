#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include "json.hpp"

#include "grasslab/flow.hpp"
#include "grasslab/grass.hpp"
#include "grasslab/liealg.hpp"
#include "grasslab/rep.hpp"

namespace grasslab {

/// HP^1 = Sp(2)/(Sp(1) x Sp(1)) realized through the symmetric pair
/// (sp(2), so(4)). Tangent vectors at x = h.o are m-coordinates (4-vectors):
/// xi stands for the velocity of s -> h exp(s xi).o.
namespace hp1 {

const LieAlgebra& sp2();
const LieAlgebra& so4();

/// so(4) coefficients (e1..f3) as an sp(2) coefficient vector and back.
Vector embed(const Vector& so4_coeffs);
Vector so4_part(const Vector& sp2_coeffs);
Vector m_part(const Vector& sp2_coeffs);

/// I_k = sqrt2 ad(f_k) restricted to m (k = 1, 2, 3): the isotropy action
/// of sp(1)_-, normalized so that I_k^2 = -1 and I_1 I_2 = I_3.
Matrix quaternion_on_m(int k);

/// Pushforward constant for <X,Y> = -Re tr(XY) and moment-map constant 1:
/// <A (x) v_i, Psi_* Z> = (kappa / lambda) <I_i A~, Z>.
inline constexpr double kappa = 0.70710678118654752440;

}  // namespace hp1

/// Point h.o of HP^1 with h in Sp(2).
struct ManifoldPoint {
  CMatrix rep;

  /// Throws InputError unless h is unitary and preserves the form (1e-10).
  static ManifoldPoint from_matrix(const CMatrix& h);
  static ManifoldPoint on_geodesic(double t);
  GroupElement group() const;
  /// g.x for g in Sp(2) (matrix form).
  ManifoldPoint translated(const CMatrix& g) const;
  /// Ad_h of the m basis, as sp(2) coefficient columns (10 x 4).
  Matrix tangent_frame() const;
};

/// exp(t u) in closed form: rotation by t in the (1,2) and (3,4) planes.
CMatrix geodesic_closed_form(double t);

struct GeodesicState {
  double t = 0.0;
  CMatrix g;                      ///< g(t) = exp(t u)
  std::array<Vector, 3> e_moving; ///< Ad_g e_i, sp(2) coefficients
  std::array<Vector, 3> f_moving; ///< Ad_g f_i
  std::array<Vector, 3> b;        ///< B_i(t) = pi_so4(Ad_g f_i), so(4) coefficients
  double lambda = 0.0;
};

GeodesicState geodesic(double t);

struct OverlapTable {
  double ef = 0.0;  ///< <e_i, f_i(t)>
  double ee = 0.0;  ///< <e_i, e_i(t)>
  double fe = 0.0;  ///< <f_i, e_i(t)>
  double ff = 0.0;  ///< <f_i, f_i(t)>
  double off_diagonal = 0.0;  ///< max |<x_i, y_j(t)>|, i != j
  double diagonal_spread = 0.0;  ///< max deviation of a diagonal entry from the i = 1 value
};

OverlapTable overlap_table(double t);

/// Orthogonal projection of A in so(4) onto span{f_i(t)} (sp(2) coefficients).
Vector moment_section(const Vector& a_so4, double t);

/// B_i(x) = pi_so4(Ad_h f_i) in so(4) coefficients.
std::array<Vector, 3> moment_components(const ManifoldPoint& x);
/// lambda = |B_1| (the B_i are orthogonal of common norm).
double lambda_at(const ManifoldPoint& x);
double lambda_of_t(double t);

/// Psi(x) = span{B_i(x)} with frame B (B^T B)^{-1/2} (= B_i / lambda).
GrassPoint Psi_at(const ManifoldPoint& x);
GrassPoint Psi_map(double t);

/// Killing field of A (sp(2) coefficients) at x in m-coordinates.
Vector killing_field(const Vector& a_sp2, const ManifoldPoint& x);

struct PushforwardMatrix {
  GrassPoint image;  ///< Psi(x) with the frames used for the rows
  Matrix matrix;     ///< 9 x 4: row 3i + r is the v_i (x) w_r component
  /// Psi_* Y as a tangent vector at `image`.
  TangentVec apply(const Vector& y) const;
};

struct PushforwardConfig {
  double step = 1e-4;
  bool richardson = true;
};

/// Central differences of Psi_at along s -> h exp(s xi_a).o. Throws
/// DomainError at the poles (1 - lambda^2 < 1e-10).
PushforwardMatrix pushforward(const ManifoldPoint& x, const PushforwardConfig& cfg = {});

/// rho(zeta) = sum_r <zeta, A~_r> A_r over an orthonormal basis A_r of V^perp
/// (so(4) coefficients); zeta in m-coordinates (metric is the identity).
Vector rho(const Vector& zeta, const ManifoldPoint& x, const GrassPoint& v);
/// gamma(P) = sum_i [v_i, p_i] (so(4) coefficients).
Vector gamma(const TangentVec& p);

/// Right-hand side of the pushed-forward I_k (k = 1, 2, 3):
/// (kappa/lambda) v_k (x) rho(Y) - v_{k+1} (x) p_{k+2} + v_{k+2} (x) p_{k+1}, Psi_* Y = sum v_i (x) p_i.
TangentVec pushed_quaternion(int k, const Vector& y, const ManifoldPoint& x, const PushforwardMatrix& pf);

/// Residuals of the coincidence chain at geodesic parameter t.
struct CoincidenceReport {
  double t = 0.0;
  double lambda = 0.0;
  std::map<std::string, double> residuals;  ///< identity name -> max residual
  double eta1 = 0.0;
  double eta2 = 0.0;
  double eta_ratio = 0.0;
  double min_singular_value = 0.0;
};

/// Throws DomainError at t in {0, pi/2} (mod pi).
CoincidenceReport verify_coincidence(double t, int samples, std::uint64_t seed);

/// Decomposition of T_V G_3(so(4)) and of the image of Psi_* under sp(1)_Delta at t = pi/4.
struct ImageDecomposition {
  WeightDecomposition tangent;
  WeightDecomposition image;
  double invariance_residual = 0.0;
};
ImageDecomposition decompose_image(double t = 0.78539816339744830962);

struct GeodesicRow {
  double t = 0.0;
  double lambda = 0.0;
  double psi = 0.0;
  double overlap_ef = 0.0;
  double overlap_ee = 0.0;
  std::optional<double> eta1, eta2, eta_ratio;
};

/// Table row; the eta columns are empty at the poles.
GeodesicRow geodesic_row(double t);
std::string geodesic_csv(const std::vector<GeodesicRow>& rows);

}  // namespace grasslab
