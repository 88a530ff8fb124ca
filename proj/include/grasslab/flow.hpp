#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "grasslab/grass.hpp"
#include "grasslab/liealg.hpp"

namespace grasslab {

/// psi(V) = orientation * <[v1, v2], v3> for a 3-plane in an algebra whose
/// basis is orthonormal. Throws InputError if k != 3 or the Gram matrix is
/// not the identity.
double psi(const LieAlgebra& alg, const GrassPoint& v);

/// grad psi: T(i, r) = orientation * <[v_{i+1}, v_{i+2}], w_r>.
TangentVec grad_psi(const LieAlgebra& alg, const GrassPoint& v);

/// Killing tangent of A at V: T(i, r) = <[A, v_i], w_r>.
TangentVec killing_tangent(const LieAlgebra& alg, const GrassPoint& v, const Vector& a);

/// Induced action of A on T_V G: the tangent to t -> Ad_exp(tA) of the
/// homomorphism P, i.e. [ad A, P] read in the frames of V.
TangentVec isotropy_action(const LieAlgebra& alg, const TangentVec& p, const Vector& a);

/// Plane moved by an algebra automorphism (orthogonal in the orthonormal basis).
GrassPoint transform(const GrassPoint& v, const Matrix& automorphism);

enum class Retraction { orthonormalize, polar };
enum class FlowDirection { ascend, descend };

struct FlowConfig {
  double step = 0.5;
  int max_iters = 5000;
  double grad_tol = 1e-10;
  Retraction retraction = Retraction::orthonormalize;
};

enum class CriticalKind { subalgebra_sp1, abelian, other };
std::string to_string(CriticalKind kind);

struct CriticalReport {
  GrassPoint point;
  double psi_value = 0.0;
  CriticalKind kind = CriticalKind::other;
  double gradient_norm = 0.0;
  int iterations = 0;
  bool converged = false;
  bool monotone = true;
  bool stalled = false;
};

/// Classifies a plane: subalgebra-sp1 if every |pi^perp [v_i, v_j]| < 1e-8
/// and |[v1, v2]| > 1e-4; abelian if all brackets are below 1e-4 and the
/// plane is closed; other otherwise.
CriticalKind classify(const LieAlgebra& alg, const GrassPoint& v);

struct FlowSample {
  int iter = 0;
  double psi = 0.0;
  double grad_norm = 0.0;
  Matrix frame;
};

struct FlowResult {
  std::vector<FlowSample> trajectory;
  CriticalReport report;
};

/// Gradient ascent of psi, or descent of psi^2 / 2 (whose minima on the
/// unoriented Grassmannian are the psi = 0 planes). The step is capped so
/// that step * |grad| <= 1 and halved up to 30 times whenever the objective
/// fails to improve; after that the run is declared stalled.
FlowResult flow_run(const LieAlgebra& alg, const GrassPoint& v0, FlowDirection dir, const FlowConfig& cfg = {},
                    bool record = false);

/// V(x, y) = span{x e_i + y f_i} in so(4); requires x^2 + y^2 = 1 (1e-10).
GrassPoint trajectory_so4(double x, double y);
/// sp(1)_+, sp(1)_-, and the diagonal sp(1)_Delta as oriented planes in so(4).
GrassPoint sp1_plus();
GrassPoint sp1_minus();
GrassPoint sp1_diagonal();
/// The involution e_i <-> f_i of so(4).
Matrix so4_swap();
/// Random plane fixed by so4_swap: one unit vector in span{e_i + f_i} and an
/// orthonormal pair in span{e_i - f_i}.
template <class Rng>
GrassPoint random_symmetric_seed(Rng& rng);

/// One trajectory row per sample: iter, psi, grad_norm, then 3n frame entries.
std::string trajectory_csv(const FlowResult& result);
nlohmann::json summary_json(const FlowResult& result, std::uint64_t seed);

/// Terminal |psi| values grouped within tol, ascending.
std::vector<double> critical_catalog(const std::vector<double>& terminal_psi, double tol = 1e-4);

}  // namespace grasslab

namespace grasslab {

template <class Rng>
GrassPoint random_symmetric_seed(Rng& rng) {
  std::normal_distribution<double> dist;
  const double s = 1.0 / std::sqrt(2.0);
  Vector d(3), a1(3), a2(3);
  for (int i = 0; i < 3; ++i) {
    d(i) = dist(rng);
    a1(i) = dist(rng);
    a2(i) = dist(rng);
  }
  Matrix span = Matrix::Zero(6, 3);
  span.block(0, 0, 3, 1) = s * d;
  span.block(3, 0, 3, 1) = s * d;
  span.block(0, 1, 3, 1) = s * a1;
  span.block(3, 1, 3, 1) = -s * a1;
  span.block(0, 2, 3, 1) = s * a2;
  span.block(3, 2, 3, 1) = -s * a2;
  return GrassPoint::from_spanning(span);
}

}  // namespace grasslab
