#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "grasslab/common.hpp"

namespace grasslab {

/// Oriented k-plane V in R^n with explicit orthonormal frames of V and V^perp.
///
/// The oriented plane is orientation * (v_1 ^ .. ^ v_k). Swapping two frame
/// columns flips `orientation`, so the oriented plane itself is unchanged.
struct GrassPoint {
  Matrix frame;    ///< n x k, columns v_i
  Matrix coframe;  ///< n x (n-k), columns w_j
  int orientation = 1;

  int n() const { return static_cast<int>(frame.rows()); }
  int k() const { return static_cast<int>(frame.cols()); }
  int codim() const { return static_cast<int>(coframe.cols()); }
  Matrix projector() const { return frame * frame.transpose(); }

  /// Validates orthonormality (1e-12) and shapes. Throws InputError.
  static GrassPoint from_frames(Matrix frame, Matrix coframe, int orientation = 1);
  /// Orthonormalizes the columns (Gram-Schmidt order, orientation kept) and
  /// completes a coframe. Throws InputError if the columns are dependent.
  static GrassPoint from_spanning(const Matrix& spanning, int orientation = 1);

  GrassPoint with_swapped_columns(int i, int j) const;
  /// Same frames, opposite orientation.
  GrassPoint reversed() const;
  /// Frame -> frame R, coframe -> coframe S (R, S orthogonal). The oriented
  /// plane is preserved: orientation picks up det R.
  GrassPoint rotated(const Matrix& r, const Matrix& s) const;
  /// The complementary point (V^perp, V).
  GrassPoint complement() const;
};

/// Grassmann (principal-angle) distance between the underlying unoriented planes.
double grassmann_distance(const GrassPoint& a, const GrassPoint& b);

/// Tangent vector at a point: T(i,j) is the component along v_i (x) w_j,
/// i.e. the homomorphism v_i -> sum_j T(i,j) w_j from V to V^perp.
struct TangentVec {
  GrassPoint base;
  Matrix coeffs;  ///< k x (n-k)

  static TangentVec zero(const GrassPoint& base);
  static TangentVec basis(const GrassPoint& base, int i, int j);
  /// Ambient n x n matrix of the homomorphism (zero on V^perp).
  Matrix ambient() const;
  /// Re-expressed in the frames of another point spanning the same planes.
  TangentVec in_frame(const GrassPoint& other) const;
  double norm() const { return coeffs.norm(); }
};

/// Frame metric sum_ij T(i,j) S(i,j); both must share the base frames.
double tangent_inner(const TangentVec& a, const TangentVec& b);

/// Section of the trivial bundle R^n over the Grassmannian.
struct AmbientSection {
  enum class Kind { general, tangential, normal };
  std::function<Vector(const GrassPoint&)> fn;
  Kind kind = Kind::general;

  Vector operator()(const GrassPoint& p) const { return fn(p); }
};

/// s_A = pi A (tangential) and s_A^perp = pi^perp A (normal).
AmbientSection constant_section(const Vector& a);
AmbientSection constant_section_perp(const Vector& a);

/// Element of T* (x) R^n: column i*(n-k)+j is the value on T_ij.
using VectorForm = Matrix;

inline int tangent_index(const GrassPoint& p, int i, int j) { return i * p.codim() + j; }
/// Value of a form on a tangent vector.
Vector evaluate(const VectorForm& form, const TangentVec& t);

struct DiffConfig {
  double step = 1e-4;   ///< central differences, first derivatives
  double step2 = 1e-3;  ///< second derivatives
  bool richardson = true;  ///< combine steps h and 2h for O(h^4) error
};

/// alpha_ij(r): v_i -> cos r v_i + sin r w_j and w_j -> -sin r v_i + cos r w_j.
/// Indices are 0-based. Throws InputError when out of range.
GrassPoint curve_alpha(const GrassPoint& v, int i, int j, double r);
/// Geodesic [V W] exp(r G), G = [[0, -T], [T^T, 0]], through V with velocity T.
GrassPoint geodesic_point(const GrassPoint& v, const Matrix& t, double r);
/// Graph chart around V: span of the columns frame + coframe T^T.
GrassPoint chart_point(const GrassPoint& v, const Matrix& t);

/// (pi x, pi^perp x).
std::pair<Vector, Vector> project(const GrassPoint& v, const Vector& x);

/// II(u)(T_ab) = <u, v_a> w_b. Throws InputError unless u lies in V (1e-10).
VectorForm sff(const GrassPoint& v, const Vector& u);
/// II^perp(y)(T_ab) = -<y, w_b> v_a. Throws InputError unless y lies in V^perp.
VectorForm sff_perp(const GrassPoint& v, const Vector& y);
/// i(S) = II(pi S) - II^perp(pi^perp S); equals d s_A for S = A.
VectorForm imap(const GrassPoint& v, const Vector& s);

/// Central-difference derivative of a section along a tangent vector.
Vector section_derivative(const AmbientSection& s, const TangentVec& t, const DiffConfig& cfg = {});
/// d s on every basis direction T_ij.
VectorForm section_differential(const AmbientSection& s, const GrassPoint& v, const DiffConfig& cfg = {});
/// nabla_T s = pi d s (T).
Vector covariant_derivative(const AmbientSection& s, const TangentVec& t, const DiffConfig& cfg = {});

/// D s in V^perp (x) (V (x) V)_0: entry [b](a, l) is the v_l-component of
/// nabla_{T_ab} s minus (1/k) delta_al times the trace over a = l.
std::vector<Matrix> twistor_D(const AmbientSection& s, const GrassPoint& v, const DiffConfig& cfg = {});
/// Frobenius norm of a twistor value.
double twistor_norm(const std::vector<Matrix>& d);

/// c(tau) = sum_ij <tau(T_ij), v_i> w_j + sum_ij <tau(T_ij), w_j> v_i.
Vector contraction_c(const GrassPoint& v, const VectorForm& tau);
/// Matrix of c o (1 ^ i) on T* (x) R^n in frame coordinates.
Matrix one_wedge_i_matrix(const GrassPoint& v);
/// dim ker c o (1 ^ i), by a rank-revealing SVD.
int one_wedge_i_kernel(const GrassPoint& v);

/// Uniformly random oriented k-plane (orthonormalized Gaussian matrix).
template <class Rng>
GrassPoint random_grass_point(Rng& rng, int n, int k);

/// Random orthogonal d x d matrix.
template <class Rng>
Matrix random_orthogonal(Rng& rng, int d);

}  // namespace grasslab

#include <random>

namespace grasslab {

template <class Rng>
Matrix random_orthogonal(Rng& rng, int d) {
  std::normal_distribution<double> dist;
  Matrix g(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) g(i, j) = dist(rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ() * Matrix::Identity(d, d);
  const Matrix r = qr.matrixQR().template triangularView<Eigen::Upper>();
  for (int i = 0; i < d; ++i)
    if (r(i, i) < 0) q.col(i) = -q.col(i);
  return q;
}

template <class Rng>
GrassPoint random_grass_point(Rng& rng, int n, int k) {
  std::normal_distribution<double> dist;
  Matrix g(n, k);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < k; ++j) g(i, j) = dist(rng);
  return GrassPoint::from_spanning(g);
}

}  // namespace grasslab
