#include "grasslab/grass.hpp"

#include <cmath>

#include <unsupported/Eigen/MatrixFunctions>

namespace grasslab {

namespace {

constexpr double kFrameTol = 1e-12;

// Modified Gram-Schmidt; throws if a column is (numerically) dependent.
Matrix orthonormalize(const Matrix& a) {
  Matrix q = a;
  for (int j = 0; j < q.cols(); ++j) {
    for (int pass = 0; pass < 2; ++pass)
      for (int i = 0; i < j; ++i) q.col(j) -= q.col(i).dot(q.col(j)) * q.col(i);
    const double nrm = q.col(j).norm();
    if (nrm < 1e-12 * std::max(1.0, a.col(j).norm())) throw InputError("spanning columns are linearly dependent");
    q.col(j) /= nrm;
  }
  return q;
}

// Orthonormal basis of the complement of the column span of q (orthonormal).
Matrix complement_basis(const Matrix& q) {
  const int n = static_cast<int>(q.rows()), k = static_cast<int>(q.cols());
  const Matrix p = Matrix::Identity(n, n) - q * q.transpose();
  // Greedy: project the standard basis, keep the largest remainders.
  Matrix out(n, n - k);
  Matrix cur = p;
  for (int c = 0; c < n - k; ++c) {
    Eigen::Index best = 0;
    cur.colwise().norm().maxCoeff(&best);
    Vector w = cur.col(best);
    w /= w.norm();
    out.col(c) = w;
    cur -= w * (w.transpose() * cur);
  }
  return orthonormalize(out);
}

void check_tangent(const GrassPoint& v, const Matrix& t) {
  if (t.rows() != v.k() || t.cols() != v.codim()) throw InputError("tangent coefficients have the wrong shape");
}

}  // namespace

GrassPoint GrassPoint::from_frames(Matrix frame, Matrix coframe, int orientation) {
  const Eigen::Index n = frame.rows();
  if (coframe.rows() != n || frame.cols() + coframe.cols() != n)
    throw InputError("frame and coframe must together form an n x n matrix");
  if (frame.cols() == 0 || coframe.cols() == 0) throw InputError("plane must be proper and nonzero");
  if (orientation != 1 && orientation != -1) throw InputError("orientation must be +1 or -1");
  Matrix full(n, n);
  full << frame, coframe;
  if ((full.transpose() * full - Matrix::Identity(n, n)).cwiseAbs().maxCoeff() > kFrameTol)
    throw InputError("frame and coframe are not orthonormal");
  return GrassPoint{std::move(frame), std::move(coframe), orientation};
}

GrassPoint GrassPoint::from_spanning(const Matrix& spanning, int orientation) {
  if (spanning.cols() == 0 || spanning.cols() >= spanning.rows()) throw InputError("plane must be proper and nonzero");
  const Matrix q = orthonormalize(spanning);
  return from_frames(q, complement_basis(q), orientation);
}

GrassPoint GrassPoint::with_swapped_columns(int i, int j) const {
  if (i < 0 || j < 0 || i >= k() || j >= k()) throw InputError("column index out of range");
  GrassPoint out = *this;
  if (i == j) return out;
  out.frame.col(i).swap(out.frame.col(j));
  out.orientation = -orientation;
  return out;
}

GrassPoint GrassPoint::reversed() const {
  GrassPoint out = *this;
  out.orientation = -orientation;
  return out;
}

GrassPoint GrassPoint::rotated(const Matrix& r, const Matrix& s) const {
  if (r.rows() != k() || r.cols() != k() || s.rows() != codim() || s.cols() != codim())
    throw InputError("rotation matrices have the wrong shape");
  const double det = r.determinant();
  return from_frames(frame * r, coframe * s, det > 0 ? orientation : -orientation);
}

GrassPoint GrassPoint::complement() const { return GrassPoint{coframe, frame, orientation}; }

double grassmann_distance(const GrassPoint& a, const GrassPoint& b) {
  if (a.n() != b.n() || a.k() != b.k()) throw InputError("planes of different type");
  // Principal angles from cosines and sines; acos alone loses small angles.
  const Matrix ab = a.frame.transpose() * b.frame;
  const Vector cosines = Eigen::JacobiSVD<Matrix>(ab).singularValues();
  const Vector sines = Eigen::JacobiSVD<Matrix>(b.frame - a.frame * ab).singularValues();
  const Eigen::Index k = cosines.size();
  double acc = 0.0;
  for (Eigen::Index i = 0; i < k; ++i) {
    const double th = std::atan2(sines(k - 1 - i), cosines(i));
    acc += th * th;
  }
  return std::sqrt(acc);
}

TangentVec TangentVec::zero(const GrassPoint& base) { return {base, Matrix::Zero(base.k(), base.codim())}; }

TangentVec TangentVec::basis(const GrassPoint& base, int i, int j) {
  if (i < 0 || j < 0 || i >= base.k() || j >= base.codim()) throw InputError("tangent index out of range");
  TangentVec t = zero(base);
  t.coeffs(i, j) = 1.0;
  return t;
}

Matrix TangentVec::ambient() const { return base.coframe * coeffs.transpose() * base.frame.transpose(); }

TangentVec TangentVec::in_frame(const GrassPoint& other) const {
  if (other.n() != base.n() || other.k() != base.k()) throw InputError("frames of different type");
  if ((other.projector() - base.projector()).cwiseAbs().maxCoeff() > 1e-10)
    throw InputError("frames span different planes");
  const Matrix r = base.frame.transpose() * other.frame;
  const Matrix s = base.coframe.transpose() * other.coframe;
  return {other, r.transpose() * coeffs * s};
}

double tangent_inner(const TangentVec& a, const TangentVec& b) {
  if (a.coeffs.rows() != b.coeffs.rows() || a.coeffs.cols() != b.coeffs.cols())
    throw InputError("tangent vectors of different shape");
  return (a.coeffs.array() * b.coeffs.array()).sum();
}

AmbientSection constant_section(const Vector& a) {
  return {[a](const GrassPoint& p) -> Vector { return p.frame * (p.frame.transpose() * a); },
          AmbientSection::Kind::tangential};
}

AmbientSection constant_section_perp(const Vector& a) {
  return {[a](const GrassPoint& p) -> Vector { return p.coframe * (p.coframe.transpose() * a); },
          AmbientSection::Kind::normal};
}

Vector evaluate(const VectorForm& form, const TangentVec& t) {
  const Eigen::Index m = t.coeffs.size();
  if (form.cols() != m) throw InputError("form and tangent vector do not match");
  Vector flat(m);
  for (int i = 0; i < t.base.k(); ++i)
    for (int j = 0; j < t.base.codim(); ++j) flat(tangent_index(t.base, i, j)) = t.coeffs(i, j);
  return form * flat;
}

GrassPoint curve_alpha(const GrassPoint& v, int i, int j, double r) {
  if (i < 0 || j < 0 || i >= v.k() || j >= v.codim()) throw InputError("curve index out of range");
  GrassPoint out = v;
  const Vector vi = v.frame.col(i), wj = v.coframe.col(j);
  out.frame.col(i) = std::cos(r) * vi + std::sin(r) * wj;
  out.coframe.col(j) = -std::sin(r) * vi + std::cos(r) * wj;
  return out;
}

GrassPoint geodesic_point(const GrassPoint& v, const Matrix& t, double r) {
  check_tangent(v, t);
  const int n = v.n(), k = v.k();
  Matrix g = Matrix::Zero(n, n);
  g.topRightCorner(k, n - k) = -t;
  g.bottomLeftCorner(n - k, k) = t.transpose();
  Matrix full(n, n);
  full << v.frame, v.coframe;
  const Matrix rotated = full * (r * g).exp();
  return GrassPoint{rotated.leftCols(k), rotated.rightCols(n - k), v.orientation};
}

GrassPoint chart_point(const GrassPoint& v, const Matrix& t) {
  check_tangent(v, t);
  const Matrix span = v.frame + v.coframe * t.transpose();
  const Matrix q = orthonormalize(span);
  const Matrix wspan = v.coframe - v.frame * t;
  return GrassPoint{q, orthonormalize(wspan), v.orientation};
}

std::pair<Vector, Vector> project(const GrassPoint& v, const Vector& x) {
  if (x.size() != v.n()) throw InputError("vector has the wrong dimension");
  Vector tang = v.frame * (v.frame.transpose() * x);
  Vector norm = x - tang;
  return {std::move(tang), std::move(norm)};
}

VectorForm sff(const GrassPoint& v, const Vector& u) {
  const auto [tang, norm] = project(v, u);
  if (norm.norm() > 1e-10 * std::max(1.0, u.norm())) throw InputError("sff: vector is not in V");
  const Vector a = v.frame.transpose() * u;
  VectorForm out = Matrix::Zero(v.n(), v.k() * v.codim());
  for (int i = 0; i < v.k(); ++i)
    for (int j = 0; j < v.codim(); ++j) out.col(tangent_index(v, i, j)) = a(i) * v.coframe.col(j);
  return out;
}

VectorForm sff_perp(const GrassPoint& v, const Vector& y) {
  const auto [tang, norm] = project(v, y);
  if (tang.norm() > 1e-10 * std::max(1.0, y.norm())) throw InputError("sff_perp: vector is not in V^perp");
  const Vector b = v.coframe.transpose() * y;
  VectorForm out = Matrix::Zero(v.n(), v.k() * v.codim());
  for (int i = 0; i < v.k(); ++i)
    for (int j = 0; j < v.codim(); ++j) out.col(tangent_index(v, i, j)) = -b(j) * v.frame.col(i);
  return out;
}

VectorForm imap(const GrassPoint& v, const Vector& s) {
  const auto [tang, norm] = project(v, s);
  return sff(v, tang) - sff_perp(v, norm);
}

Vector section_derivative(const AmbientSection& s, const TangentVec& t, const DiffConfig& cfg) {
  check_tangent(t.base, t.coeffs);
  const double h = cfg.step;
  auto central = [&](double step) {
    return Vector((s(geodesic_point(t.base, t.coeffs, step)) - s(geodesic_point(t.base, t.coeffs, -step))) /
                  (2.0 * step));
  };
  if (!cfg.richardson) return central(h);
  return Vector((4.0 * central(h) - central(2.0 * h)) / 3.0);
}

VectorForm section_differential(const AmbientSection& s, const GrassPoint& v, const DiffConfig& cfg) {
  VectorForm out(v.n(), v.k() * v.codim());
  for (int i = 0; i < v.k(); ++i)
    for (int j = 0; j < v.codim(); ++j)
      out.col(tangent_index(v, i, j)) = section_derivative(s, TangentVec::basis(v, i, j), cfg);
  return out;
}

Vector covariant_derivative(const AmbientSection& s, const TangentVec& t, const DiffConfig& cfg) {
  return project(t.base, section_derivative(s, t, cfg)).first;
}

std::vector<Matrix> twistor_D(const AmbientSection& s, const GrassPoint& v, const DiffConfig& cfg) {
  const int k = v.k(), c = v.codim();
  std::vector<Matrix> out(c, Matrix::Zero(k, k));
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < c; ++b) {
      const Vector nab = v.frame.transpose() * section_derivative(s, TangentVec::basis(v, a, b), cfg);
      out[b].row(a) = nab.transpose();
    }
  for (auto& m : out) m.diagonal().array() -= m.trace() / k;
  return out;
}

double twistor_norm(const std::vector<Matrix>& d) {
  double acc = 0.0;
  for (const auto& m : d) acc += m.squaredNorm();
  return std::sqrt(acc);
}

Vector contraction_c(const GrassPoint& v, const VectorForm& tau) {
  if (tau.rows() != v.n() || tau.cols() != v.k() * v.codim()) throw InputError("form has the wrong shape");
  Vector out = Vector::Zero(v.n());
  for (int i = 0; i < v.k(); ++i)
    for (int j = 0; j < v.codim(); ++j) {
      const Vector val = tau.col(tangent_index(v, i, j));
      out += val.dot(v.frame.col(i)) * v.coframe.col(j) + val.dot(v.coframe.col(j)) * v.frame.col(i);
    }
  return out;
}

Matrix one_wedge_i_matrix(const GrassPoint& v) {
  // Basis of T* (x) R^n: theta_ab (x) e_x with e_x the frame [V W]; an element
  // is stored as an n x m form (m = k(n-k)) flattened column-major.
  const int n = v.n(), m = v.k() * v.codim();
  Matrix full(n, n);
  full << v.frame, v.coframe;
  Matrix out = Matrix::Zero(n * m, n * m);
  // For tau = theta_ab (x) x: (1 ^ i)(tau) = sum_cd (theta_ab (x) theta_cd - theta_cd (x) theta_ab) (x) i(x)(T_cd)
  // and c acts on the last T* slot together with the value.
  for (int x = 0; x < n; ++x) {
    const VectorForm ix = imap(v, full.col(x));
    // c(theta_cd (x) y) as a single-direction contraction.
    auto contract = [&](int col, const Vector& y) {
      VectorForm single = Matrix::Zero(n, m);
      single.col(col) = y;
      return contraction_c(v, single);
    };
    for (int ab = 0; ab < m; ++ab) {
      VectorForm result = Matrix::Zero(n, m);
      for (int cd = 0; cd < m; ++cd) {
        const Vector y = ix.col(cd);
        result.col(ab) += contract(cd, y);
        result.col(cd) -= contract(ab, y);
      }
      // Express values in frame coordinates.
      const Matrix coords = full.transpose() * result;
      out.col(ab * n + x) = Eigen::Map<const Vector>(coords.data(), n * m);
    }
  }
  return out;
}

int one_wedge_i_kernel(const GrassPoint& v) {
  const Matrix a = one_wedge_i_matrix(v);
  Eigen::JacobiSVD<Matrix> svd(a);
  const auto& sv = svd.singularValues();
  const double tol = 1e-10 * std::max(1.0, sv(0));
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > tol) ++rank;
  return static_cast<int>(a.cols()) - rank;
}

}  // namespace grasslab
