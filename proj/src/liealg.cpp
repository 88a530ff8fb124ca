#include "grasslab/liealg.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include <unsupported/Eigen/MatrixFunctions>

namespace grasslab {

namespace {

// Coordinates of a complex matrix as a real vector (real parts, then imaginary).
Vector realify(const CMatrix& m) {
  const Eigen::Index n = m.size();
  Vector v(2 * n);
  for (Eigen::Index i = 0; i < n; ++i) {
    v(i) = m.data()[i].real();
    v(n + i) = m.data()[i].imag();
  }
  return v;
}

double trace_form(const CMatrix& a, const CMatrix& b) { return (a * b).trace().real(); }

}  // namespace

LieAlgebra::LieAlgebra(std::string name, std::vector<Matrix> structure, Matrix gram,
                       std::optional<std::vector<CMatrix>> matrix_rep)
    : name_(std::move(name)),
      structure_(std::move(structure)),
      gram_(std::move(gram)),
      matrix_rep_(std::move(matrix_rep)) {
  const int n = static_cast<int>(gram_.rows());
  if (n <= 0 || gram_.cols() != n) throw InputError("gram must be a non-empty square matrix");
  if (static_cast<int>(structure_.size()) != n) throw InputError("structure must hold dim matrices");
  for (const auto& s : structure_)
    if (s.rows() != n || s.cols() != n) throw InputError("structure slice has wrong shape");
  if ((gram_ - gram_.transpose()).cwiseAbs().maxCoeff() > 1e-12)
    throw InputError("gram must be symmetric");
  Eigen::LLT<Matrix> llt(gram_);
  if (llt.info() != Eigen::Success) throw InputError("gram must be positive definite");
  if (matrix_rep_ && static_cast<int>(matrix_rep_->size()) != n)
    throw InputError("matrix representation must have dim entries");
}

LieAlgebra LieAlgebra::from_matrices(std::string name, std::vector<CMatrix> basis,
                                     InnerProductNormalization norm) {
  const int n = static_cast<int>(basis.size());
  if (n == 0) throw InputError("empty basis");
  Matrix coords(2 * basis[0].size(), n);
  for (int i = 0; i < n; ++i) coords.col(i) = realify(basis[i]);
  Eigen::ColPivHouseholderQR<Matrix> qr(coords);
  if (qr.rank() != n) throw InputError("basis matrices are linearly dependent");

  Matrix gram(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) gram(i, j) = -norm.scale * trace_form(basis[i], basis[j]);

  std::vector<Matrix> structure(n, Matrix::Zero(n, n));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const CMatrix comm = basis[i] * basis[j] - basis[j] * basis[i];
      const Vector target = realify(comm);
      const Vector c = qr.solve(target);
      if ((coords * c - target).norm() > 1e-10 * (1.0 + target.norm()))
        throw InputError("matrix span is not closed under commutators");
      for (int k = 0; k < n; ++k) structure[k](i, j) = c(k);
    }
  }
  return LieAlgebra(std::move(name), std::move(structure), std::move(gram), std::move(basis));
}

const std::vector<CMatrix>& LieAlgebra::matrix_rep() const {
  if (!matrix_rep_) throw InputError("algebra '" + name_ + "' has no matrix representation");
  return *matrix_rep_;
}

void LieAlgebra::check_dim(const Vector& x) const {
  if (x.size() != dim())
    throw InputError("element of dimension " + std::to_string(x.size()) +
                     " does not belong to algebra of dimension " + std::to_string(dim()));
}

Vector LieAlgebra::bracket(const Vector& x, const Vector& y) const {
  check_dim(x);
  check_dim(y);
  Vector out(dim());
  for (int k = 0; k < dim(); ++k) out(k) = x.dot(structure_[k] * y);
  return out;
}

double LieAlgebra::inner(const Vector& x, const Vector& y) const {
  check_dim(x);
  check_dim(y);
  return x.dot(gram_ * y);
}

double LieAlgebra::norm(const Vector& x) const { return std::sqrt(std::max(0.0, inner(x, x))); }

Matrix LieAlgebra::ad(const Vector& x) const {
  check_dim(x);
  Matrix out(dim(), dim());
  for (int k = 0; k < dim(); ++k) out.row(k) = x.transpose() * structure_[k];
  return out;
}

Matrix LieAlgebra::killing_form() const {
  const int n = dim();
  std::vector<Matrix> ads;
  ads.reserve(n);
  for (int i = 0; i < n; ++i) ads.push_back(ad(basis_vector(i)));
  Matrix k(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) k(i, j) = (ads[i] * ads[j]).trace();
  return k;
}

Vector LieAlgebra::basis_vector(int i) const {
  if (i < 0 || i >= dim()) throw InputError("basis index out of range");
  return Vector::Unit(dim(), i);
}

CMatrix LieAlgebra::to_matrix(const Vector& x) const {
  check_dim(x);
  const auto& rep = matrix_rep();
  CMatrix out = CMatrix::Zero(rep[0].rows(), rep[0].cols());
  for (int i = 0; i < dim(); ++i) out += x(i) * rep[i];
  return out;
}

Vector LieAlgebra::from_matrix(const CMatrix& m, double tol) const {
  const auto& rep = matrix_rep();
  if (m.rows() != rep[0].rows() || m.cols() != rep[0].cols())
    throw InputError("matrix has the wrong shape for this representation");
  Matrix coords(2 * m.size(), dim());
  for (int i = 0; i < dim(); ++i) coords.col(i) = realify(rep[i]);
  const Vector target = realify(m);
  const Vector c = coords.colPivHouseholderQr().solve(target);
  if ((coords * c - target).norm() > tol * (1.0 + target.norm()))
    throw InputError("matrix does not lie in the algebra");
  return c;
}

std::pair<LieAlgebra, Matrix> LieAlgebra::orthonormalized() const {
  // gram = L L^T; new basis Y = X L^{-T}, so old = L^{-T} new.
  Eigen::LLT<Matrix> llt(gram_);
  const Matrix l = llt.matrixL();
  const Matrix b = l.transpose().triangularView<Eigen::Upper>().solve(Matrix::Identity(dim(), dim()));
  const Matrix binv = l.transpose();
  const int n = dim();
  std::vector<Matrix> s(n, Matrix::Zero(n, n));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const Vector c = binv * bracket(b.col(i), b.col(j));
      for (int k = 0; k < n; ++k) s[k](i, j) = c(k);
    }
  }
  std::optional<std::vector<CMatrix>> rep;
  if (matrix_rep_) {
    rep.emplace();
    for (int i = 0; i < n; ++i) rep->push_back(to_matrix(b.col(i)));
  }
  return {LieAlgebra(name_, std::move(s), Matrix::Identity(n, n), std::move(rep)), b};
}

double LieAlgebra::antisymmetry_residual() const {
  double r = 0.0;
  for (const auto& s : structure_) r = std::max(r, (s + s.transpose()).cwiseAbs().maxCoeff());
  return r;
}

double LieAlgebra::jacobi_residual() const {
  double r = 0.0;
  const int n = dim();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        const Vector a = basis_vector(i), b = basis_vector(j), c = basis_vector(k);
        const Vector jac = bracket(a, bracket(b, c)) + bracket(b, bracket(c, a)) + bracket(c, bracket(a, b));
        r = std::max(r, jac.cwiseAbs().maxCoeff());
      }
  return r;
}

double LieAlgebra::ad_invariance_residual() const {
  double r = 0.0;
  const int n = dim();
  for (int z = 0; z < n; ++z) {
    const Matrix adz = ad(basis_vector(z));
    // <[Z,X],Y> + <X,[Z,Y]> for all basis X,Y is the symmetric part of gram*adz.
    const Matrix m = adz.transpose() * gram_ + gram_ * adz;
    r = std::max(r, m.cwiseAbs().maxCoeff());
  }
  return r;
}

double LieAlgebra::representation_residual() const {
  if (!matrix_rep_) return 0.0;
  double r = 0.0;
  const auto& rep = *matrix_rep_;
  const int n = dim();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      CMatrix expected = rep[i] * rep[j] - rep[j] * rep[i];
      for (int k = 0; k < n; ++k) expected -= structure(i, j, k) * rep[k];
      r = std::max(r, expected.cwiseAbs().maxCoeff());
    }
  return r;
}

GroupElement GroupElement::identity(const LieAlgebra& alg) {
  std::optional<CMatrix> m;
  if (alg.has_matrix_rep()) {
    const auto n = alg.matrix_rep()[0].rows();
    m = CMatrix::Identity(n, n);
  }
  return GroupElement(Matrix::Identity(alg.dim(), alg.dim()), std::move(m));
}

GroupElement GroupElement::exp(const LieAlgebra& alg, const Vector& z, double t) {
  if (alg.has_matrix_rep()) {
    const CMatrix g = (t * alg.to_matrix(z)).exp();
    return from_matrix(alg, g);
  }
  const Matrix ad = (t * alg.ad(z)).exp();
  return GroupElement(ad, std::nullopt);
}

GroupElement GroupElement::from_matrix(const LieAlgebra& alg, const CMatrix& g) {
  Eigen::FullPivLU<CMatrix> lu(g);
  if (!lu.isInvertible()) throw InputError("group matrix is singular");
  const CMatrix ginv = lu.inverse();
  const int n = alg.dim();
  Matrix ad(n, n);
  for (int i = 0; i < n; ++i) ad.col(i) = alg.from_matrix(g * alg.matrix_rep()[i] * ginv);
  return GroupElement(ad, g);
}

GroupElement GroupElement::from_adjoint(const LieAlgebra& alg, const Matrix& a, double tol) {
  const int n = alg.dim();
  if (a.rows() != n || a.cols() != n) throw InputError("adjoint image has the wrong shape");
  if ((a.transpose() * alg.gram() * a - alg.gram()).cwiseAbs().maxCoeff() > tol)
    throw InputError("adjoint image does not preserve the inner product");
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const Vector lhs = a * alg.bracket(alg.basis_vector(i), alg.basis_vector(j));
      const Vector rhs = alg.bracket(a.col(i), a.col(j));
      if ((lhs - rhs).cwiseAbs().maxCoeff() > tol)
        throw InputError("adjoint image is not a bracket automorphism");
    }
  return GroupElement(a, std::nullopt);
}

GroupElement GroupElement::operator*(const GroupElement& other) const {
  std::optional<CMatrix> m;
  if (matrix_ && other.matrix_) m = (*matrix_) * (*other.matrix_);
  return GroupElement(ad_ * other.ad_, std::move(m));
}

GroupElement GroupElement::inverse() const {
  std::optional<CMatrix> m;
  if (matrix_) m = matrix_->inverse();
  return GroupElement(ad_.inverse(), std::move(m));
}

Vector bracket(const LieAlgebra& alg, const Vector& x, const Vector& y) { return alg.bracket(x, y); }
double inner(const LieAlgebra& alg, const Vector& x, const Vector& y) { return alg.inner(x, y); }

Vector adjoint_action(const GroupElement& g, const Vector& x) {
  if (x.size() != g.adjoint().cols()) throw InputError("element and group act on different algebras");
  return g.adjoint() * x;
}

namespace so4 {

std::vector<CMatrix> basis_matrices() {
  const double s = 1.0 / std::sqrt(2.0);
  const Complex i(0.0, 1.0);
  auto zero = [] { return CMatrix::Zero(4, 4).eval(); };
  CMatrix e1 = zero(), e2 = zero(), e3 = zero(), f1 = zero(), f2 = zero(), f3 = zero();
  e1(0, 0) = s * i;
  e1(2, 2) = -s * i;
  f1(1, 1) = s * i;
  f1(3, 3) = -s * i;
  e2(0, 2) = s;
  e2(2, 0) = -s;
  f2(1, 3) = s;
  f2(3, 1) = -s;
  e3(0, 2) = s * i;
  e3(2, 0) = s * i;
  f3(1, 3) = s * i;
  f3(3, 1) = s * i;
  return {e1, e2, e3, f1, f2, f3};
}

}  // namespace so4

LieAlgebra make_so4() { return LieAlgebra::from_matrices("so4", so4::basis_matrices()); }

CMatrix sp2_form() {
  CMatrix j = CMatrix::Zero(4, 4);
  j(0, 2) = 1.0;
  j(1, 3) = 1.0;
  j(2, 0) = -1.0;
  j(3, 1) = -1.0;
  return j;
}

CMatrix sp2_geodesic_generator() {
  CMatrix u = CMatrix::Zero(4, 4);
  u(0, 1) = 1.0;
  u(1, 0) = -1.0;
  u(2, 3) = 1.0;
  u(3, 2) = -1.0;
  return u;
}

LieAlgebra make_sp2() {
  const Complex i(0.0, 1.0);
  auto ip = [](const CMatrix& a, const CMatrix& b) { return -trace_form(a, b); };

  // Spanning set [[A, B], [-conj(B), conj(A)]] with A in u(2), B symmetric.
  std::vector<CMatrix> candidates;
  auto block = [](const Eigen::Matrix2cd& a, const Eigen::Matrix2cd& b) {
    CMatrix x(4, 4);
    x << a, b, -b.conjugate(), a.conjugate();
    return x;
  };
  const Eigen::Matrix2cd z = Eigen::Matrix2cd::Zero();
  Eigen::Matrix2cd e11 = z, e22 = z, e12 = z, e21 = z;
  e11(0, 0) = 1.0;
  e22(1, 1) = 1.0;
  e12(0, 1) = 1.0;
  e21(1, 0) = 1.0;
  for (const Eigen::Matrix2cd& a : {Eigen::Matrix2cd(i * e11), Eigen::Matrix2cd(i * e22),
                                    Eigen::Matrix2cd(e12 - e21), Eigen::Matrix2cd(i * (e12 + e21))})
    candidates.push_back(block(a, z));
  for (const Eigen::Matrix2cd& b : {Eigen::Matrix2cd(e11), Eigen::Matrix2cd(i * e11), Eigen::Matrix2cd(e22),
                                    Eigen::Matrix2cd(i * e22), Eigen::Matrix2cd(e12 + e21),
                                    Eigen::Matrix2cd(i * (e12 + e21))})
    candidates.push_back(block(z, b));

  std::vector<CMatrix> basis = so4::basis_matrices();
  candidates.insert(candidates.begin(), sp2_geodesic_generator());
  for (CMatrix c : candidates) {
    for (const auto& b : basis) c -= ip(c, b) * b;
    const double n2 = ip(c, c);
    if (n2 > 1e-10) basis.push_back(c / std::sqrt(n2));
    if (basis.size() == 10) break;
  }
  if (basis.size() != 10) throw NumericalError("failed to complete the sp(2) basis");
  return LieAlgebra::from_matrices("sp2", std::move(basis));
}

Sl2Triple principal_sl2_embedding() {
  const double r3 = std::sqrt(3.0);
  CMatrix x = CMatrix::Zero(4, 4), y = CMatrix::Zero(4, 4), h = CMatrix::Zero(4, 4);
  x(0, 1) = r3;
  x(1, 3) = 2.0;
  x(3, 2) = -r3;
  y(1, 0) = r3;
  y(2, 3) = -r3;
  y(3, 1) = 2.0;
  h.diagonal() << 3.0, 1.0, -3.0, -1.0;
  return {x, y, h};
}

Sl2Triple principal_sl2_printed() {
  Sl2Triple t = principal_sl2_embedding();
  t.x(1, 3) = std::sqrt(2.0);
  t.y(3, 1) = std::sqrt(2.0);
  return t;
}

double sl2_relation_residual(const Sl2Triple& t) {
  auto comm = [](const CMatrix& a, const CMatrix& b) { return (a * b - b * a).eval(); };
  const double r1 = (comm(t.h, t.x) - 2.0 * t.x).cwiseAbs().maxCoeff();
  const double r2 = (comm(t.h, t.y) + 2.0 * t.y).cwiseAbs().maxCoeff();
  const double r3 = (comm(t.x, t.y) - t.h).cwiseAbs().maxCoeff();
  return std::max({r1, r2, r3});
}

LieAlgebra read_structure_constants(std::istream& in, const std::string& name) {
  std::string line;
  int n = -1;
  std::vector<Matrix> s;
  std::vector<std::vector<bool>> seen;
  Matrix gram;
  int gram_row = -1;
  int lineno = 0;
  auto fail = [&](const std::string& msg) {
    throw InputError("structure file line " + std::to_string(lineno) + ": " + msg);
  };
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string head;
    if (!(ls >> head)) continue;
    if (head == "dim") {
      if (n >= 0) fail("duplicate dim");
      if (!(ls >> n) || n <= 0) fail("dim must be a positive integer");
      s.assign(n, Matrix::Zero(n, n));
      seen.assign(n * n, std::vector<bool>(n, false));
      continue;
    }
    if (n < 0) fail("dim must come first");
    if (head == "gram") {
      if (gram_row >= 0) fail("duplicate gram block");
      gram = Matrix::Zero(n, n);
      gram_row = 0;
      continue;
    }
    if (gram_row >= 0) {
      if (gram_row >= n) fail("too many gram rows");
      std::istringstream row(line);
      for (int j = 0; j < n; ++j)
        if (!(row >> gram(gram_row, j))) fail("gram row needs dim entries");
      ++gram_row;
      continue;
    }
    std::istringstream row(line);
    int i = 0, j = 0, k = 0;
    double v = 0.0;
    if (!(row >> i >> j >> k >> v)) fail("expected 'i j k value'");
    if (i < 0 || j < 0 || k < 0 || i >= n || j >= n || k >= n) fail("index out of range");
    if (i == j && v != 0.0) fail("[X_i, X_i] must vanish");
    s[k](i, j) = v;
    seen[i * n + j][k] = true;
  }
  if (n < 0) throw InputError("structure file has no dim line");
  if (gram_row != n) throw InputError("structure file needs a complete gram block");
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        if (seen[i * n + j][k] && !seen[j * n + i][k]) s[k](j, i) = -s[k](i, j);
      }
  LieAlgebra alg(name, std::move(s), std::move(gram));
  if (alg.antisymmetry_residual() != 0.0) throw InputError("structure constants are not antisymmetric");
  if (alg.jacobi_residual() > 1e-12) throw InputError("structure constants violate the Jacobi identity");
  if (alg.ad_invariance_residual() > 1e-10) throw InputError("gram matrix is not ad-invariant");
  return alg;
}

LieAlgebra load_structure_constants(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open structure file '" + path + "'");
  return read_structure_constants(in, path);
}

void write_structure_constants(std::ostream& out, const LieAlgebra& alg) {
  const int n = alg.dim();
  out.precision(17);
  out << "dim " << n << "\n";
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int k = 0; k < n; ++k)
        if (alg.structure(i, j, k) != 0.0) out << i << ' ' << j << ' ' << k << ' ' << alg.structure(i, j, k) << "\n";
  out << "gram\n";
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) out << (j ? " " : "") << alg.gram()(i, j);
    out << "\n";
  }
}

}  // namespace grasslab
