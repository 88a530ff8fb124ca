#include "grasslab/rep.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace grasslab {

namespace {

const Complex kI(0.0, 1.0);

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

void check_quat_index(int k) {
  if (k < 1 || k > 3) throw InputError("quaternion index must be 1, 2 or 3");
}

}  // namespace

SymTensor::SymTensor(int degree) : SymTensor(degree, CVector::Zero(degree + 1)) {}

SymTensor::SymTensor(int degree, CVector coeffs) : degree_(degree), coeffs_(std::move(coeffs)) {
  if (degree_ < 0) throw InputError("negative degree");
  if (coeffs_.size() != degree_ + 1) throw InputError("SymTensor needs degree+1 coefficients");
}

SymTensor SymTensor::monomial(int h_power, int hhat_power, Complex c) {
  SymTensor t(h_power + hhat_power);
  t.coeffs_(hhat_power) = c;
  return t;
}

SymTensor SymTensor::operator+(const SymTensor& o) const {
  if (o.degree_ != degree_) throw InputError("adding symmetric tensors of different degree");
  return SymTensor(degree_, coeffs_ + o.coeffs_);
}

SymTensor SymTensor::operator-(const SymTensor& o) const {
  if (o.degree_ != degree_) throw InputError("subtracting symmetric tensors of different degree");
  return SymTensor(degree_, coeffs_ - o.coeffs_);
}

SymTensor SymTensor::operator*(Complex s) const { return SymTensor(degree_, coeffs_ * s); }

Complex SymTensor::inner(const SymTensor& o) const {
  if (o.degree_ != degree_) throw InputError("inner product of symmetric tensors of different degree");
  Complex acc = 0.0;
  for (int j = 0; j <= degree_; ++j) acc += std::conj(coeffs_(j)) * o.coeffs_(j) / binomial(degree_, j);
  return acc;
}

double SymTensor::norm() const { return std::sqrt(std::max(0.0, inner(*this).real())); }

SymTensor sym_product(const SymTensor& a, const SymTensor& b) {
  SymTensor out(a.degree() + b.degree());
  CVector c = CVector::Zero(out.degree() + 1);
  for (int i = 0; i <= a.degree(); ++i)
    for (int j = 0; j <= b.degree(); ++j) c(i + j) += a.coeff(i) * b.coeff(j);
  return SymTensor(out.degree(), c);
}

SymTensor sigma(const HTensor& y) {
  if (y.beta.degree() != y.beta_hat.degree()) throw InputError("sigma: components of different degree");
  return sym_product(SymTensor::h(), y.beta) + sym_product(SymTensor::hhat(), y.beta_hat);
}

HTensor quat_action(int k, const HTensor& y) {
  check_quat_index(k);
  switch (k) {
    case 1:
      return {y.beta * (-kI), y.beta_hat * kI};
    case 2:
      return {y.beta_hat, -y.beta};
    default:
      return {y.beta_hat * kI, y.beta * kI};
  }
}

HTensor quat_product_action(int i, int j, const HTensor& y) { return quat_action(j, quat_action(i, y)); }

std::array<SymTensor, 3> quaternion_basis() {
  const SymTensor hh = SymTensor::monomial(2, 0);
  const SymTensor hk = SymTensor::monomial(1, 1);
  const SymTensor kk = SymTensor::monomial(0, 2);
  // h hhat + hhat h = 2 S(h x hhat)
  return {hk * (2.0 * kI), hh + kk, (hh - kk) * kI};
}

SymTensor QuatElement::to_sym2() const {
  const auto basis = quaternion_basis();
  return basis[0] * coeffs[0] + basis[1] * coeffs[1] + basis[2] * coeffs[2];
}

double QImage::max_abs() const { return std::max({p[0].max_abs(), p[1].max_abs(), p[2].max_abs()}); }

QImage QImage::operator-(const QImage& o) const { return {{p[0] - o.p[0], p[1] - o.p[1], p[2] - o.p[2]}}; }

QImage q_map(const HTensor& y) {
  if (y.beta.degree() != y.beta_hat.degree()) throw InputError("Q: components of different degree");
  const SymTensor h = SymTensor::h(), hh = SymTensor::hhat();
  // Q(Y) = sum_j m_j x c_j with m_0 = h^2, m_1 = S(h hhat), m_2 = hhat^2.
  const SymTensor p = sym_product(hh, y.beta);
  const SymTensor n = sym_product(h, y.beta_hat);
  const SymTensor r = sym_product(hh, y.beta_hat) - sym_product(h, y.beta);
  const std::array<SymTensor, 3> c = {p * 0.5, r * 0.5, n * (-0.5)};

  // I_k = sum_j basis(j, k) m_j; solve sum_k I_k x p_k = sum_j m_j x c_j.
  Eigen::Matrix3cd basis;
  const auto quat = quaternion_basis();
  for (int k = 0; k < 3; ++k) basis.col(k) = quat[k].coeffs();
  const Eigen::Matrix3cd inv = basis.inverse();
  QImage out;
  const int d = p.degree();
  for (int k = 0; k < 3; ++k) {
    CVector coeffs = CVector::Zero(d + 1);
    for (int j = 0; j < 3; ++j) coeffs += inv(k, j) * c[j].coeffs();
    out.p[k] = SymTensor(d, coeffs);
  }
  return out;
}

double QIdentityReport::max() const { return std::max({i1_rule, q_identity, p_sigma, square, product}); }

QIdentityReport verify_q_identities(const HTensor& y) {
  QIdentityReport rep;
  const QImage q = q_map(y);
  const SymTensor quarter_sigma = sigma(y) * 0.25;

  const QImage q1 = q_map(quat_action(1, y));
  const QImage expected1{{quarter_sigma, q.p[2], -q.p[1]}};
  rep.i1_rule = (q1 - expected1).max_abs();

  for (int i = 1; i <= 3; ++i) {
    const QImage qi = q_map(quat_action(i, y));
    for (int j = 1; j <= 3; ++j) {
      SymTensor expected(quarter_sigma.degree());
      if (i == j) expected = quarter_sigma;
      for (int k = 1; k <= 3; ++k) {
        const int eps = levi_civita(i - 1, j - 1, k - 1);
        if (eps != 0) expected = expected + q.p[k - 1] * static_cast<double>(eps);
      }
      rep.q_identity = std::max(rep.q_identity, (qi.p[j - 1] - expected).max_abs());
    }
    const SymTensor lhs = q.p[i - 1] + sigma(quat_action(i, y)) * 0.25;
    rep.p_sigma = std::max(rep.p_sigma, lhs.max_abs());
  }

  const QImage sq = q_map(quat_product_action(1, 1, y));
  rep.square = std::max({(sq.p[0] + q.p[0]).max_abs(), (sq.p[1] + q.p[1]).max_abs(),
                         (sq.p[2] + q.p[2]).max_abs()});
  rep.product = (q_map(quat_product_action(1, 2, y)) - q_map(quat_action(3, y))).max_abs();
  return rep;
}

int WeightDecomposition::module_dim() const {
  int d = 0;
  for (const auto& [k, m] : multiplicities) d += m * (k + 1);
  return d;
}

std::string WeightDecomposition::to_string() const {
  std::ostringstream os;
  bool first = true;
  for (auto it = multiplicities.rbegin(); it != multiplicities.rend(); ++it) {
    if (!first) os << " + ";
    first = false;
    if (it->second != 1) os << it->second;
    os << "S" << it->first;
  }
  return first ? "0" : os.str();
}

nlohmann::json to_json(const WeightDecomposition& d) {
  nlohmann::json comps = nlohmann::json::array();
  for (auto it = d.multiplicities.rbegin(); it != d.multiplicities.rend(); ++it)
    comps.push_back({{"k", it->first}, {"mult", it->second}});
  return {{"module_dim", d.module_dim()}, {"components", comps}};
}

WeightDecomposition weight_decompose(std::vector<int> weights) {
  std::multiset<int> pool(weights.begin(), weights.end());
  WeightDecomposition out;
  while (!pool.empty()) {
    const int k = *pool.rbegin();
    if (k < 0) throw DecompositionError("weight multiset is not symmetric");
    for (int w = k; w >= -k; w -= 2) {
      auto it = pool.find(w);
      if (it == pool.end()) throw DecompositionError("weight string for S^" + std::to_string(k) + " is incomplete");
      pool.erase(it);
    }
    ++out.multiplicities[k];
  }
  return out;
}

WeightDecomposition weight_decompose(const CMatrix& rho_h) {
  if (rho_h.rows() != rho_h.cols()) throw InputError("weight matrix must be square");
  Eigen::ComplexEigenSolver<CMatrix> es(rho_h);
  if (es.info() != Eigen::Success) throw DecompositionError("eigenvalue computation failed");
  std::vector<int> weights;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    const Complex ev = es.eigenvalues()(i);
    const double r = std::round(ev.real());
    if (std::abs(ev.imag()) > 1e-6 || std::abs(ev.real() - r) > 1e-6)
      throw DecompositionError("non-integral weight " + std::to_string(ev.real()));
    weights.push_back(static_cast<int>(r));
  }
  return weight_decompose(std::move(weights));
}

CMatrix sk_weight_matrix(int k) {
  if (k < 0) throw InputError("negative degree");
  CMatrix h = CMatrix::Zero(k + 1, k + 1);
  for (int j = 0; j <= k; ++j) h(j, j) = k - 2 * j;
  return h;
}

CMatrix induced_sym2(const CMatrix& a) {
  const int n = static_cast<int>(a.rows());
  std::vector<std::pair<int, int>> idx;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) idx.emplace_back(i, j);
  auto pos = [&](int i, int j) {
    if (i > j) std::swap(i, j);
    return static_cast<int>(std::find(idx.begin(), idx.end(), std::make_pair(i, j)) - idx.begin());
  };
  const int m = static_cast<int>(idx.size());
  CMatrix out = CMatrix::Zero(m, m);
  for (int c = 0; c < m; ++c) {
    const auto [i, j] = idx[c];
    // A(e_i e_j) = (A e_i) e_j + e_i (A e_j)
    for (int r = 0; r < n; ++r) {
      out(pos(r, j), c) += a(r, i);
      out(pos(i, r), c) += a(r, j);
    }
  }
  return out;
}

CMatrix tensor_action(const CMatrix& a, const CMatrix& b) {
  const Eigen::Index n = a.rows(), m = b.rows();
  CMatrix out = CMatrix::Zero(n * m, n * m);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      for (Eigen::Index k = 0; k < m; ++k) out(i * m + k, j * m + k) += a(i, j);
  for (Eigen::Index i = 0; i < n; ++i) out.block(i * m, i * m, m, m) += b;
  return out;
}

CMatrix direct_sum(const CMatrix& a, const CMatrix& b) {
  CMatrix out = CMatrix::Zero(a.rows() + b.rows(), a.cols() + b.cols());
  out.topLeftCorner(a.rows(), a.cols()) = a;
  out.bottomRightCorner(b.rows(), b.cols()) = b;
  return out;
}

CMatrix long_root_h() {
  CMatrix h = CMatrix::Zero(4, 4);
  h.diagonal() << 1.0, 0.0, -1.0, 0.0;
  return h;
}

CMatrix short_root_h() {
  CMatrix h = CMatrix::Zero(4, 4);
  h.diagonal() << 1.0, -1.0, -1.0, 1.0;
  return h;
}

std::vector<IsotypicComponent> isotypic_projectors(const std::array<Matrix, 3>& gens, double rel_gap) {
  const Eigen::Index n = gens[0].rows();
  for (const auto& g : gens)
    if (g.rows() != n || g.cols() != n) throw InputError("generators must be square of equal size");

  const double scale = std::max({gens[0].norm(), gens[1].norm(), gens[2].norm()});
  if (scale < 1e-12) {
    return {IsotypicComponent{0, 0.0, static_cast<int>(n), Matrix::Identity(n, n)}};
  }

  // [g_a, g_b] = c g_c for cyclic (a,b,c) with a common c.
  double c = 0.0;
  for (int a = 0; a < 3; ++a) {
    const Matrix& x = gens[a];
    const Matrix& y = gens[(a + 1) % 3];
    const Matrix& z = gens[(a + 2) % 3];
    const Matrix comm = x * y - y * x;
    const double zz = z.squaredNorm();
    if (zz < 1e-24) throw InputError("sp(1) triple has a vanishing element");
    const double ca = (comm.array() * z.array()).sum() / zz;
    if ((comm - ca * z).norm() > 1e-8 * (1.0 + comm.norm())) throw InputError("triple is not closed under brackets");
    if (a == 0) c = ca;
    if (std::abs(ca - c) > 1e-8 * std::abs(c) || std::abs(c) < 1e-12)
      throw InputError("triple does not satisfy the sp(1) relations");
  }

  Matrix casimir = Matrix::Zero(n, n);
  for (const auto& g : gens) {
    const Matrix gn = (2.0 / c) * g;
    casimir -= gn * gn;
  }

  Eigen::EigenSolver<Matrix> es(casimir);
  if (es.info() != Eigen::Success) throw NumericalError("Casimir eigenvalue computation failed");
  std::vector<double> evs;
  for (Eigen::Index i = 0; i < n; ++i) {
    const Complex ev = es.eigenvalues()(i);
    if (std::abs(ev.imag()) > 1e-8 * (1.0 + std::abs(ev.real()))) throw DecompositionError("complex Casimir eigenvalue");
    evs.push_back(ev.real());
  }
  std::sort(evs.begin(), evs.end());

  std::vector<std::pair<double, int>> clusters;  // mean, count
  for (double ev : evs) {
    if (!clusters.empty()) {
      auto& [mean, count] = clusters.back();
      if (std::abs(ev - mean) <= rel_gap * std::max(1.0, std::abs(ev))) {
        mean = (mean * count + ev) / (count + 1);
        ++count;
        continue;
      }
    }
    clusters.emplace_back(ev, 1);
  }

  std::vector<IsotypicComponent> out;
  const Matrix id = Matrix::Identity(n, n);
  for (std::size_t a = 0; a < clusters.size(); ++a) {
    Matrix p = id;
    for (std::size_t b = 0; b < clusters.size(); ++b) {
      if (a == b) continue;
      p = p * (casimir - clusters[b].first * id) / (clusters[a].first - clusters[b].first);
    }
    const double lam = clusters[a].first;
    const int k = static_cast<int>(std::lround(-1.0 + std::sqrt(std::max(0.0, 1.0 + lam))));
    if (std::abs(k * (k + 2) - lam) > 1e-6 * std::max(1.0, lam))
      throw DecompositionError("Casimir eigenvalue " + std::to_string(lam) + " is not of the form k(k+2)");
    out.push_back({k, lam, clusters[a].second, p});
  }
  return out;
}

}  // namespace grasslab
