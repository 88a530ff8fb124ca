#include "grasslab/qkmap.hpp"

#include <cmath>
#include <iomanip>
#include <random>
#include <sstream>

#include <unsupported/Eigen/MatrixFunctions>

namespace grasslab {

namespace {

constexpr double kPi = 3.14159265358979323846;

double pairing(const CMatrix& a, const CMatrix& b) { return -(a * b).trace().real(); }

CMatrix conj_by(const CMatrix& h, const CMatrix& x) { return h * x * h.adjoint(); }

// Coefficients of a matrix on basis elements [begin, begin + count) of sp(2);
// exact for elements of sp(2) since the basis is orthonormal.
Vector coords(const CMatrix& x, int begin, int count) {
  const auto& basis = hp1::sp2().matrix_rep();
  Vector c(count);
  for (int a = 0; a < count; ++a) c(a) = pairing(x, basis[begin + a]);
  return c;
}

Matrix pseudo_inverse(const Matrix& a) { return a.completeOrthogonalDecomposition().pseudoInverse(); }

Vector unit_gaussian(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> d;
  Vector v(n);
  for (int i = 0; i < n; ++i) v(i) = d(rng);
  return v / v.norm();
}

Vector flatten(const Matrix& t) {
  Vector out(t.size());
  for (int i = 0; i < t.rows(); ++i)
    for (int r = 0; r < t.cols(); ++r) out(i * t.cols() + r) = t(i, r);
  return out;
}

Matrix unflatten(const Vector& v, int rows, int cols) {
  Matrix t(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int r = 0; r < cols; ++r) t(i, r) = v(i * cols + r);
  return t;
}

void check_regular(double lambda) {
  if (1.0 - lambda * lambda < 1e-10) throw DomainError("Psi_* is singular at the poles of HP^1");
}

// Ad_k restricted to so(4) for k in Sp(1) x Sp(1).
Matrix so4_adjoint(const CMatrix& k) {
  const auto& basis = hp1::sp2().matrix_rep();
  Matrix ad(6, 6);
  for (int a = 0; a < 6; ++a) ad.col(a) = coords(conj_by(k, basis[a]), 0, 6);
  return ad;
}

// eta_1 on the geodesic direction, eta_2 on the orbit directions, and the
// deviation of the natural endomorphism from that block-scalar form.
struct Etas {
  double eta1 = 0.0, eta2 = 0.0, scalar_residual = 0.0;
};

Etas compute_etas(const ManifoldPoint& x, const PushforwardMatrix& pf) {
  const Matrix nat = pf.matrix.transpose() * pf.matrix;
  Vector xhat = Vector::Zero(4);
  xhat(0) = 1.0;
  Matrix orbit(4, 3);
  for (int i = 0; i < 3; ++i) orbit.col(i) = killing_field(hp1::embed(pf.image.frame.col(i)), x);
  const Matrix q = orbit.householderQr().householderQ() * Matrix::Identity(4, 3);
  Etas e;
  e.eta1 = xhat.dot(nat * xhat);
  const Matrix block = q.transpose() * nat * q;
  e.eta2 = block.trace() / 3.0;
  e.scalar_residual = std::max({(block - e.eta2 * Matrix::Identity(3, 3)).cwiseAbs().maxCoeff(),
                                (xhat.transpose() * nat * q).cwiseAbs().maxCoeff(),
                                (q.transpose() * xhat).cwiseAbs().maxCoeff()});
  return e;
}

}  // namespace

namespace hp1 {

const LieAlgebra& sp2() {
  static const LieAlgebra alg = make_sp2();
  return alg;
}

const LieAlgebra& so4() {
  static const LieAlgebra alg = make_so4();
  return alg;
}

Vector embed(const Vector& a) {
  if (a.size() != sp2::so4_dim) throw InputError("expected so(4) coefficients");
  Vector out = Vector::Zero(10);
  out.head(sp2::so4_dim) = a;
  return out;
}

Vector so4_part(const Vector& a) {
  if (a.size() != 10) throw InputError("expected sp(2) coefficients");
  return a.head(sp2::so4_dim);
}

Vector m_part(const Vector& a) {
  if (a.size() != 10) throw InputError("expected sp(2) coefficients");
  return a.tail(sp2::m_dim);
}

Matrix quaternion_on_m(int k) {
  if (k < 1 || k > 3) throw InputError("quaternion index must be 1, 2 or 3");
  const Matrix ad = sp2().ad(sp2().basis_vector(so4::f1 + k - 1));
  return std::sqrt(2.0) * ad.block(sp2::m_begin, sp2::m_begin, sp2::m_dim, sp2::m_dim);
}

}  // namespace hp1

ManifoldPoint ManifoldPoint::from_matrix(const CMatrix& h) {
  if (h.rows() != 4 || h.cols() != 4) throw InputError("representative must be 4 x 4");
  const CMatrix j = sp2_form();
  if ((h.adjoint() * h - CMatrix::Identity(4, 4)).cwiseAbs().maxCoeff() > 1e-10 ||
      (h.transpose() * j * h - j).cwiseAbs().maxCoeff() > 1e-10)
    throw InputError("representative is not in Sp(2)");
  return ManifoldPoint{h};
}

ManifoldPoint ManifoldPoint::on_geodesic(double t) { return ManifoldPoint{geodesic_closed_form(t)}; }

GroupElement ManifoldPoint::group() const { return GroupElement::from_matrix(hp1::sp2(), rep); }

ManifoldPoint ManifoldPoint::translated(const CMatrix& g) const { return from_matrix(g * rep); }

Matrix ManifoldPoint::tangent_frame() const {
  const auto& basis = hp1::sp2().matrix_rep();
  Matrix out(10, 4);
  for (int b = 0; b < 4; ++b) out.col(b) = coords(conj_by(rep, basis[sp2::m_begin + b]), 0, 10);
  return out;
}

CMatrix geodesic_closed_form(double t) {
  const double c = std::cos(t), s = std::sin(t);
  CMatrix g = CMatrix::Zero(4, 4);
  g(0, 0) = c;
  g(0, 1) = s;
  g(1, 0) = -s;
  g(1, 1) = c;
  g(2, 2) = c;
  g(2, 3) = s;
  g(3, 2) = -s;
  g(3, 3) = c;
  return g;
}

GeodesicState geodesic(double t) {
  GeodesicState st;
  st.t = t;
  st.g = (t * sp2_geodesic_generator()).exp();
  const auto& basis = hp1::sp2().matrix_rep();
  for (int i = 0; i < 3; ++i) {
    st.e_moving[i] = coords(conj_by(st.g, basis[so4::e1 + i]), 0, 10);
    st.f_moving[i] = coords(conj_by(st.g, basis[so4::f1 + i]), 0, 10);
    st.b[i] = hp1::so4_part(st.f_moving[i]);
  }
  st.lambda = st.b[0].norm();
  return st;
}

OverlapTable overlap_table(double t) {
  const GeodesicState st = geodesic(t);
  OverlapTable o;
  o.ef = st.f_moving[0](so4::e1);
  o.ee = st.e_moving[0](so4::e1);
  o.fe = st.e_moving[0](so4::f1);
  o.ff = st.f_moving[0](so4::f1);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      const double vals[4] = {st.f_moving[j](so4::e1 + i), st.e_moving[j](so4::e1 + i), st.e_moving[j](so4::f1 + i),
                              st.f_moving[j](so4::f1 + i)};
      const double ref[4] = {o.ef, o.ee, o.fe, o.ff};
      for (int q = 0; q < 4; ++q) {
        if (i != j)
          o.off_diagonal = std::max(o.off_diagonal, std::abs(vals[q]));
        else
          o.diagonal_spread = std::max(o.diagonal_spread, std::abs(vals[q] - ref[q]));
      }
    }
  return o;
}

Vector moment_section(const Vector& a_so4, double t) {
  const GeodesicState st = geodesic(t);
  const Vector a = hp1::embed(a_so4);
  Vector out = Vector::Zero(10);
  for (int i = 0; i < 3; ++i) out += a.dot(st.f_moving[i]) * st.f_moving[i];
  return out;
}

std::array<Vector, 3> moment_components(const ManifoldPoint& x) {
  const auto& basis = hp1::sp2().matrix_rep();
  std::array<Vector, 3> b;
  for (int i = 0; i < 3; ++i) b[i] = coords(conj_by(x.rep, basis[so4::f1 + i]), 0, 6);
  return b;
}

double lambda_at(const ManifoldPoint& x) { return moment_components(x)[0].norm(); }

double lambda_of_t(double t) { return lambda_at(ManifoldPoint::on_geodesic(t)); }

GrassPoint Psi_at(const ManifoldPoint& x) {
  const auto b = moment_components(x);
  Matrix span(6, 3);
  for (int i = 0; i < 3; ++i) span.col(i) = b[i];
  Eigen::SelfAdjointEigenSolver<Matrix> es(span.transpose() * span);
  if (es.eigenvalues().minCoeff() < 1e-12) throw NumericalError("moment components are degenerate");
  const Matrix inv_sqrt =
      es.eigenvectors() * es.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() * es.eigenvectors().transpose();
  return GrassPoint::from_spanning(span * inv_sqrt);
}

GrassPoint Psi_map(double t) { return Psi_at(ManifoldPoint::on_geodesic(t)); }

Vector killing_field(const Vector& a, const ManifoldPoint& x) {
  if (a.size() != 10) throw InputError("expected sp(2) coefficients");
  const CMatrix am = hp1::sp2().to_matrix(a);
  return coords(x.rep.adjoint() * am * x.rep, sp2::m_begin, sp2::m_dim);
}

TangentVec PushforwardMatrix::apply(const Vector& y) const {
  if (y.size() != 4) throw InputError("tangent vector of HP^1 needs 4 coordinates");
  return {image, unflatten(matrix * y, image.k(), image.codim())};
}

PushforwardMatrix pushforward(const ManifoldPoint& x, const PushforwardConfig& cfg) {
  check_regular(lambda_at(x));
  if (!(cfg.step > 0.0)) throw InputError("step must be positive");
  PushforwardMatrix pf;
  pf.image = Psi_at(x);
  pf.matrix = Matrix::Zero(9, 4);
  const auto& basis = hp1::sp2().matrix_rep();
  for (int a = 0; a < 4; ++a) {
    const CMatrix xi = basis[sp2::m_begin + a];
    auto proj_at = [&](double s) { return Psi_at(ManifoldPoint{x.rep * (s * xi).exp()}).projector(); };
    auto central = [&](double h) -> Matrix { return (proj_at(h) - proj_at(-h)) / (2.0 * h); };
    Matrix dp = central(cfg.step);
    if (cfg.richardson) dp = (4.0 * central(0.5 * cfg.step) - dp) / 3.0;
    pf.matrix.col(a) = flatten(pf.image.frame.transpose() * dp * pf.image.coframe);
  }
  Eigen::JacobiSVD<Matrix> svd(pf.matrix);
  if (svd.singularValues()(3) < 1e-8) throw NumericalError("pushforward lost rank away from the poles");
  return pf;
}

Vector rho(const Vector& zeta, const ManifoldPoint& x, const GrassPoint& v) {
  if (zeta.size() != 4) throw InputError("covector of HP^1 needs 4 coordinates");
  Vector out = Vector::Zero(6);
  for (int r = 0; r < v.codim(); ++r) {
    const Vector ar = v.coframe.col(r);
    out += zeta.dot(killing_field(hp1::embed(ar), x)) * ar;
  }
  return out;
}

Vector gamma(const TangentVec& p) {
  const auto& alg = hp1::so4();
  if (p.base.n() != alg.dim()) throw InputError("gamma is defined on G_k(so(4))");
  Vector out = Vector::Zero(alg.dim());
  for (int i = 0; i < p.base.k(); ++i)
    out += alg.bracket(p.base.frame.col(i), p.base.coframe * p.coeffs.row(i).transpose());
  return out;
}

TangentVec pushed_quaternion(int k, const Vector& y, const ManifoldPoint& x, const PushforwardMatrix& pf) {
  if (k < 1 || k > 3) throw InputError("quaternion index must be 1, 2 or 3");
  const int i = k - 1, j = k % 3, l = (k + 1) % 3;
  const TangentVec p = pf.apply(y);
  TangentVec out = TangentVec::zero(pf.image);
  const double lam = lambda_at(x);
  out.coeffs.row(i) = (hp1::kappa / lam) * (pf.image.coframe.transpose() * rho(y, x, pf.image)).transpose();
  out.coeffs.row(j) = -p.coeffs.row(l);
  out.coeffs.row(l) = p.coeffs.row(j);
  return out;
}

CoincidenceReport verify_coincidence(double t, int samples, std::uint64_t seed) {
  if (samples <= 0) throw InputError("samples must be positive");
  const ManifoldPoint x = ManifoldPoint::on_geodesic(t);
  const double lam = lambda_at(x);
  check_regular(lam);
  const PushforwardMatrix pf = pushforward(x);
  const GrassPoint& v = pf.image;
  const Matrix& ps = pf.matrix;
  const Matrix ps_pinv = pseudo_inverse(ps);
  const auto& so4 = hp1::so4();
  std::array<Matrix, 3> iq;
  for (int k = 0; k < 3; ++k) iq[k] = hp1::quaternion_on_m(k + 1);
  Matrix kil(4, 3);  // Killing fields of the coframe vectors A_r
  for (int r = 0; r < 3; ++r) kil.col(r) = killing_field(hp1::embed(v.coframe.col(r)), x);

  CoincidenceReport rep;
  rep.t = t;
  rep.lambda = lam;
  auto& res = rep.residuals;
  auto bump = [&res](const std::string& name, double value) { res[name] = std::max(res[name], value); };
  for (const char* name : {"geodesic_pushforward", "pushforward_formula", "pushed_quaternion_formula"}) res[name] = 0.0;

  std::mt19937_64 rng(seed);
  for (int s = 0; s < samples; ++s) {
    const Vector z = unit_gaussian(rng, 4);
    const Vector pz = ps * z;
    for (int i = 0; i < 3; ++i)
      for (int r = 0; r < 3; ++r)
        bump("geodesic_pushforward", std::abs(pz(3 * i + r) - (hp1::kappa / lam) * (iq[i] * kil.col(r)).dot(z)));

    const Matrix p = unflatten(pz, 3, 3);
    Vector rhs = Vector::Zero(4);
    for (int i = 0; i < 3; ++i) rhs += iq[i] * (kil * p.row(i).transpose());
    bump("pushforward_formula", (ps.transpose() * pz - (hp1::kappa / lam) * rhs).norm());

    for (int k = 1; k <= 3; ++k)
      bump("pushed_quaternion_formula", (ps * (iq[k - 1] * z) - flatten(pushed_quaternion(k, z, x, pf).coeffs)).norm());
  }

  // Geodesic direction X: rho vanishes and I_1 acts as a pure rotation.
  Vector xdir = Vector::Zero(4);
  xdir(0) = 1.0;
  res["rho_orthogonal"] = rho(xdir, x, v).norm();
  {
    const Matrix p = unflatten(ps * xdir, 3, 3);
    Matrix rot = Matrix::Zero(3, 3);
    rot.row(1) = -p.row(2);
    rot.row(2) = p.row(1);
    res["pushed_quaternion_rotation"] = (ps * (iq[0] * xdir) - flatten(rot)).norm();
  }

  // Pushed-forward quaternion relations on the image.
  std::array<Matrix, 3> qhat;
  for (int k = 0; k < 3; ++k) {
    Matrix f(9, 4);
    for (int a = 0; a < 4; ++a) f.col(a) = flatten(pushed_quaternion(k + 1, Matrix::Identity(4, 4).col(a), x, pf).coeffs);
    qhat[k] = f * ps_pinv;
  }
  double qrel = 0.0;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) {
      Matrix expect = -ps;
      if (a != b) {
        const int c = 3 - a - b;
        expect = levi_civita(a, b, c) * qhat[c] * ps;
      }
      qrel = std::max(qrel, (qhat[a] * qhat[b] * ps - expect).cwiseAbs().maxCoeff());
    }
  res["quaternion_pushforward"] = qrel;

  // grad psi and the Killing tangents of the v_i.
  const TangentVec gp = grad_psi(so4, v);
  const Vector gflat = flatten(gp.coeffs);
  std::array<TangentVec, 3> vt;
  for (int i = 0; i < 3; ++i) vt[i] = killing_tangent(so4, v, v.frame.col(i));
  res["gamma_grad_psi"] = gamma(gp).norm();
  const Vector xg = ps_pinv * gflat;
  res["grad_psi_in_image"] = (ps * xg - gflat).norm();
  double i_grad = 0.0;
  for (int k = 1; k <= 3; ++k) {
    const Vector vk = flatten(vt[k - 1].coeffs);
    i_grad = std::max(i_grad, (flatten(pushed_quaternion(k, xg, x, pf).coeffs) + vk).norm());
    i_grad = std::max(i_grad, (ps * (iq[k - 1] * xg) + vk).norm());
  }
  res["I_grad_psi"] = i_grad;
  {
    Matrix span(9, 4);
    span.col(0) = gflat;
    for (int i = 0; i < 3; ++i) span.col(i + 1) = flatten(vt[i].coeffs);
    const Matrix proj = span * pseudo_inverse(span);
    double leak = 0.0;
    for (int k = 0; k < 3; ++k) leak = std::max(leak, ((Matrix::Identity(9, 9) - proj) * qhat[k] * span).norm());
    res["quaternionic_span"] = leak;
  }
  res["grad_norm_ratio"] = std::abs(gp.coeffs.squaredNorm() - 1.5 * vt[0].coeffs.squaredNorm());

  // Geodesic direction maps to a multiple of grad psi.
  {
    const Vector px = ps * xdir;
    const Vector ghat = gflat / gflat.norm();
    res["geodesic_to_grad_psi"] = (px - px.dot(ghat) * ghat).norm();
  }

  const Etas e = compute_etas(x, pf);
  rep.eta1 = e.eta1;
  rep.eta2 = e.eta2;
  rep.eta_ratio = e.eta1 / e.eta2;
  res["eta_block_scalar"] = e.scalar_residual;
  res["eta_ratio"] = std::abs(rep.eta_ratio - 1.5);

  // Moment map and lambda.
  const auto b = moment_components(x);
  Matrix bm(6, 3);
  for (int i = 0; i < 3; ++i) bm.col(i) = b[i];
  const double mu2 = bm.squaredNorm();
  res["mu_norm"] = std::abs(mu2 - 3.0 * lam * lam);
  res["lambda_gram"] = (bm.transpose() * bm - lam * lam * Matrix::Identity(3, 3)).cwiseAbs().maxCoeff();
  const double c = std::cos(t), s = std::sin(t);
  res["lambda_closed_form"] = std::abs(lam * lam - (std::pow(c, 4) + std::pow(s, 4)));
  const double xs = s * s / lam, ys = c * c / lam;
  res["trajectory_family"] = grassmann_distance(v, trajectory_so4(xs, ys));
  res["psi_closed_form"] = std::abs(psi(so4, v) - std::sqrt(2.0) * (xs * xs * xs + ys * ys * ys));
  res["t_vs_pi_minus_t"] = grassmann_distance(v, Psi_map(kPi - t));

  // Killing fields push forward to Killing tangents.
  {
    double kres = 0.0;
    for (int s2 = 0; s2 < samples; ++s2) {
      const Vector a = unit_gaussian(rng, 6);
      kres = std::max(kres, (ps * killing_field(hp1::embed(a), x) - flatten(killing_tangent(so4, v, a).coeffs)).norm());
    }
    res["killing_pushforward"] = kres;
  }

  // Equivariance under random elements of Sp(1) x Sp(1).
  {
    double eq_psi = 0.0, eq_pf = 0.0;
    for (int s2 = 0; s2 < 3; ++s2) {
      const CMatrix kmat = hp1::sp2().to_matrix(hp1::embed(unit_gaussian(rng, 6) * 1.3)).exp();
      const Matrix adk = so4_adjoint(kmat);
      const ManifoldPoint kx = x.translated(kmat);
      const GrassPoint moved = transform(v, adk);
      eq_psi = std::max(eq_psi, grassmann_distance(Psi_at(kx), moved));
      const PushforwardMatrix pk = pushforward(kx);
      for (int a = 0; a < 4; ++a) {
        const Matrix la = TangentVec{v, unflatten(ps.col(a), 3, 3)}.ambient();
        const Matrix lk = TangentVec{pk.image, unflatten(pk.matrix.col(a), 3, 3)}.ambient();
        eq_pf = std::max(eq_pf, (lk - adk * la * adk.transpose()).cwiseAbs().maxCoeff());
      }
    }
    res["psi_map_equivariance"] = eq_psi;
    res["pushforward_equivariance"] = eq_pf;
  }

  Eigen::JacobiSVD<Matrix> svd(ps);
  rep.min_singular_value = svd.singularValues()(3);
  return rep;
}

ImageDecomposition decompose_image(double t) {
  const ManifoldPoint x = ManifoldPoint::on_geodesic(t);
  const PushforwardMatrix pf = pushforward(x);
  const GrassPoint& v = pf.image;
  const auto& so4 = hp1::so4();
  std::array<Matrix, 3> gens;
  for (int i = 0; i < 3; ++i) {
    Vector z = Vector::Zero(6);
    z(so4::e1 + i) = z(so4::f1 + i) = 1.0 / std::sqrt(2.0);
    gens[i] = Matrix(9, 9);
    for (int col = 0; col < 9; ++col) {
      const TangentVec basis = TangentVec::basis(v, col / 3, col % 3);
      gens[i].col(col) = flatten(isotropy_action(so4, basis, z).coeffs);
    }
  }
  ImageDecomposition out;
  const Matrix img_proj = pf.matrix * pseudo_inverse(pf.matrix);
  for (const auto& g : gens)
    out.invariance_residual =
        std::max(out.invariance_residual, ((Matrix::Identity(9, 9) - img_proj) * g * pf.matrix).norm());
  for (const auto& comp : isotypic_projectors(gens)) {
    if (comp.dim % (comp.k + 1) != 0) throw DecompositionError("isotypic dimension is not a multiple of k+1");
    out.tangent.multiplicities[comp.k] += comp.dim / (comp.k + 1);
    Eigen::JacobiSVD<Matrix> svd(comp.projector * pf.matrix);
    int rank = 0;
    for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
      if (svd.singularValues()(i) > 1e-8) ++rank;
    if (rank % (comp.k + 1) != 0) throw DecompositionError("image is not a union of irreducibles");
    if (rank > 0) out.image.multiplicities[comp.k] += rank / (comp.k + 1);
  }
  return out;
}

GeodesicRow geodesic_row(double t) {
  GeodesicRow row;
  row.t = t;
  const ManifoldPoint x = ManifoldPoint::on_geodesic(t);
  row.lambda = lambda_at(x);
  row.psi = psi(hp1::so4(), Psi_at(x));
  const OverlapTable o = overlap_table(t);
  row.overlap_ef = o.ef;
  row.overlap_ee = o.ee;
  if (1.0 - row.lambda * row.lambda >= 1e-10) {
    const Etas e = compute_etas(x, pushforward(x));
    row.eta1 = e.eta1;
    row.eta2 = e.eta2;
    row.eta_ratio = e.eta1 / e.eta2;
  }
  return row;
}

std::string geodesic_csv(const std::vector<GeodesicRow>& rows) {
  std::ostringstream os;
  os << std::setprecision(12);
  os << "t,lambda,psi_of_Psi_t,overlap_ef,overlap_ee,eta1,eta2,eta_ratio\n";
  auto opt = [&os](const std::optional<double>& v) {
    os << ",";
    if (v) os << *v;
  };
  for (const auto& r : rows) {
    os << r.t << "," << r.lambda << "," << r.psi << "," << r.overlap_ef << "," << r.overlap_ee;
    opt(r.eta1);
    opt(r.eta2);
    opt(r.eta_ratio);
    os << "\n";
  }
  return os.str();
}

}  // namespace grasslab
