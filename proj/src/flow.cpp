#include "grasslab/flow.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

namespace grasslab {

namespace {

void check_orthonormal_algebra(const LieAlgebra& alg, const GrassPoint& v) {
  if (v.n() != alg.dim()) throw InputError("plane and algebra have different dimensions");
  if ((alg.gram() - Matrix::Identity(alg.dim(), alg.dim())).cwiseAbs().maxCoeff() > 1e-10)
    throw InputError("algebra basis must be orthonormal (use LieAlgebra::orthonormalized)");
}

void check_three_plane(const LieAlgebra& alg, const GrassPoint& v) {
  check_orthonormal_algebra(alg, v);
  if (v.k() != 3) throw InputError("psi is defined on 3-planes");
}

Matrix orthonormal_columns(const Matrix& a, Retraction r) {
  if (r == Retraction::polar) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(a.transpose() * a);
    const Matrix inv_sqrt = es.eigenvectors() * es.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
                            es.eigenvectors().transpose();
    return a * inv_sqrt;
  }
  Matrix q = a;
  for (int j = 0; j < q.cols(); ++j) {
    for (int pass = 0; pass < 2; ++pass)
      for (int i = 0; i < j; ++i) q.col(j) -= q.col(i).dot(q.col(j)) * q.col(i);
    q.col(j) /= q.col(j).norm();
  }
  return q;
}

// New point spanned by `frame`, coframe carried over from the old point.
GrassPoint rebuild(const Matrix& frame, const GrassPoint& old, Retraction r) {
  const Matrix v = orthonormal_columns(frame, r);
  const Matrix w = old.coframe - v * (v.transpose() * old.coframe);
  return GrassPoint{v, orthonormal_columns(w, Retraction::orthonormalize), old.orientation};
}

double objective(const LieAlgebra& alg, const GrassPoint& v, FlowDirection dir) {
  const double p = psi(alg, v);
  return dir == FlowDirection::ascend ? p : -0.5 * p * p;
}

// Ascent direction of the objective as a tangent coefficient matrix.
Matrix ascent_direction(const LieAlgebra& alg, const GrassPoint& v, FlowDirection dir) {
  Matrix g = grad_psi(alg, v).coeffs;
  if (dir == FlowDirection::descend) g *= -psi(alg, v);
  return g;
}

}  // namespace

double psi(const LieAlgebra& alg, const GrassPoint& v) {
  check_three_plane(alg, v);
  const Vector v1 = v.frame.col(0), v2 = v.frame.col(1), v3 = v.frame.col(2);
  return v.orientation * alg.bracket(v1, v2).dot(v3);
}

TangentVec grad_psi(const LieAlgebra& alg, const GrassPoint& v) {
  check_three_plane(alg, v);
  TangentVec t = TangentVec::zero(v);
  for (int i = 0; i < 3; ++i) {
    const Vector br = alg.bracket(v.frame.col((i + 1) % 3), v.frame.col((i + 2) % 3));
    t.coeffs.row(i) = v.orientation * (v.coframe.transpose() * br).transpose();
  }
  return t;
}

TangentVec killing_tangent(const LieAlgebra& alg, const GrassPoint& v, const Vector& a) {
  check_orthonormal_algebra(alg, v);
  TangentVec t = TangentVec::zero(v);
  const Matrix ada = alg.ad(a);
  t.coeffs = (v.coframe.transpose() * ada * v.frame).transpose();
  return t;
}

TangentVec isotropy_action(const LieAlgebra& alg, const TangentVec& p, const Vector& a) {
  check_orthonormal_algebra(alg, p.base);
  const Matrix ada = alg.ad(a);
  const Matrix l = p.ambient();
  const Matrix lt = ada * l - l * ada;
  TangentVec out = TangentVec::zero(p.base);
  out.coeffs = (p.base.coframe.transpose() * lt * p.base.frame).transpose();
  return out;
}

GrassPoint transform(const GrassPoint& v, const Matrix& automorphism) {
  if (automorphism.rows() != v.n() || automorphism.cols() != v.n()) throw InputError("automorphism has wrong shape");
  return GrassPoint::from_frames(automorphism * v.frame, automorphism * v.coframe, v.orientation);
}

std::string to_string(CriticalKind kind) {
  switch (kind) {
    case CriticalKind::subalgebra_sp1:
      return "subalgebra-sp1";
    case CriticalKind::abelian:
      return "abelian";
    default:
      return "other";
  }
}

CriticalKind classify(const LieAlgebra& alg, const GrassPoint& v) {
  check_orthonormal_algebra(alg, v);
  double perp = 0.0, size = 0.0;
  for (int i = 0; i < v.k(); ++i)
    for (int j = i + 1; j < v.k(); ++j) {
      const Vector br = alg.bracket(v.frame.col(i), v.frame.col(j));
      perp = std::max(perp, (v.coframe.transpose() * br).norm());
      size = std::max(size, br.norm());
    }
  if (perp >= 1e-8) return CriticalKind::other;
  return size > 1e-4 ? CriticalKind::subalgebra_sp1 : CriticalKind::abelian;
}

FlowResult flow_run(const LieAlgebra& alg, const GrassPoint& v0, FlowDirection dir, const FlowConfig& cfg,
                    bool record) {
  check_three_plane(alg, v0);
  if (!(cfg.step > 0.0) || cfg.max_iters < 0 || !(cfg.grad_tol > 0.0)) throw InputError("invalid flow configuration");
  FlowResult res;
  GrassPoint v = v0;
  double f = objective(alg, v, dir);
  auto sample = [&](int iter, double gnorm) {
    if (record) res.trajectory.push_back({iter, psi(alg, v), gnorm, v.frame});
  };

  int iter = 0;
  Matrix g = ascent_direction(alg, v, dir);
  for (;; ++iter) {
    const double gnorm = g.norm();
    sample(iter, gnorm);
    if (gnorm < cfg.grad_tol) {
      res.report.converged = true;
      break;
    }
    if (iter >= cfg.max_iters) break;
    double h = std::min(cfg.step, 1.0 / gnorm);
    bool accepted = false;
    for (int halving = 0; halving <= 30; ++halving, h *= 0.5) {
      GrassPoint trial = rebuild(v.frame + h * v.coframe * g.transpose(), v, cfg.retraction);
      const double ft = objective(alg, trial, dir);
      if (ft >= f) {
        v = std::move(trial);
        f = ft;
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      res.report.stalled = true;
      break;
    }
    g = ascent_direction(alg, v, dir);
  }

  res.report.point = v;
  res.report.psi_value = psi(alg, v);
  res.report.gradient_norm = grad_psi(alg, v).norm();
  res.report.iterations = iter;
  res.report.kind = classify(alg, v);
  if (record)
    for (std::size_t i = 1; i < res.trajectory.size(); ++i) {
      const double a = res.trajectory[i - 1].psi, b = res.trajectory[i].psi;
      const double da = dir == FlowDirection::ascend ? b - a : std::abs(a) - std::abs(b);
      if (da < -1e-14) res.report.monotone = false;
    }
  return res;
}

GrassPoint trajectory_so4(double x, double y) {
  if (std::abs(x * x + y * y - 1.0) > 1e-10) throw InputError("trajectory_so4 needs x^2 + y^2 = 1");
  Matrix frame = Matrix::Zero(6, 3);
  for (int i = 0; i < 3; ++i) {
    frame(i, i) = x;
    frame(i + 3, i) = y;
  }
  Matrix coframe = Matrix::Zero(6, 3);
  for (int i = 0; i < 3; ++i) {
    coframe(i, i) = -y;
    coframe(i + 3, i) = x;
  }
  return GrassPoint::from_frames(frame, coframe);
}

GrassPoint sp1_plus() { return trajectory_so4(1.0, 0.0); }
GrassPoint sp1_minus() { return trajectory_so4(0.0, 1.0); }
GrassPoint sp1_diagonal() { return trajectory_so4(1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0)); }

Matrix so4_swap() {
  Matrix s = Matrix::Zero(6, 6);
  s.topRightCorner(3, 3).setIdentity();
  s.bottomLeftCorner(3, 3).setIdentity();
  return s;
}

std::string trajectory_csv(const FlowResult& result) {
  std::ostringstream os;
  os << std::setprecision(12);
  os << "iter,psi,grad_norm";
  if (!result.trajectory.empty()) {
    const Matrix& f = result.trajectory.front().frame;
    for (int c = 0; c < f.cols(); ++c)
      for (int r = 0; r < f.rows(); ++r) os << ",v" << c + 1 << "_" << r;
  }
  os << "\n";
  for (const auto& s : result.trajectory) {
    os << s.iter << "," << s.psi << "," << s.grad_norm;
    for (int c = 0; c < s.frame.cols(); ++c)
      for (int r = 0; r < s.frame.rows(); ++r) os << "," << s.frame(r, c);
    os << "\n";
  }
  return os.str();
}

nlohmann::json summary_json(const FlowResult& result, std::uint64_t seed) {
  return {{"seed", seed},
          {"iterations", result.report.iterations},
          {"final_psi", result.report.psi_value},
          {"gradient_norm", result.report.gradient_norm},
          {"converged", result.report.converged},
          {"monotone", result.report.monotone},
          {"kind", to_string(result.report.kind)}};
}

std::vector<double> critical_catalog(const std::vector<double>& terminal_psi, double tol) {
  std::vector<double> vals;
  for (double p : terminal_psi) vals.push_back(std::abs(p));
  std::sort(vals.begin(), vals.end());
  std::vector<double> out;
  std::vector<int> counts;
  for (double v : vals) {
    if (!out.empty() && v - out.back() <= tol) {
      out.back() = (out.back() * counts.back() + v) / (counts.back() + 1);
      ++counts.back();
    } else {
      out.push_back(v);
      counts.push_back(1);
    }
  }
  return out;
}

}  // namespace grasslab
