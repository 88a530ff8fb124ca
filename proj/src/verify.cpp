#include "grasslab/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <map>
#include <mutex>
#include <numeric>
#include <random>

#include <unsupported/Eigen/MatrixFunctions>

#include "grasslab/flow.hpp"
#include "grasslab/grass.hpp"
#include "grasslab/qkmap.hpp"
#include "grasslab/rep.hpp"

namespace grasslab {

namespace {

const double kPi = 3.14159265358979323846;
const double kSqrt2 = std::sqrt(2.0);

using Task = std::function<std::vector<IdentityEntry>()>;

struct Spec {
  std::string anchor;
  double tolerance;
};

// Identity catalog: name -> (anchor, default tolerance).
const std::map<std::string, Spec>& catalog() {
  static const std::map<std::string, Spec> c = {
      // rep
      {"quaternion_relations", {"I_k^2 = -1 and I_i I_j = eps_ijk I_k on S^1 x S^{i-1}", 1e-14}},
      {"prop41_residual", {"Q(I_1 Y) = I_1 x sigma(Y)/4 + I_2 x p_3 - I_3 x p_2", 1e-12}},
      {"q_identity_residual", {"q^i_j = eps_ijk p_k + delta_ij sigma(Y)/4", 1e-12}},
      {"p_sigma_residual", {"p_i = -sigma(I_i Y)/4", 1e-12}},
      {"weights_fundamental", {"E = 2S^0 + S^1, S^1 + S^1, S^3 for long root, short root, principal sp(1)", 0.5}},
      {"weights_adjoint", {"sp(2) = S^2 + 2S^1 + 3S^0 and 3S^2 + S^0 for long and short root sp(1)", 0.5}},
      {"lie_structure", {"Jacobi identity and ad-invariance of <X,Y> = -Re tr XY on so(4) and sp(2)", 1e-10}},
      // grass
      {"sff_residual", {"d s_A = II(s_A) + II^perp(s^perp_A), closed form vs central differences", 1e-6}},
      {"sff_adjoint", {"<II(u)T, y> = -<u, II^perp(y)T>", 1e-10}},
      {"D_sA_residual", {"D s_A = 0 for projected constant sections", 1e-6}},
      {"D_perp_residual", {"D^perp s^perp_A = 0 on the complementary bundle", 1e-6}},
      {"kernel_dim_3_6", {"kernel of c o (1 ^ i) vanishes for k = 3, n = 6", 0.5}},
      {"kernel_dim_3_10", {"kernel of c o (1 ^ i) vanishes for k = 3, n = 10", 0.5}},
      {"kernel_dim_1_4", {"kernel of c o (1 ^ i) is nonzero for k = 1, n = 4", 0.5}},
      {"kernel_dim_3_4", {"kernel of c o (1 ^ i) is nonzero for k = 3, n = 4", 0.5}},
      {"frame_invariance", {"D norm and kernel dimension unchanged under frame rotations R, S", 1e-9}},
      // flow
      {"psi_values", {"psi(sp(1)_+-) = sqrt 2, psi(sp(1)_Delta) = 1, psi(span{e1, f1, e2}) = 0", 1e-12}},
      {"critical_ratio", {"psi(sp(1)_+) / psi(sp(1)_Delta) = sqrt 2", 1e-6}},
      {"grad_psi_fd", {"grad psi = sum_i v_i x [v_{i+1}, v_{i+2}]^perp vs central differences", 1e-6}},
      {"grad_psi_orbit_orthogonal", {"grad psi is orthogonal to Killing fields", 1e-10}},
      {"psi_equivariance", {"psi(Ad_g V) = psi(V) for g = exp Z", 1e-9}},
      {"psi_frame_invariance", {"psi independent of the oriented frame, negated by orientation flip", 1e-9}},
      {"ascent_terminal", {"gradient ascent from generic seeds ends at psi = sqrt 2", 1e-4}},
      {"ascent_monotone", {"psi non-decreasing along every ascent run (count of violations)", 0.5}},
      {"descent_terminal", {"descent of psi^2 ends at psi = 0", 1e-4}},
      {"symmetric_seed_terminal", {"seeds fixed by e_i <-> f_i flow to psi = 1", 1e-4}},
      // qk
      {"geodesic_pushforward", {"Psi_* of geodesic direction is (kappa/lambda) sum v_i x rho-part", 1e-5}},
      {"pushforward_formula", {"Psi_* Y = (1/lambda) sum v_i x (kappa rho(Y)_i) + rotation part", 1e-5}},
      {"pushed_quaternion_formula", {"Psi_* I_k Y = (kappa/lambda) v_k x rho(Y) - v_{k+1} x p_{k+2} + v_{k+2} x p_{k+1}", 1e-5}},
      {"pushed_quaternion_rotation", {"pushed-forward I_k acts by the rotation form on V x V^perp", 1e-5}},
      {"rho_orthogonal", {"rho(Y) orthogonal to the geodesic direction", 1e-5}},
      {"quaternion_pushforward", {"pushed-forward I_k satisfy the quaternion relations on the image", 1e-8}},
      {"gamma_grad_psi", {"gamma(grad psi) = 0", 1e-8}},
      {"grad_psi_in_image", {"grad psi lies in the image of Psi_*", 1e-6}},
      {"I_grad_psi", {"I_k(grad psi) = -v~_k", 1e-6}},
      {"quaternionic_span", {"span{grad psi, v~_1, v~_2, v~_3} closed under I_k", 1e-6}},
      {"grad_norm_ratio", {"|v~_k| = |grad psi|", 1e-6}},
      {"geodesic_to_grad_psi", {"geodesic direction maps to a multiple of grad psi", 1e-6}},
      {"eta_block_scalar", {"pullback metric is scalar on each block", 1e-8}},
      {"eta_ratio", {"eta_1 / eta_2 = 3/2", 1e-4}},
      {"mu_norm", {"|mu|^2 = 3 lambda^2", 1e-10}},
      {"lambda_gram", {"B_i = lambda v_i with common lambda", 1e-10}},
      {"lambda_closed_form", {"lambda(t)^2 = cos^4 t + sin^4 t", 1e-10}},
      {"trajectory_family", {"Psi(t) = V(sin^2 t / lambda, cos^2 t / lambda)", 1e-10}},
      {"psi_closed_form", {"psi(Psi(t)) = sqrt 2 (x^3 + y^3)", 1e-10}},
      {"t_vs_pi_minus_t", {"Psi(t) = Psi(pi - t)", 1e-10}},
      {"killing_pushforward", {"Psi_* of Killing fields equals Killing tangents on G_3", 1e-8}},
      {"psi_map_equivariance", {"Psi(h x) = Ad_h Psi(x) for h in SO(4)", 1e-8}},
      {"pushforward_equivariance", {"Psi_* commutes with the isotropy action", 1e-8}},
      {"overlap_table", {"<e_i(t), f_j> = delta sin^2 t, <e_i(t), e_j> = delta cos^2 t", 1e-10}},
      {"psi_endpoints", {"Psi(0) = sp(1)_-, Psi(pi/4) = sp(1)_Delta, Psi(pi/2) = sp(1)_+", 1e-8}},
      {"image_decomposition", {"at t = pi/4 the image of Psi_* is S^2 + S^0 inside S^4 + S^2 + S^0", 0.5}},
      {"image_invariance", {"image of Psi_* at t = pi/4 invariant under sp(1)_Delta", 1e-8}},
  };
  return c;
}

IdentityEntry make_entry(const std::string& name, double residual, const VerifyOptions& opts,
                         std::optional<double> value = std::nullopt) {
  const Spec& s = catalog().at(name);
  IdentityEntry e{name, s.anchor, residual, opts.tol.value_or(s.tolerance), value};
  if (std::isnan(residual)) e.residual = std::numeric_limits<double>::infinity();
  return e;
}

std::uint64_t seed_for(std::uint64_t seed, const std::string& name) {
  std::uint64_t h = 1469598103934665603ull;
  for (char c : name) h = (h ^ static_cast<unsigned char>(c)) * 1099511628211ull;
  return seed ^ h;
}

Vector gaussian(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> d;
  Vector v(n);
  for (int i = 0; i < n; ++i) v(i) = d(rng);
  return v;
}

HTensor random_y(std::mt19937_64& rng, int deg) {
  std::normal_distribution<double> d;
  auto sym = [&]() {
    CVector c(deg + 1);
    for (int i = 0; i <= deg; ++i) c(i) = Complex(d(rng), d(rng));
    return SymTensor(deg, c);
  };
  return {sym(), sym()};
}

// ---------------------------------------------------------------- rep

void rep_tasks(const VerifyOptions& o, std::vector<Task>& tasks) {
  tasks.push_back([o] {
    std::mt19937_64 rng(seed_for(o.seed, "quaternion_relations"));
    double r = 0.0;
    for (int s = 0; s < o.samples; ++s) {
      const HTensor y = random_y(rng, s % 4);
      for (int k = 1; k <= 3; ++k) r = std::max(r, (quat_product_action(k, k, y) + y).max_abs());
      for (int i = 1; i <= 3; ++i)
        for (int j = 1; j <= 3; ++j)
          if (i != j) {
            const int k = 6 - i - j;
            r = std::max(r, (quat_product_action(i, j, y) - quat_action(k, y) * double(levi_civita(i - 1, j - 1, k - 1)))
                                .max_abs());
          }
    }
    return std::vector<IdentityEntry>{make_entry("quaternion_relations", r, o)};
  });
  tasks.push_back([o] {
    std::mt19937_64 rng(seed_for(o.seed, "prop41_residual"));
    double p41 = 0.0, qid = 0.0, ps = 0.0;
    for (int s = 0; s < o.samples; ++s) {
      const QIdentityReport r = verify_q_identities(random_y(rng, 1 + s % 3));
      p41 = std::max({p41, r.i1_rule, r.square, r.product});
      qid = std::max(qid, r.q_identity);
      ps = std::max(ps, r.p_sigma);
    }
    return std::vector<IdentityEntry>{make_entry("prop41_residual", p41, o), make_entry("q_identity_residual", qid, o),
                                      make_entry("p_sigma_residual", ps, o)};
  });
  tasks.push_back([o] {
    const bool fund = weight_decompose(long_root_h()).to_string() == "S1 + 2S0" &&
                      weight_decompose(short_root_h()).to_string() == "2S1" &&
                      weight_decompose(principal_sl2_embedding().h).to_string() == "S3";
    const bool adj = weight_decompose(induced_sym2(long_root_h())).multiplicities == std::map<int, int>{{2, 1}, {1, 2}, {0, 3}} &&
                     weight_decompose(induced_sym2(short_root_h())).multiplicities == std::map<int, int>{{2, 3}, {0, 1}};
    const LieAlgebra so4 = make_so4(), sp2 = make_sp2();
    const double lie = std::max({so4.jacobi_residual(), so4.ad_invariance_residual(), so4.antisymmetry_residual(),
                                 sp2.jacobi_residual(), sp2.ad_invariance_residual(), sp2.antisymmetry_residual()});
    return std::vector<IdentityEntry>{make_entry("weights_fundamental", fund ? 0.0 : 1.0, o),
                                      make_entry("weights_adjoint", adj ? 0.0 : 1.0, o),
                                      make_entry("lie_structure", lie, o)};
  });
}

// ---------------------------------------------------------------- grass

AmbientSection scaled_section(const Vector& a, const Vector& c) {
  return {[a, c](const GrassPoint& p) -> Vector {
            const double f = (p.frame.transpose() * c).squaredNorm();
            return p.frame * (p.frame.transpose() * (f * a));
          },
          AmbientSection::Kind::tangential};
}

void grass_tasks(const VerifyOptions& o, std::vector<Task>& tasks) {
  if (o.k < 1 || o.n <= o.k) throw InputError("need 1 <= k < n");
  const int k = o.k, n = o.n;
  tasks.push_back([o, k, n] {
    std::mt19937_64 rng(seed_for(o.seed, "sff_residual"));
    DiffConfig plain;
    plain.richardson = false;
    double sff_r = 0.0, adj = 0.0, d_r = 0.0, dp_r = 0.0;
    for (int s = 0; s < o.samples; ++s) {
      const GrassPoint v = random_grass_point(rng, n, k);
      const Vector a = gaussian(rng, n);
      sff_r = std::max(sff_r, (section_differential(constant_section(a), v, plain) - imap(v, a)).cwiseAbs().maxCoeff());
      d_r = std::max(d_r, twistor_norm(twistor_D(constant_section(a), v, plain)));
      dp_r = std::max(dp_r, twistor_norm(twistor_D(constant_section(a), v.complement(), plain)));
      const Vector u = v.frame * gaussian(rng, k), y = v.coframe * gaussian(rng, n - k);
      TangentVec t = TangentVec::zero(v);
      t.coeffs = Eigen::Map<const Matrix>(gaussian(rng, k * (n - k)).data(), k, n - k);
      adj = std::max(adj, std::abs(evaluate(sff(v, u), t).dot(y) + u.dot(evaluate(sff_perp(v, y), t))));
    }
    return std::vector<IdentityEntry>{make_entry("sff_residual", sff_r, o), make_entry("sff_adjoint", adj, o),
                                      make_entry("D_sA_residual", d_r, o), make_entry("D_perp_residual", dp_r, o)};
  });
  for (const auto& [kk, nn, zero] : std::vector<std::tuple<int, int, bool>>{{3, 6, true}, {3, 10, true}, {1, 4, false}, {3, 4, false}})
    tasks.push_back([o, kk = kk, nn = nn, zero = zero] {
      const std::string name = "kernel_dim_" + std::to_string(kk) + "_" + std::to_string(nn);
      std::mt19937_64 rng(seed_for(o.seed, name));
      const int dim = one_wedge_i_kernel(random_grass_point(rng, nn, kk));
      const bool ok = zero ? dim == 0 : dim > 0;
      return std::vector<IdentityEntry>{make_entry(name, ok ? 0.0 : 1.0, o, double(dim))};
    });
  tasks.push_back([o, k, n] {
    std::mt19937_64 rng(seed_for(o.seed, "frame_invariance"));
    double r = 0.0;
    const int trials = std::max(o.samples, 200);
    for (int s = 0; s < trials; ++s) {
      const GrassPoint v = random_grass_point(rng, n, k);
      const GrassPoint w = v.rotated(random_orthogonal(rng, k), random_orthogonal(rng, n - k));
      const Vector a = gaussian(rng, n), c = gaussian(rng, n);
      const AmbientSection sec = scaled_section(a, c);
      r = std::max(r, std::abs(twistor_norm(twistor_D(sec, v)) - twistor_norm(twistor_D(sec, w))));
      if (s < 10 && k * (n - k) <= 16) r = std::max(r, double(std::abs(one_wedge_i_kernel(v) - one_wedge_i_kernel(w))));
    }
    return std::vector<IdentityEntry>{make_entry("frame_invariance", r, o)};
  });
}

// ---------------------------------------------------------------- flow

void flow_tasks(const VerifyOptions& o, std::vector<Task>& tasks) {
  auto alg = std::make_shared<const LieAlgebra>(load_algebra(o.algebra));
  const int dim = alg->dim();
  if (dim < 4) throw InputError("flow needs an algebra of dimension at least 4");
  const bool is_so4 = o.algebra == "so4";
  if (is_so4)
    tasks.push_back([o, alg] {
      const double sp = psi(*alg, sp1_plus()), sm = psi(*alg, sp1_minus()), dl = psi(*alg, sp1_diagonal());
      Matrix span = Matrix::Zero(6, 3);
      span(so4::e1, 0) = span(so4::f1, 1) = span(so4::e2, 2) = 1.0;
      const double z = psi(*alg, GrassPoint::from_spanning(span));
      const double r = std::max({std::abs(sp - kSqrt2), std::abs(sm - kSqrt2), std::abs(dl - 1.0), std::abs(z)});
      return std::vector<IdentityEntry>{make_entry("psi_values", r, o),
                                        make_entry("critical_ratio", std::abs(sp / dl - kSqrt2), o, sp / dl)};
    });
  tasks.push_back([o, alg, dim] {
    std::mt19937_64 rng(seed_for(o.seed, "grad_psi_fd"));
    double fd = 0.0, orth = 0.0, eq = 0.0, fr = 0.0;
    const int trials = std::min(o.samples, 200);
    for (int s = 0; s < trials; ++s) {
      const GrassPoint v = random_grass_point(rng, dim, 3);
      const TangentVec g = grad_psi(*alg, v);
      const double h = 1e-5;
      for (int i = 0; i < 3; ++i)
        for (int r = 0; r < dim - 3; ++r) {
          const double d = (psi(*alg, curve_alpha(v, i, r, h)) - psi(*alg, curve_alpha(v, i, r, -h))) / (2 * h);
          fd = std::max(fd, std::abs(d - g.coeffs(i, r)));
        }
      for (int a = 0; a < dim; ++a)
        orth = std::max(orth, std::abs(tangent_inner(g, killing_tangent(*alg, v, alg->basis_vector(a)))));
      const Matrix ad = alg->ad(gaussian(rng, dim));
      const Matrix aut = ad.exp();
      eq = std::max(eq, std::abs(psi(*alg, transform(v, aut)) - psi(*alg, v)));
      const GrassPoint w = v.rotated(random_orthogonal(rng, 3), random_orthogonal(rng, dim - 3));
      fr = std::max({fr, std::abs(psi(*alg, w) - psi(*alg, v)), std::abs(psi(*alg, v.reversed()) + psi(*alg, v))});
    }
    return std::vector<IdentityEntry>{make_entry("grad_psi_fd", fd, o), make_entry("grad_psi_orbit_orthogonal", orth, o),
                                      make_entry("psi_equivariance", eq, o), make_entry("psi_frame_invariance", fr, o)};
  });
  tasks.push_back([o, alg, dim, is_so4] {
    std::vector<IdentityEntry> out;
    if (!is_so4) return out;
    std::mt19937_64 rng(seed_for(o.seed, "descent_terminal"));
    const int trials = std::min(o.samples, 50);
    double desc = 0.0, sym = 0.0;
    for (int s = 0; s < trials; ++s) {
      desc = std::max(desc, std::abs(flow_run(*alg, random_grass_point(rng, dim, 3), FlowDirection::descend).report.psi_value));
      sym = std::max(sym, std::abs(flow_run(*alg, random_symmetric_seed(rng), FlowDirection::ascend).report.psi_value - 1.0));
    }
    out.push_back(make_entry("descent_terminal", desc, o));
    out.push_back(make_entry("symmetric_seed_terminal", sym, o));
    return out;
  });
}

// ---------------------------------------------------------------- qk

std::vector<double> qk_grid() {
  std::vector<double> ts;
  for (int s = 1; s <= 20; ++s) ts.push_back(s * kPi / 21.0);
  return ts;
}

}  // namespace

int default_threads() {
  int hw = static_cast<int>(std::thread::hardware_concurrency());
  if (hw < 1) hw = 1;
  if (const char* env = std::getenv("GRASSLAB_THREADS")) {
    const int cap = std::atoi(env);
    if (cap >= 1) return std::min(hw, cap);
  }
  return hw;
}

LieAlgebra load_algebra(const std::string& spec) {
  if (spec == "so4") return make_so4();
  if (spec == "sp2") return make_sp2();
  if (spec.rfind("file:", 0) == 0) return load_structure_constants(spec.substr(5)).orthonormalized().first;
  throw InputError("unknown algebra '" + spec + "'");
}

std::vector<IdentityEntry> verify_suite(const std::string& suite, const VerifyOptions& opts) {
  if (suite == "all") {
    std::vector<IdentityEntry> all;
    for (const char* s : {"rep", "grass", "flow", "qk"}) {
      auto part = verify_suite(s, opts);
      all.insert(all.end(), part.begin(), part.end());
    }
    std::sort(all.begin(), all.end(), [](const auto& a, const auto& b) { return a.name < b.name; });
    return all;
  }
  if (opts.samples < 1) throw InputError("samples must be positive");
  std::vector<IdentityEntry> out;
  std::mutex m;
  auto run = [&](std::vector<Task>& tasks) {
    std::vector<std::vector<IdentityEntry>> results(tasks.size());
    std::exception_ptr err;
    parallel_for(static_cast<int>(tasks.size()), opts.threads, [&](int i) {
      try {
        results[i] = tasks[i]();
      } catch (...) {
        std::lock_guard<std::mutex> lock(m);
        if (!err) err = std::current_exception();
      }
    });
    if (err) std::rethrow_exception(err);
    for (auto& r : results) out.insert(out.end(), r.begin(), r.end());
  };

  std::vector<Task> tasks;
  if (suite == "rep") {
    rep_tasks(opts, tasks);
    run(tasks);
  } else if (suite == "grass") {
    grass_tasks(opts, tasks);
    run(tasks);
  } else if (suite == "flow") {
    const LieAlgebra alg = load_algebra(opts.algebra);
    if (alg.dim() < 4) throw InputError("flow needs an algebra of dimension at least 4");
    const bool is_so4 = opts.algebra == "so4";
    flow_tasks(opts, tasks);
    run(tasks);
    // One task per ascent seed; entries do not depend on the worker count.
    std::vector<double> err(opts.samples, 0.0);
    std::vector<int> bad(opts.samples, 0);
    std::vector<Task> runs;
    for (int s = 0; s < opts.samples; ++s)
      runs.push_back([&, s]() -> std::vector<IdentityEntry> {
        std::mt19937_64 rng(seed_for(opts.seed, "ascent") + static_cast<std::uint64_t>(s));
        const FlowResult r = flow_run(alg, random_grass_point(rng, alg.dim(), 3), FlowDirection::ascend, {}, true);
        err[s] = std::abs(r.report.psi_value - kSqrt2);
        bad[s] = r.report.monotone ? 0 : 1;
        return {};
      });
    run(runs);
    const int violations = std::accumulate(bad.begin(), bad.end(), 0);
    out.push_back(make_entry("ascent_monotone", violations, opts, double(violations)));
    if (is_so4) out.push_back(make_entry("ascent_terminal", *std::max_element(err.begin(), err.end()), opts));
  } else if (suite == "qk") {
    const auto ts = qk_grid();
    std::vector<CoincidenceReport> reports(ts.size());
    for (std::size_t i = 0; i < ts.size(); ++i)
      tasks.push_back([&, i]() -> std::vector<IdentityEntry> {
        reports[i] = verify_coincidence(ts[i], opts.samples, opts.seed + i);
        return {};
      });
    tasks.push_back([&]() -> std::vector<IdentityEntry> {
      double ov = 0.0, lam = 0.0;
      for (int s = 0; s < 100; ++s) {
        const double t = s * kPi / 99.0;
        const OverlapTable o = overlap_table(t);
        const double s2 = std::pow(std::sin(t), 2), c2 = std::pow(std::cos(t), 2);
        ov = std::max({ov, std::abs(o.ef - s2), std::abs(o.fe - s2), std::abs(o.ee - c2), std::abs(o.ff - c2),
                       o.off_diagonal, o.diagonal_spread});
        lam = std::max(lam, std::abs(std::pow(lambda_of_t(t), 2) - std::pow(std::cos(t), 4) - std::pow(std::sin(t), 4)));
      }
      const double ends = std::max({grassmann_distance(Psi_map(0.0), sp1_minus()),
                                    grassmann_distance(Psi_map(kPi / 4), sp1_diagonal()),
                                    grassmann_distance(Psi_map(kPi / 2), sp1_plus())});
      const ImageDecomposition d = decompose_image();
      const bool ok = d.tangent.to_string() == "S4 + S2 + S0" && d.image.to_string() == "S2 + S0";
      return {make_entry("overlap_table", ov, opts), make_entry("lambda_closed_form", lam, opts),
              make_entry("psi_endpoints", ends, opts), make_entry("image_decomposition", ok ? 0.0 : 1.0, opts),
              make_entry("image_invariance", d.invariance_residual, opts)};
    });
    run(tasks);
    std::map<std::string, double> worst;
    double ratio_sum = 0.0;
    for (const auto& r : reports) {
      for (const auto& [k, v] : r.residuals) worst[k] = std::max(worst[k], std::isnan(v) ? INFINITY : v);
      ratio_sum += r.eta_ratio;
    }
    for (auto& e : out)
      if (e.name == "lambda_closed_form") e.residual = std::max(e.residual, worst["lambda_closed_form"]);
    worst.erase("lambda_closed_form");
    for (const auto& [k, v] : worst) {
      if (!catalog().count(k)) continue;
      if (k == "eta_ratio")
        out.push_back(make_entry(k, v, opts, ratio_sum / reports.size()));
      else
        out.push_back(make_entry(k, v, opts));
    }
  } else {
    throw InputError("unknown suite '" + suite + "'");
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.name < b.name; });
  return out;
}

std::vector<std::pair<std::string, std::string>> identity_catalog(const std::string& suite, const VerifyOptions& opts) {
  static const std::map<std::string, std::vector<std::string>> names = {
      {"rep", {"lie_structure", "p_sigma_residual", "prop41_residual", "q_identity_residual", "quaternion_relations",
               "weights_adjoint", "weights_fundamental"}},
      {"grass", {"D_perp_residual", "D_sA_residual", "frame_invariance", "kernel_dim_1_4", "kernel_dim_3_10",
                 "kernel_dim_3_4", "kernel_dim_3_6", "sff_adjoint", "sff_residual"}},
      {"flow_common", {"ascent_monotone", "grad_psi_fd", "grad_psi_orbit_orthogonal", "psi_equivariance",
                       "psi_frame_invariance"}},
      {"flow_so4", {"ascent_terminal", "critical_ratio", "descent_terminal", "psi_values", "symmetric_seed_terminal"}},
      {"qk", {"I_grad_psi", "eta_block_scalar", "eta_ratio", "gamma_grad_psi", "geodesic_to_grad_psi",
              "grad_norm_ratio", "grad_psi_in_image", "image_decomposition", "image_invariance",
              "killing_pushforward", "lambda_closed_form", "lambda_gram", "geodesic_pushforward", "mu_norm", "overlap_table",
              "pushed_quaternion_formula", "pushed_quaternion_rotation", "psi_closed_form", "psi_endpoints", "psi_map_equivariance",
              "pushforward_equivariance", "quaternion_pushforward", "quaternionic_span", "rho_orthogonal",
              "t_vs_pi_minus_t", "pushforward_formula", "trajectory_family"}},
  };
  std::vector<std::string> list;
  auto add = [&](const std::string& key) { list.insert(list.end(), names.at(key).begin(), names.at(key).end()); };
  if (suite == "rep" || suite == "all") add("rep");
  if (suite == "grass" || suite == "all") add("grass");
  if (suite == "flow" || suite == "all") {
    add("flow_common");
    if (opts.algebra == "so4") add("flow_so4");
  }
  if (suite == "qk" || suite == "all") add("qk");
  if (list.empty()) throw InputError("unknown suite '" + suite + "'");
  std::sort(list.begin(), list.end());
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& n : list) out.emplace_back(n, catalog().at(n).anchor);
  return out;
}

nlohmann::json verify_report(const std::string& suite, const VerifyOptions& opts,
                             const std::vector<IdentityEntry>& entries) {
  nlohmann::json j;
  j["schema"] = 1;
  j["suite"] = suite;
  j["seed"] = opts.seed;
  j["samples"] = opts.samples;
  j["k"] = opts.k;
  j["n"] = opts.n;
  j["algebra"] = opts.algebra;
  nlohmann::json tol = nlohmann::json::object();
  nlohmann::json ids = nlohmann::json::array();
  bool all = true;
  for (const auto& e : entries) {
    tol[e.name] = e.tolerance;
    nlohmann::json item{{"name", e.name}, {"anchor", e.anchor}, {"residual", e.residual},
                        {"tolerance", e.tolerance}, {"pass", e.pass()}};
    if (e.value) item["value"] = *e.value;
    ids.push_back(item);
    all = all && e.pass();
  }
  j["tolerances"] = tol;
  j["identities"] = ids;
  j["pass"] = all;
  return j;
}

}  // namespace grasslab
