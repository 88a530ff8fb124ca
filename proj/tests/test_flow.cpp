#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include <unsupported/Eigen/MatrixFunctions>

#include "grasslab/flow.hpp"

using namespace grasslab;

namespace {

const double kSqrt2 = std::sqrt(2.0);

Vector unit(int i) {
  Vector v = Vector::Zero(6);
  v(i) = 1.0;
  return v;
}

GrassPoint span_of(std::initializer_list<int> idx) {
  Matrix m(6, static_cast<int>(idx.size()));
  int c = 0;
  for (int i : idx) m.col(c++) = unit(i);
  return GrassPoint::from_spanning(m);
}

// Finite-difference derivative of psi along T_ir (via alpha curves).
double fd_psi(const LieAlgebra& alg, const GrassPoint& v, int i, int r) {
  const double h = 1e-5;
  return (psi(alg, curve_alpha(v, i, r, h)) - psi(alg, curve_alpha(v, i, r, -h))) / (2 * h);
}

}  // namespace

TEST(Psi, Examples) {
  const LieAlgebra so4 = make_so4();
  EXPECT_NEAR(psi(so4, sp1_plus()), kSqrt2, 1e-14);
  EXPECT_NEAR(psi(so4, sp1_minus()), kSqrt2, 1e-14);
  EXPECT_NEAR(psi(so4, sp1_diagonal()), 1.0, 1e-14);
  EXPECT_NEAR(psi(so4, span_of({so4::e1, so4::f1, so4::e2})), 0.0, 1e-15);
  EXPECT_THROW(psi(so4, span_of({so4::e1, so4::e2})), InputError);
}

TEST(Psi, DiagonalBracketClosesOnThirdVector) {
  const LieAlgebra so4 = make_so4();
  const GrassPoint d = sp1_diagonal();
  const Vector br = so4.bracket(d.frame.col(0), d.frame.col(1));
  EXPECT_LT((br - d.frame.col(2)).norm(), 1e-14);
}

TEST(Psi, OrientationAndFrameInvariance) {
  const LieAlgebra so4 = make_so4();
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 200; ++trial) {
    const GrassPoint v = random_grass_point(rng, 6, 3);
    const double p = psi(so4, v);
    EXPECT_NEAR(psi(so4, v.reversed()), -p, 1e-15);
    EXPECT_NEAR(psi(so4, v.with_swapped_columns(0, 1)), p, 1e-14);
    const GrassPoint w = v.rotated(random_orthogonal(rng, 3), random_orthogonal(rng, 3));
    EXPECT_NEAR(psi(so4, w), p, 1e-9);
    EXPECT_NEAR(grad_psi(so4, w).norm(), grad_psi(so4, v).norm(), 1e-9);
    EXPECT_NEAR(grad_psi(so4, v.reversed()).norm(), grad_psi(so4, v).norm(), 1e-15);
  }
}

TEST(Psi, AdjointEquivariance) {
  const LieAlgebra so4 = make_so4();
  std::mt19937_64 rng(2);
  std::normal_distribution<double> d;
  for (int trial = 0; trial < 20; ++trial) {
    Vector z(6);
    for (int i = 0; i < 6; ++i) z(i) = d(rng);
    const Matrix ad = (so4.ad(z)).exp();
    const GrassPoint v = random_grass_point(rng, 6, 3);
    EXPECT_NEAR(psi(so4, transform(v, ad)), psi(so4, v), 1e-9);
  }
}

TEST(GradPsi, Examples) {
  const LieAlgebra so4 = make_so4();
  EXPECT_LT(grad_psi(so4, sp1_plus()).norm(), 1e-15);
  const GrassPoint v = span_of({so4::e1, so4::e2, so4::f3});
  const TangentVec g = grad_psi(so4, v);
  // Only v3 (x) [v1, v2]^perp = f3 (x) sqrt2 e3 survives.
  EXPECT_LT(g.coeffs.topRows(2).norm(), 1e-15);
  const Vector third = v.coframe * g.coeffs.row(2).transpose();
  EXPECT_LT((third - kSqrt2 * unit(so4::e3)).norm(), 1e-14);
}

TEST(GradPsi, MatchesFiniteDifferences) {
  const LieAlgebra so4 = make_so4();
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const GrassPoint v = random_grass_point(rng, 6, 3);
    const TangentVec g = grad_psi(so4, v);
    for (int i = 0; i < 3; ++i)
      for (int r = 0; r < 3; ++r) EXPECT_NEAR(g.coeffs(i, r), fd_psi(so4, v, i, r), 1e-6);
  }
}

TEST(GradPsi, OrthogonalToOrbits) {
  const LieAlgebra so4 = make_so4();
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 50; ++trial) {
    const GrassPoint v = random_grass_point(rng, 6, 3);
    for (int a = 0; a < 6; ++a)
      EXPECT_LT(std::abs(tangent_inner(grad_psi(so4, v), killing_tangent(so4, v, unit(a)))), 1e-12);
  }
}

TEST(Flow, TrajectoryFamilyAscendsToSp1Plus) {
  const LieAlgebra so4 = make_so4();
  const double x = 0.8, y = 0.6;
  EXPECT_NEAR(psi(so4, trajectory_so4(x, y)), kSqrt2 * (x * x * x + y * y * y), 1e-14);
  const FlowResult r = flow_run(so4, trajectory_so4(x, y), FlowDirection::ascend, {}, true);
  EXPECT_TRUE(r.report.converged);
  EXPECT_TRUE(r.report.monotone);
  EXPECT_NEAR(r.report.psi_value, kSqrt2, 1e-10);
  EXPECT_LT(grassmann_distance(r.report.point, sp1_plus()), 1e-8);
  EXPECT_EQ(r.report.kind, CriticalKind::subalgebra_sp1);
}

TEST(Flow, DiagonalIsCritical) {
  const LieAlgebra so4 = make_so4();
  const FlowResult r = flow_run(so4, sp1_diagonal(), FlowDirection::ascend);
  EXPECT_TRUE(r.report.converged);
  EXPECT_EQ(r.report.iterations, 0);
  EXPECT_NEAR(r.report.psi_value, 1.0, 1e-14);
  EXPECT_EQ(r.report.kind, CriticalKind::subalgebra_sp1);
}

TEST(Flow, RandomSeedsAscendMonotonically) {
  const LieAlgebra so4 = make_so4();
  std::mt19937_64 rng(5);
  for (const Retraction ret : {Retraction::orthonormalize, Retraction::polar}) {
    FlowConfig cfg;
    cfg.retraction = ret;
    for (int trial = 0; trial < 50; ++trial) {
      const FlowResult r = flow_run(so4, random_grass_point(rng, 6, 3), FlowDirection::ascend, cfg, true);
      EXPECT_TRUE(r.report.monotone);
      EXPECT_NEAR(r.report.psi_value, kSqrt2, 1e-4);
    }
  }
}

TEST(Flow, DescentReachesZeroLevel) {
  const LieAlgebra so4 = make_so4();
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 30; ++trial) {
    const FlowResult r = flow_run(so4, random_grass_point(rng, 6, 3), FlowDirection::descend, {}, true);
    EXPECT_TRUE(r.report.monotone);
    EXPECT_NEAR(r.report.psi_value, 0.0, 1e-4);
  }
}

TEST(Flow, SymmetricSeedsReachUnitLevel) {
  const LieAlgebra so4 = make_so4();
  const Matrix s = so4_swap();
  EXPECT_NO_THROW(GroupElement::from_adjoint(so4, s));
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 30; ++trial) {
    const GrassPoint v = random_symmetric_seed(rng);
    EXPECT_LT((s * v.projector() * s - v.projector()).cwiseAbs().maxCoeff(), 1e-12);
    const FlowResult r = flow_run(so4, v, FlowDirection::ascend);
    EXPECT_NEAR(r.report.psi_value, 1.0, 1e-4);
    EXPECT_EQ(r.report.kind, CriticalKind::subalgebra_sp1);
  }
}

TEST(Flow, CatalogAndRatio) {
  const auto cat = critical_catalog({1.41421356, -1.4142135, 0.99999999, 1e-7, -2e-7, 1.0});
  ASSERT_EQ(cat.size(), 3u);
  EXPECT_NEAR(cat[0], 0.0, 1e-6);
  EXPECT_NEAR(cat[1], 1.0, 1e-6);
  EXPECT_NEAR(cat[2], kSqrt2, 1e-6);
}

TEST(Flow, RejectsBadConfig) {
  const LieAlgebra so4 = make_so4();
  FlowConfig cfg;
  cfg.step = -1.0;
  EXPECT_THROW(flow_run(so4, sp1_plus(), FlowDirection::ascend, cfg), InputError);
}

TEST(Classify, AbelianAlgebra) {
  std::stringstream ss("dim 4\ngram\n1 0 0 0\n0 1 0 0\n0 0 1 0\n0 0 0 1\n");
  const LieAlgebra r4 = read_structure_constants(ss, "abelian");
  std::mt19937_64 rng(8);
  EXPECT_EQ(classify(r4, random_grass_point(rng, 4, 3)), CriticalKind::abelian);
  const LieAlgebra so4 = make_so4();
  EXPECT_EQ(classify(so4, random_grass_point(rng, 6, 3)), CriticalKind::other);
}

TEST(Classify, RequiresOrthonormalBasis) {
  std::stringstream ss("dim 3\n0 1 2 1\n1 2 0 1\n2 0 1 1\ngram\n2 0 0\n0 2 0\n0 0 2\n");
  const LieAlgebra so3 = read_structure_constants(ss);
  const GrassPoint v = GrassPoint::from_spanning(Matrix::Identity(3, 2));
  EXPECT_THROW(classify(so3, v), InputError);
  const auto [ortho, basis] = so3.orthonormalized();
  EXPECT_NO_THROW(classify(ortho, v));
}

TEST(Trajectory, ExamplesAndErrors) {
  EXPECT_LT(grassmann_distance(trajectory_so4(0, 1), sp1_minus()), 1e-15);
  EXPECT_LT(grassmann_distance(trajectory_so4(1, 0), sp1_plus()), 1e-15);
  EXPECT_THROW(trajectory_so4(1, 1), InputError);
}

TEST(Output, CsvAndSummary) {
  const LieAlgebra so4 = make_so4();
  const FlowResult r = flow_run(so4, trajectory_so4(0.8, 0.6), FlowDirection::ascend, {}, true);
  const std::string csv = trajectory_csv(r);
  const std::string header = csv.substr(0, csv.find('\n'));
  EXPECT_EQ(std::count(header.begin(), header.end(), ','), 2 + 18);
  EXPECT_EQ(header.rfind("iter,psi,grad_norm", 0), 0u);
  const auto j = summary_json(r, 42);
  EXPECT_EQ(j["seed"], 42);
  EXPECT_EQ(j["kind"], "subalgebra-sp1");
  EXPECT_TRUE(j.contains("iterations"));
  EXPECT_TRUE(j.contains("final_psi"));
}
