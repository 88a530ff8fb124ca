#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "grasslab/liealg.hpp"

using namespace grasslab;

namespace {

const double kSqrt2 = std::sqrt(2.0);

CMatrix comm(const CMatrix& a, const CMatrix& b) { return a * b - b * a; }

// Printed so(4) matrices, typed independently of the library.
CMatrix printed(int which) {
  const double s = 1.0 / kSqrt2;
  const Complex i(0, 1);
  CMatrix m = CMatrix::Zero(4, 4);
  switch (which) {
    case 0: m(0, 0) = s * i; m(2, 2) = -s * i; break;
    case 1: m(0, 2) = s; m(2, 0) = -s; break;
    case 2: m(0, 2) = s * i; m(2, 0) = s * i; break;
    case 3: m(1, 1) = s * i; m(3, 3) = -s * i; break;
    case 4: m(1, 3) = s; m(3, 1) = -s; break;
    default: m(1, 3) = s * i; m(3, 1) = s * i; break;
  }
  return m;
}

Vector random_vector(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> d;
  Vector v(n);
  for (int i = 0; i < n; ++i) v(i) = d(rng);
  return v;
}

}  // namespace

TEST(So4, GramIsIdentity) {
  const LieAlgebra so4 = make_so4();
  EXPECT_EQ(so4.dim(), 6);
  EXPECT_LT((so4.gram() - Matrix::Identity(6, 6)).cwiseAbs().maxCoeff(), 1e-14);
  for (int a = 0; a < 6; ++a)
    for (int b = 0; b < 6; ++b) {
      const double ip = -(printed(a) * printed(b)).trace().real();
      EXPECT_NEAR(ip, a == b ? 1.0 : 0.0, 1e-15);
    }
}

TEST(So4, BracketsMatchPrintedCommutators) {
  const LieAlgebra so4 = make_so4();
  for (int a = 0; a < 6; ++a)
    for (int b = 0; b < 6; ++b) {
      const CMatrix c = comm(printed(a), printed(b));
      const Vector br = so4.bracket(so4.basis_vector(a), so4.basis_vector(b));
      CMatrix rebuilt = CMatrix::Zero(4, 4);
      for (int k = 0; k < 6; ++k) rebuilt += br(k) * printed(k);
      EXPECT_LT((rebuilt - c).cwiseAbs().maxCoeff(), 1e-14) << a << "," << b;
    }
  const Vector e12 = so4.bracket(so4.basis_vector(so4::e1), so4.basis_vector(so4::e2));
  EXPECT_NEAR(e12(so4::e3), kSqrt2, 1e-14);
  const Vector f12 = so4.bracket(so4.basis_vector(so4::f1), so4.basis_vector(so4::f2));
  EXPECT_NEAR(f12(so4::f3), kSqrt2, 1e-14);
  EXPECT_LT(so4.bracket(so4.basis_vector(so4::e1), so4.basis_vector(so4::f2)).norm(), 1e-15);
}

TEST(So4, StructuralResiduals) {
  const LieAlgebra so4 = make_so4();
  EXPECT_EQ(so4.antisymmetry_residual(), 0.0);
  EXPECT_LT(so4.jacobi_residual(), 1e-12);
  EXPECT_LT(so4.ad_invariance_residual(), 1e-12);
  EXPECT_LT(so4.representation_residual(), 1e-12);
  Eigen::SelfAdjointEigenSolver<Matrix> es(so4.killing_form());
  EXPECT_LT(es.eigenvalues().maxCoeff(), 0.0);
}

TEST(So4, AdInvarianceOnRandomTriples) {
  const LieAlgebra so4 = make_so4();
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 100; ++trial) {
    const Vector x = random_vector(rng, 6), y = random_vector(rng, 6), z = random_vector(rng, 6);
    EXPECT_NEAR(so4.inner(so4.bracket(x, y), z), so4.inner(x, so4.bracket(y, z)), 1e-12);
  }
}

TEST(Sp2, SymmetricPair) {
  const LieAlgebra sp2 = make_sp2();
  ASSERT_EQ(sp2.dim(), 10);
  EXPECT_LT((sp2.gram() - Matrix::Identity(10, 10)).cwiseAbs().maxCoeff(), 1e-13);
  EXPECT_LT(sp2.jacobi_residual(), 1e-12);
  const CMatrix j = sp2_form();
  for (const CMatrix& x : sp2.matrix_rep()) {
    EXPECT_LT((x + x.adjoint()).cwiseAbs().maxCoeff(), 1e-14);
    EXPECT_LT((x.transpose() * j + j * x).cwiseAbs().maxCoeff(), 1e-14);
  }
  for (int a = 0; a < 10; ++a)
    for (int b = 0; b < 10; ++b) {
      const Vector br = sp2.bracket(sp2.basis_vector(a), sp2.basis_vector(b));
      const bool a_in_k = a < sp2::so4_dim, b_in_k = b < sp2::so4_dim;
      if (a_in_k == b_in_k)
        EXPECT_LT(br.tail(sp2::m_dim).norm(), 1e-13);
      else
        EXPECT_LT(br.head(sp2::so4_dim).norm(), 1e-13);
    }
  // First m vector is u / |u| with |u|^2 = 4.
  const CMatrix u = sp2_geodesic_generator();
  EXPECT_NEAR(-(u * u).trace().real(), 4.0, 1e-15);
  EXPECT_LT((sp2.matrix_rep()[sp2::m_begin] - u / 2.0).cwiseAbs().maxCoeff(), 1e-14);
  // The so(4) block agrees with make_so4.
  for (int a = 0; a < 6; ++a) EXPECT_LT((sp2.matrix_rep()[a] - printed(a)).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(GroupElement, ExpMatchesRk4Integration) {
  const LieAlgebra sp2 = make_sp2();
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 5; ++trial) {
    const Vector z = random_vector(rng, 10) * 0.5;
    const Vector x0 = random_vector(rng, 10);
    const GroupElement g = GroupElement::exp(sp2, z, 1.0);
    // dX/dt = [Z, X], integrated with fixed-step RK4 on the structure constants.
    const Matrix adz = sp2.ad(z);
    Vector x = x0;
    const int steps = 2000;
    const double h = 1.0 / steps;
    for (int s = 0; s < steps; ++s) {
      const Vector k1 = adz * x, k2 = adz * (x + 0.5 * h * k1), k3 = adz * (x + 0.5 * h * k2),
                   k4 = adz * (x + h * k3);
      x += h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
    }
    EXPECT_LT((adjoint_action(g, x0) - x).norm(), 1e-10);
    EXPECT_LT((g.adjoint().transpose() * g.adjoint() - Matrix::Identity(10, 10)).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_TRUE((g * g.inverse()).adjoint().isIdentity(1e-12));
  }
}

TEST(GroupElement, FromAdjointRejectsNonAutomorphism) {
  const LieAlgebra so4 = make_so4();
  Matrix swap = Matrix::Identity(6, 6);
  swap.col(0).swap(swap.col(1));  // swaps e1, e2 only: not a bracket automorphism
  EXPECT_THROW(GroupElement::from_adjoint(so4, swap), InputError);
  // e_i <-> f_i is an automorphism.
  Matrix sigma = Matrix::Zero(6, 6);
  sigma.topRightCorner(3, 3).setIdentity();
  sigma.bottomLeftCorner(3, 3).setIdentity();
  EXPECT_NO_THROW(GroupElement::from_adjoint(so4, sigma));
  EXPECT_THROW(GroupElement::from_adjoint(so4, 2.0 * Matrix::Identity(6, 6)), InputError);
}

TEST(GroupElement, FromMatrixRejectsSingular) {
  const LieAlgebra so4 = make_so4();
  EXPECT_THROW(GroupElement::from_matrix(so4, CMatrix::Zero(4, 4)), InputError);
}

TEST(Sl2, CorrectedTripleSatisfiesRelations) {
  const Sl2Triple t = principal_sl2_embedding();
  EXPECT_LT(sl2_relation_residual(t), 1e-12);
  const CMatrix j = sp2_form();
  for (const CMatrix* m : {&t.x, &t.y, &t.h}) EXPECT_LT((m->transpose() * j + j * (*m)).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Sl2, PrintedTripleFailsOnlyXY) {
  const Sl2Triple t = principal_sl2_printed();
  EXPECT_LT((comm(t.h, t.x) - 2.0 * t.x).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_LT((comm(t.h, t.y) + 2.0 * t.y).cwiseAbs().maxCoeff(), 1e-14);
  const CMatrix xy = comm(t.x, t.y);
  EXPECT_NEAR(xy(0, 0).real(), 3.0, 1e-14);
  EXPECT_NEAR(xy(1, 1).real(), -1.0, 1e-14);
  EXPECT_NEAR(xy(2, 2).real(), -3.0, 1e-14);
  EXPECT_NEAR(xy(3, 3).real(), 1.0, 1e-14);
}

TEST(StructureFile, RoundTrip) {
  const LieAlgebra so4 = make_so4();
  std::stringstream ss;
  write_structure_constants(ss, so4);
  const LieAlgebra back = read_structure_constants(ss, "copy");
  for (int k = 0; k < 6; ++k)
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 6; ++j) EXPECT_NEAR(back.structure(i, j, k), so4.structure(i, j, k), 1e-15);
}

TEST(StructureFile, FillsAntisymmetricPartners) {
  std::stringstream ss("# so(3)\ndim 3\n0 1 2 1\n1 2 0 1\n2 0 1 1\ngram\n1 0 0\n0 1 0\n0 0 1\n");
  const LieAlgebra so3 = read_structure_constants(ss);
  EXPECT_EQ(so3.structure(1, 0, 2), -1.0);
  EXPECT_LT(so3.jacobi_residual(), 1e-15);
}

TEST(StructureFile, RejectsBadInput) {
  std::stringstream no_dim("0 1 2 1\n");
  EXPECT_THROW(read_structure_constants(no_dim), InputError);
  std::stringstream no_gram("dim 2\n0 1 1 1\n");
  EXPECT_THROW(read_structure_constants(no_gram), InputError);
  // Bracket violating Jacobi: [X0,X1]=X2, [X1,X2]=X2, [X2,X0]=0 with metric identity.
  std::stringstream bad("dim 3\n0 1 2 1\n1 2 2 1\ngram\n1 0 0\n0 1 0\n0 0 1\n");
  EXPECT_THROW(read_structure_constants(bad), InputError);
  EXPECT_THROW(load_structure_constants("/nonexistent/path.txt"), InputError);
}
