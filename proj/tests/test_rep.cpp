#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "grasslab/liealg.hpp"
#include "grasslab/rep.hpp"

using namespace grasslab;

namespace {

const Complex kI(0, 1);

// Brute-force model: full tensors in (C^2)^{x k}, index bit b of position p
// selects h (0) or hhat (1).
using Full = std::vector<Complex>;

Full full_monomial(int k, int hhat_power) {
  // Average of all orderings with hhat_power copies of hhat.
  Full t(1u << k, 0.0);
  std::vector<int> slots(k, 0);
  std::fill(slots.end() - hhat_power, slots.end(), 1);
  std::vector<int> perm(k);
  std::iota(perm.begin(), perm.end(), 0);
  double count = 0;
  do {
    unsigned idx = 0;
    for (int p = 0; p < k; ++p) idx |= static_cast<unsigned>(slots[perm[p]]) << p;
    t[idx] += 1.0;
    count += 1;
  } while (std::next_permutation(perm.begin(), perm.end()));
  for (auto& c : t) c /= count;
  return t;
}

Full to_full(const SymTensor& s) {
  Full t(1u << s.degree(), 0.0);
  for (int j = 0; j <= s.degree(); ++j) {
    const Full m = full_monomial(s.degree(), j);
    for (std::size_t a = 0; a < t.size(); ++a) t[a] += s.coeff(j) * m[a];
  }
  return t;
}

Full tensor(const Full& a, int ka, const Full& b) {
  Full t(a.size() * b.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) t[i | (j << ka)] = a[i] * b[j];
  return t;
}

Full symmetrize(const Full& t, int k) {
  std::vector<int> perm(k);
  std::iota(perm.begin(), perm.end(), 0);
  Full out(t.size(), 0.0);
  double count = 0;
  do {
    for (unsigned idx = 0; idx < t.size(); ++idx) {
      unsigned dst = 0;
      for (int p = 0; p < k; ++p) dst |= ((idx >> p) & 1u) << perm[p];
      out[dst] += t[idx];
    }
    count += 1;
  } while (std::next_permutation(perm.begin(), perm.end()));
  for (auto& c : out) c /= count;
  return out;
}

Complex full_inner(const Full& a, const Full& b) {
  Complex acc = 0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += std::conj(a[i]) * b[i];
  return acc;
}

SymTensor random_sym(std::mt19937_64& rng, int k) {
  std::normal_distribution<double> d;
  CVector c(k + 1);
  for (int j = 0; j <= k; ++j) c(j) = Complex(d(rng), d(rng));
  return SymTensor(k, c);
}

HTensor random_y(std::mt19937_64& rng, int k) { return {random_sym(rng, k), random_sym(rng, k)}; }

}  // namespace

TEST(SymTensor, ProductIsSymmetrizedTensorProduct) {
  std::mt19937_64 rng(1);
  for (int ka = 0; ka <= 3; ++ka)
    for (int kb = 0; kb <= 3 - ka + 1; ++kb) {
      const SymTensor a = random_sym(rng, ka), b = random_sym(rng, kb);
      const Full expect = symmetrize(tensor(to_full(a), ka, to_full(b)), ka + kb);
      const Full got = to_full(sym_product(a, b));
      for (std::size_t i = 0; i < got.size(); ++i) EXPECT_LT(std::abs(got[i] - expect[i]), 1e-13);
    }
}

TEST(SymTensor, InnerProductIsTensorMetric) {
  std::mt19937_64 rng(2);
  for (int k = 0; k <= 4; ++k) {
    const SymTensor a = random_sym(rng, k), b = random_sym(rng, k);
    EXPECT_LT(std::abs(a.inner(b) - full_inner(to_full(a), to_full(b))), 1e-12);
  }
  EXPECT_THROW(SymTensor::h().inner(SymTensor::monomial(2, 0)), InputError);
}

TEST(Quaternion, BasisOrthogonalWithNormSqrt2) {
  const auto q = quaternion_basis();
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) EXPECT_LT(std::abs(q[a].inner(q[b]) - (a == b ? 2.0 : 0.0)), 1e-15);
}

TEST(Quaternion, RelationsExact) {
  std::mt19937_64 rng(3);
  for (int deg = 0; deg <= 3; ++deg) {
    const HTensor y = random_y(rng, deg);
    for (int k = 1; k <= 3; ++k) EXPECT_LT((quat_product_action(k, k, y) + y).max_abs(), 1e-14);
    for (int i = 1; i <= 3; ++i)
      for (int j = 1; j <= 3; ++j) {
        if (i == j) continue;
        const int k = 6 - i - j;
        const double eps = levi_civita(i - 1, j - 1, k - 1);
        EXPECT_LT((quat_product_action(i, j, y) - quat_action(k, y) * eps).max_abs(), 1e-14);
      }
  }
  EXPECT_THROW(quat_action(0, random_y(rng, 1)), InputError);
}

TEST(QMap, MatchesFullTensorDefinition) {
  std::mt19937_64 rng(4);
  const auto quat = quaternion_basis();
  for (int deg = 1; deg <= 3; ++deg) {
    const HTensor y = random_y(rng, deg);
    const int i = deg + 1;  // degree of p_k
    const SymTensor h = SymTensor::h(), hh = SymTensor::hhat();
    const Full hf = to_full(h), hhf = to_full(hh);
    // 1/2 S(hh) x S(hhat beta) + 1/4 (h hhat + hhat h) x (S(hhat bhat) - S(h beta)) - 1/2 S(hhat hhat) x S(h bhat)
    auto sym2 = [&](const Full& a, const Full& b) { return symmetrize(tensor(a, 1, b), 2); };
    const Full hh2 = sym2(hf, hf), kk2 = sym2(hhf, hhf);
    Full hk2 = tensor(hf, 1, hhf);
    const Full kh2 = tensor(hhf, 1, hf);
    for (std::size_t a = 0; a < hk2.size(); ++a) hk2[a] += kh2[a];
    auto symk = [&](const Full& v, const SymTensor& s) { return symmetrize(tensor(v, 1, to_full(s)), i); };
    const Full p = symk(hhf, y.beta), r1 = symk(hhf, y.beta_hat), r2 = symk(hf, y.beta), n = symk(hf, y.beta_hat);
    Full q(1u << (2 + i), 0.0);
    auto add = [&](const Full& left, const Full& right, Complex c) {
      const Full t = tensor(left, 2, right);
      for (std::size_t a = 0; a < q.size(); ++a) q[a] += c * t[a];
    };
    add(hh2, p, 0.5);
    add(hk2, r1, 0.25);
    add(hk2, r2, -0.25);
    add(kk2, n, -0.5);
    const QImage got = q_map(y);
    for (int k = 0; k < 3; ++k) {
      // p_k = <I_k, Q>_{first factor} / |I_k|^2
      const Full ik = to_full(quat[k]);
      Full pk(1u << i, 0.0);
      for (unsigned a = 0; a < 4; ++a)
        for (unsigned b = 0; b < pk.size(); ++b) pk[b] += std::conj(ik[a]) * q[a | (b << 2)] / 2.0;
      const Full gf = to_full(got.p[k]);
      for (std::size_t b = 0; b < pk.size(); ++b) EXPECT_LT(std::abs(gf[b] - pk[b]), 1e-13) << deg << " " << k;
    }
  }
}

TEST(QMap, PrintedComponentFormulas) {
  std::mt19937_64 rng(5);
  for (int deg = 1; deg <= 3; ++deg) {
    const HTensor y = random_y(rng, deg);
    const SymTensor h = SymTensor::h(), hh = SymTensor::hhat();
    const SymTensor p = sym_product(hh, y.beta), n = sym_product(h, y.beta_hat);
    const SymTensor r = sym_product(hh, y.beta_hat) - sym_product(h, y.beta);
    const QImage q = q_map(y);
    EXPECT_LT((q.p[0] - r * (-0.25 * kI)).max_abs(), 1e-14);
    EXPECT_LT((q.p[1] - (p - n) * 0.25).max_abs(), 1e-14);
    EXPECT_LT((q.p[2] - (p + n) * (-0.25 * kI)).max_abs(), 1e-14);
  }
}

TEST(QMap, QuaternionicIdentitiesAtMachinePrecision) {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 50; ++trial)
    for (int deg = 1; deg <= 3; ++deg) {
      const QIdentityReport rep = verify_q_identities(random_y(rng, deg));
      EXPECT_LT(rep.max(), 1e-12);
    }
}

TEST(QMap, RejectsMismatchedDegrees) {
  const HTensor y{SymTensor::h(), SymTensor::monomial(2, 0)};
  EXPECT_THROW(q_map(y), InputError);
  EXPECT_THROW(sigma(y), InputError);
}

TEST(Weights, FundamentalModules) {
  EXPECT_EQ(weight_decompose(long_root_h()).to_string(), "S1 + 2S0");
  EXPECT_EQ(weight_decompose(short_root_h()).to_string(), "2S1");
  const WeightDecomposition principal = weight_decompose(principal_sl2_embedding().h);
  EXPECT_EQ(principal.to_string(), "S3");
  EXPECT_EQ(principal.module_dim(), 4);
}

TEST(Weights, AdjointIsSymmetricSquare) {
  const WeightDecomposition lr = weight_decompose(induced_sym2(long_root_h()));
  EXPECT_EQ(lr.multiplicities, (std::map<int, int>{{2, 1}, {1, 2}, {0, 3}}));
  const WeightDecomposition sr = weight_decompose(induced_sym2(short_root_h()));
  EXPECT_EQ(sr.multiplicities, (std::map<int, int>{{2, 3}, {0, 1}}));
  EXPECT_EQ(weight_decompose(induced_sym2(principal_sl2_embedding().h)).to_string(), "S6 + S2");
}

TEST(Weights, AdjointOfSp2ByBrackets) {
  // Eigenvalues of ad(H) on sp(2, C) computed from commutators, independent of induced_sym2.
  const LieAlgebra sp2 = make_sp2();
  for (const CMatrix& h : {long_root_h(), short_root_h()}) {
    CMatrix ad(10, 10);
    const auto& basis = sp2.matrix_rep();
    // Complex coordinates: sp(2, C) is spanned over C by the real basis.
    Eigen::MatrixXcd coords(16, 10);
    for (int a = 0; a < 10; ++a) coords.col(a) = Eigen::Map<const CVector>(basis[a].data(), 16);
    for (int a = 0; a < 10; ++a) {
      const CMatrix c = h * basis[a] - basis[a] * h;
      ad.col(a) = coords.colPivHouseholderQr().solve(Eigen::Map<const CVector>(c.data(), 16));
    }
    EXPECT_EQ(weight_decompose(ad), weight_decompose(induced_sym2(h)));
  }
}

TEST(Weights, TensorAndDirectSum) {
  const CMatrix s1 = sk_weight_matrix(1), s2 = sk_weight_matrix(2);
  EXPECT_EQ(weight_decompose(tensor_action(s1, s2)).to_string(), "S3 + S1");
  EXPECT_EQ(weight_decompose(direct_sum(s1, s2)).to_string(), "S2 + S1");
  EXPECT_EQ(weight_decompose(tensor_action(s2, s2)).to_string(), "S4 + S2 + S0");
}

TEST(Weights, RejectsInvalidSpectra) {
  EXPECT_THROW(weight_decompose(std::vector<int>{2, 0}), DecompositionError);
  CMatrix h = CMatrix::Zero(2, 2);
  h(0, 0) = 0.5;
  h(1, 1) = -0.5;
  EXPECT_THROW(weight_decompose(h), DecompositionError);
}

TEST(Weights, JsonSchema) {
  const auto j = to_json(weight_decompose(induced_sym2(long_root_h())));
  EXPECT_EQ(j["module_dim"], 10);
  ASSERT_EQ(j["components"].size(), 3u);
  EXPECT_EQ(j["components"][0]["k"], 2);
  EXPECT_EQ(j["components"][2]["mult"], 3);
}

TEST(Isotypic, So4UnderDiagonalAndFactor) {
  const LieAlgebra so4 = make_so4();
  std::array<Matrix, 3> diag, plus;
  for (int i = 0; i < 3; ++i) {
    Vector d = Vector::Zero(6);
    d(i) = d(i + 3) = 1.0 / std::sqrt(2.0);
    diag[i] = so4.ad(d);
    plus[i] = so4.ad(so4.basis_vector(i));
  }
  const auto cd = isotypic_projectors(diag);
  ASSERT_EQ(cd.size(), 1u);
  EXPECT_EQ(cd[0].k, 2);
  EXPECT_EQ(cd[0].dim, 6);
  const auto cp = isotypic_projectors(plus);
  ASSERT_EQ(cp.size(), 2u);
  Matrix sum = Matrix::Zero(6, 6);
  for (const auto& c : cp) {
    EXPECT_LT((c.projector * c.projector - c.projector).cwiseAbs().maxCoeff(), 1e-10);
    sum += c.projector;
  }
  EXPECT_LT((sum - Matrix::Identity(6, 6)).cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_EQ(cp[0].k, 0);
  EXPECT_EQ(cp[0].dim, 3);
  EXPECT_EQ(cp[1].k, 2);
}

TEST(Isotypic, RejectsNonClosedTriple) {
  std::array<Matrix, 3> g{Matrix::Identity(2, 2), Matrix::Identity(2, 2), Matrix::Identity(2, 2)};
  EXPECT_THROW(isotypic_projectors(g), InputError);
}
