#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"

#include "grasslab/common.hpp"

namespace grasslab {

/// Element of S^k H, H = C^2 with unitary basis h, hhat.
///
/// coeffs[j] multiplies the monomial h^{k-j} hhat^{j}, where a monomial is
/// the fully symmetrized tensor S(h x .. x h x hhat x .. x hhat) with the
/// 1/k! permutation average. With this convention the symmetric product of
/// two monomials is again a monomial, so sym_product is a plain
/// convolution of coefficient vectors.
class SymTensor {
 public:
  SymTensor() : SymTensor(0) {}
  explicit SymTensor(int degree);
  SymTensor(int degree, CVector coeffs);

  static SymTensor monomial(int h_power, int hhat_power, Complex c = 1.0);
  static SymTensor h() { return monomial(1, 0); }
  static SymTensor hhat() { return monomial(0, 1); }

  int degree() const { return degree_; }
  const CVector& coeffs() const { return coeffs_; }
  Complex coeff(int hhat_power) const { return coeffs_(hhat_power); }

  SymTensor operator+(const SymTensor& o) const;
  SymTensor operator-(const SymTensor& o) const;
  SymTensor operator*(Complex s) const;
  friend SymTensor operator*(Complex s, const SymTensor& t) { return t * s; }
  SymTensor operator-() const { return *this * Complex(-1.0); }

  /// Hermitian product induced from the tensor power of H with h, hhat
  /// orthonormal; <m_j, m_j> = 1 / binom(k, j).
  Complex inner(const SymTensor& o) const;
  double norm() const;
  double max_abs() const { return coeffs_.size() ? coeffs_.cwiseAbs().maxCoeff() : 0.0; }

 private:
  int degree_;
  CVector coeffs_;
};

/// sym(alpha, beta) = S(alpha x beta) in S^{k+h}.
SymTensor sym_product(const SymTensor& a, const SymTensor& b);

/// Y = h x beta + hhat x beta_hat in S^1 x S^{i-1}.
struct HTensor {
  SymTensor beta;
  SymTensor beta_hat;

  int degree() const { return beta.degree(); }
  HTensor operator+(const HTensor& o) const { return {beta + o.beta, beta_hat + o.beta_hat}; }
  HTensor operator-(const HTensor& o) const { return {beta - o.beta, beta_hat - o.beta_hat}; }
  HTensor operator*(Complex s) const { return {beta * s, beta_hat * s}; }
  double max_abs() const { return std::max(beta.max_abs(), beta_hat.max_abs()); }
};

/// sigma(Y) = sym(h, beta) + sym(hhat, beta_hat). Throws InputError when
/// the two components have different degrees.
SymTensor sigma(const HTensor& y);

/// Action of I_k (k = 1, 2, 3) on the H factor:
///   I1: (beta, bhat) -> (-i beta, i bhat)
///   I2: (beta, bhat) -> (bhat, -beta)
///   I3: (beta, bhat) -> (i bhat, i beta)
/// These satisfy I_k o I_k = -1 and I_j o I_i = sgn(ijk) I_k, i.e. the
/// quaternion product I_i I_j means "apply I_i, then I_j".
HTensor quat_action(int k, const HTensor& y);

/// Product I_i I_j in the convention above.
HTensor quat_product_action(int i, int j, const HTensor& y);

/// Element of S^2 H in the basis I1 = i(h hhat + hhat h), I2 = h^2 + hhat^2,
/// I3 = i(h^2 - hhat^2).
struct QuatElement {
  std::array<Complex, 3> coeffs{};
  SymTensor to_sym2() const;
};

/// The three basis elements I1, I2, I3 as elements of S^2 H.
std::array<SymTensor, 3> quaternion_basis();

/// Components Q(Y) = sum_k I_k x p_k with p_k in S^i.
struct QImage {
  std::array<SymTensor, 3> p;
  double max_abs() const;
  QImage operator-(const QImage& o) const;
};

/// Q(Y) = 1/2 sym(hh) sym(hhat beta) + 1/4 (h hhat + hhat h)(sym(hhat bhat) - sym(h beta))
///        - 1/2 sym(hhat hhat) sym(h bhat), expanded in the I-basis.
QImage q_map(const HTensor& y);

/// Residuals of the quaternionic identities for Q at a given Y.
struct QIdentityReport {
  double i1_rule = 0.0;           ///< Q(I1 Y) vs I1 x sigma/4 + I2 x p3 - I3 x p2
  double q_identity = 0.0;       ///< q^i_j = eps_ijk p_k + delta_ij sigma(Y)/4, all i
  double p_sigma = 0.0;          ///< p_i + sigma(I_i Y)/4
  double square = 0.0;           ///< Q(I1 I1 Y) + Q(Y)
  double product = 0.0;          ///< Q(I1 I2 Y) - Q(I3 Y)
  double max() const;
};

QIdentityReport verify_q_identities(const HTensor& y);

/// Multiplicities of S^k in an sp(1)-module.
struct WeightDecomposition {
  std::map<int, int> multiplicities;
  int module_dim() const;
  bool operator==(const WeightDecomposition& o) const { return multiplicities == o.multiplicities; }
  std::string to_string() const;
};

nlohmann::json to_json(const WeightDecomposition& d);

/// Peels the weight strings k, k-2, .., -k off the multiset of weights.
/// Throws DecompositionError if the multiset is not a union of strings.
WeightDecomposition weight_decompose(std::vector<int> weights);
/// Weights from the spectrum of rho(H); eigenvalues must be within 1e-6 of
/// integers (DecompositionError otherwise).
WeightDecomposition weight_decompose(const CMatrix& rho_h);

/// diag(k, k-2, .., -k): H acting on S^k.
CMatrix sk_weight_matrix(int k);
/// Induced derivation action of A on S^2(C^n), basis e_i e_j (i <= j).
CMatrix induced_sym2(const CMatrix& a);
/// A x 1 + 1 x B on the tensor product.
CMatrix tensor_action(const CMatrix& a, const CMatrix& b);
/// Block-diagonal direct sum.
CMatrix direct_sum(const CMatrix& a, const CMatrix& b);

/// Coroots of the long and short roots of sp(2) in the (1,3),(2,4) form.
CMatrix long_root_h();
CMatrix short_root_h();

/// Spectral projector onto one Casimir eigenspace.
struct IsotypicComponent {
  int k = 0;             ///< S^k label; Casimir eigenvalue k(k+2)
  double casimir = 0.0;
  int dim = 0;
  Matrix projector;
};

/// Casimir projectors for a real sp(1)-module given by the action matrices
/// of three elements with [a1,a2] = c a3 and cyclic (common c != 0). The
/// triple is rescaled so that the Casimir of the standard module is 3.
/// Throws InputError if the triple does not satisfy the sp(1) relations.
std::vector<IsotypicComponent> isotypic_projectors(const std::array<Matrix, 3>& generators,
                                                   double rel_gap = 1e-6);

}  // namespace grasslab
