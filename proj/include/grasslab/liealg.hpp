#pragma once

#include <array>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "grasslab/common.hpp"

namespace grasslab {

/// Normalization of the invariant inner product on a matrix Lie algebra:
/// <X,Y> = -scale * Re tr(XY) in the defining representation.
struct InnerProductNormalization {
  double scale = 1.0;
};

/// Finite-dimensional real Lie algebra given by structure constants
/// c[i][j][k] ([X_i, X_j] = sum_k c[i][j][k] X_k) and a Gram matrix.
/// Elements are coefficient vectors in the basis X_0..X_{dim-1}.
///
/// Values are immutable after construction.
class LieAlgebra {
 public:
  /// structure[k] is the dim x dim matrix (i,j) -> c[i][j][k].
  LieAlgebra(std::string name, std::vector<Matrix> structure, Matrix gram,
             std::optional<std::vector<CMatrix>> matrix_rep = std::nullopt);

  /// Builds the algebra spanned by the given matrices; brackets are matrix
  /// commutators and the Gram matrix comes from the normalization.
  /// Throws InputError if the span is not closed under commutators.
  static LieAlgebra from_matrices(std::string name, std::vector<CMatrix> basis,
                                  InnerProductNormalization norm = {});

  const std::string& name() const { return name_; }
  int dim() const { return static_cast<int>(gram_.rows()); }
  double structure(int i, int j, int k) const { return structure_[k](i, j); }
  const Matrix& gram() const { return gram_; }
  bool has_matrix_rep() const { return matrix_rep_.has_value(); }
  const std::vector<CMatrix>& matrix_rep() const;

  Vector bracket(const Vector& x, const Vector& y) const;
  double inner(const Vector& x, const Vector& y) const;
  double norm(const Vector& x) const;

  /// Matrix of ad(X) acting on coefficient vectors.
  Matrix ad(const Vector& x) const;
  /// tr(ad X_i ad X_j).
  Matrix killing_form() const;
  Vector basis_vector(int i) const;

  /// Image of an element in the matrix representation.
  CMatrix to_matrix(const Vector& x) const;
  /// Coefficients of a matrix lying in the span of the representation;
  /// throws InputError if the residual exceeds tol.
  Vector from_matrix(const CMatrix& m, double tol = 1e-9) const;

  /// Same algebra in a basis orthonormal for the Gram matrix. The returned
  /// change of basis B maps new coefficients to old ones (old = B * new).
  std::pair<LieAlgebra, Matrix> orthonormalized() const;

  double antisymmetry_residual() const;
  double jacobi_residual() const;
  double ad_invariance_residual() const;
  /// Max deviation between matrix commutators and the stored structure;
  /// zero when there is no matrix representation.
  double representation_residual() const;

 private:
  void check_dim(const Vector& x) const;

  std::string name_;
  std::vector<Matrix> structure_;
  Matrix gram_;
  std::optional<std::vector<CMatrix>> matrix_rep_;
};

/// Element of the group acting on an algebra through Ad. Carries the
/// orthogonal Ad-image and, when available, the group matrix itself.
class GroupElement {
 public:
  static GroupElement identity(const LieAlgebra& alg);
  /// exp(t Z) computed in the matrix representation.
  static GroupElement exp(const LieAlgebra& alg, const Vector& z, double t = 1.0);
  /// Group matrix g; Ad(g) X = g X g^{-1}. Throws InputError if g is
  /// singular or does not normalize the algebra.
  static GroupElement from_matrix(const LieAlgebra& alg, const CMatrix& g);
  /// An abstract bracket automorphism; must preserve gram and brackets.
  static GroupElement from_adjoint(const LieAlgebra& alg, const Matrix& ad_image,
                                   double tol = 1e-10);

  const Matrix& adjoint() const { return ad_; }
  const std::optional<CMatrix>& matrix() const { return matrix_; }

  GroupElement operator*(const GroupElement& other) const;
  GroupElement inverse() const;

 private:
  GroupElement(Matrix ad, std::optional<CMatrix> m) : ad_(std::move(ad)), matrix_(std::move(m)) {}
  Matrix ad_;
  std::optional<CMatrix> matrix_;
};

Vector bracket(const LieAlgebra& alg, const Vector& x, const Vector& y);
double inner(const LieAlgebra& alg, const Vector& x, const Vector& y);
Vector adjoint_action(const GroupElement& g, const Vector& x);

/// so(4) = sp(1)_+ + sp(1)_- with ordered basis (e1,e2,e3,f1,f2,f3) given
/// by the 4x4 complex matrices with entries +-1/sqrt2, +-i/sqrt2. The Gram
/// matrix is the identity for <X,Y> = -Re tr(XY).
LieAlgebra make_so4();

namespace so4 {
inline constexpr int e1 = 0, e2 = 1, e3 = 2, f1 = 3, f2 = 4, f3 = 5;
/// The six basis matrices in the order above.
std::vector<CMatrix> basis_matrices();
}  // namespace so4

/// Quaternionic form pairing coordinates (1,3) and (2,4).
CMatrix sp2_form();
/// Generator u of the U(1) whose orbit through the base point is the normal
/// geodesic (rotation in the (1,2) and (3,4) coordinate planes).
CMatrix sp2_geodesic_generator();

/// sp(2) = so(4) + m: anti-Hermitian X with X^T J + J X = 0. Basis order is
/// the six so(4) elements followed by an orthonormal basis of the
/// 4-dimensional complement m, whose first vector is u/|u|.
LieAlgebra make_sp2();

namespace sp2 {
inline constexpr int so4_dim = 6;
inline constexpr int m_begin = 6;
inline constexpr int m_dim = 4;
}  // namespace sp2

/// An sl(2,C) triple in gl(4,C) with [H,X]=2X, [H,Y]=-2Y, [X,Y]=H.
struct Sl2Triple {
  CMatrix x;
  CMatrix y;
  CMatrix h;
};

/// Principal sl(2) inside sp(2,C); H = diag(3,1,-3,-1) so that C^4 is
/// irreducible (weights 3,1,-1,-3).
Sl2Triple principal_sl2_embedding();
/// The same triple with the printed entries sqrt2 at (2,4),(4,2). For
/// these [X,Y] = diag(3,-1,-3,1) differs from H; kept for reference.
Sl2Triple principal_sl2_printed();

/// Max residual of the three sl(2) relations.
double sl2_relation_residual(const Sl2Triple& t);

/// Reads an algebra from the structure-constant table format:
///
///     dim N
///     i j k value        (0-indexed; [X_i,X_j] has coefficient value on X_k)
///     ...
///     gram
///     N rows of N numbers
///
/// Lines starting with '#' are ignored. Missing antisymmetric partners are
/// filled in. Throws InputError on malformed input or when the result
/// violates antisymmetry, Jacobi (1e-12) or ad-invariance (1e-10).
LieAlgebra read_structure_constants(std::istream& in, const std::string& name = "file");
LieAlgebra load_structure_constants(const std::string& path);
void write_structure_constants(std::ostream& out, const LieAlgebra& alg);

}  // namespace grasslab
