#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "herglotz/numerics/jet.hpp"
#include "herglotz/numerics/matrix.hpp"

namespace herglotz {

/// Structure constants C^c_ab of a Lie algebra in a chosen basis {E_a},
/// with an optional faithful matrix representation of the basis.
///
/// Construction validates antisymmetry, the Jacobi identity and, when basis
/// matrices are present, [E_a, E_b] = C^c_ab E_c (all to 1e-12); a violation
/// throws InvalidParameter.
class LieAlgebraSpec {
 public:
  LieAlgebraSpec() = default;
  /// `constants[(c * dim + a) * dim + b]` holds C^c_ab.
  LieAlgebraSpec(std::size_t dim, std::vector<double> constants,
                 std::vector<DenseMatrix> basis = {});

  /// Builds the spec by projecting matrix commutators onto the basis.
  static LieAlgebraSpec from_matrices(std::vector<DenseMatrix> basis);

  [[nodiscard]] std::size_t dim() const { return dim_; }
  [[nodiscard]] double c(std::size_t upper, std::size_t a, std::size_t b) const {
    return constants_[(upper * dim_ + a) * dim_ + b];
  }
  [[nodiscard]] bool has_matrices() const { return !basis_.empty(); }
  [[nodiscard]] const std::vector<DenseMatrix>& basis() const { return basis_; }

  /// Matrix of ad_xi in the basis: (ad_xi)^c_b = C^c_ab xi^a.
  [[nodiscard]] DenseMatrix ad(std::span<const double> xi) const;

  /// xi^a E_a as a matrix.
  [[nodiscard]] DenseMatrix to_matrix(std::span<const double> xi) const;

  /// Coefficients of a matrix in the basis (least squares).  Throws
  /// BasisNotClosed when the residual exceeds `tolerance`.
  [[nodiscard]] std::vector<double> coefficients(const DenseMatrix& m,
                                                 double tolerance = 1e-9) const;

 private:
  std::size_t dim_ = 0;
  std::vector<double> constants_;
  std::vector<DenseMatrix> basis_;
  DenseMatrix gram_;  // <E_a, E_b> (Frobenius)
};

/// ([xi, eta])^c = C^c_ab xi^a eta^b.
std::vector<double> bracket(const LieAlgebraSpec& spec,
                            std::span<const double> xi,
                            std::span<const double> eta);

/// A matrix Lie group with a single chart around the identity.  Chart
/// coordinates of the identity are all zero.
struct MatrixGroup {
  LieAlgebraSpec algebra;
  /// coords -> matrix, differentiable (jets) for frame computations.
  std::function<JetMatrix(std::span<const Jet>)> to_matrix;
  /// matrix -> coords; throws ChartOutOfRange outside the chart domain.
  std::function<std::vector<double>(const DenseMatrix&)> from_matrix;
};

struct GroupElement {
  std::vector<double> coords;
  DenseMatrix matrix;
};

/// A(g) with g given by chart coordinates; column a holds Ad_g E_a.
using AdjointMap = std::function<JetMatrix(std::span<const Jet>)>;

GroupElement group_element(const MatrixGroup& group,
                           std::span<const double> coords);
GroupElement group_identity(const MatrixGroup& group);

/// g E_a g^-1 = A^b_a E_b, coefficients recovered against the basis.
DenseMatrix adjoint_from_matrices(const LieAlgebraSpec& spec,
                                  const GroupElement& g);

/// Jet-capable conjugation adjoint, usable as a bundle AdjointMap when a
/// scenario has no closed form.
AdjointMap conjugation_adjoint(const MatrixGroup& group);

GroupElement group_exp(const MatrixGroup& group, std::span<const double> xi);
GroupElement left_multiply(const MatrixGroup& group, const GroupElement& g1,
                           const GroupElement& g2);
GroupElement group_inverse(const MatrixGroup& group, const GroupElement& g);

}  // namespace herglotz
