#include "herglotz/lie/lie.hpp"

#include <cmath>
#include <string>

#include "herglotz/errors.hpp"
#include "herglotz/numerics/expm.hpp"
#include "herglotz/numerics/lu.hpp"

namespace herglotz {

namespace {

constexpr double kAlgebraTolerance = 1e-12;

double frobenius(const DenseMatrix& a, const DenseMatrix& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.data().size(); ++i) s += a.data()[i] * b.data()[i];
  return s;
}

DenseMatrix commutator(const DenseMatrix& a, const DenseMatrix& b) {
  return a * b - b * a;
}

void require_dim(const LieAlgebraSpec& spec, std::size_t n, const char* what) {
  if (n != spec.dim()) {
    throw DimensionMismatch(std::string(what) + " has length " +
                            std::to_string(n) + ", algebra dimension is " +
                            std::to_string(spec.dim()));
  }
}

}  // namespace

LieAlgebraSpec::LieAlgebraSpec(std::size_t dim, std::vector<double> constants,
                               std::vector<DenseMatrix> basis)
    : dim_(dim), constants_(std::move(constants)), basis_(std::move(basis)) {
  if (constants_.size() != dim_ * dim_ * dim_) {
    throw InvalidParameter("structure constants need dim^3 entries");
  }
  const std::size_t d = dim_;
  for (std::size_t k = 0; k < d; ++k)
    for (std::size_t a = 0; a < d; ++a)
      for (std::size_t b = 0; b < d; ++b)
        if (std::abs(c(k, a, b) + c(k, b, a)) > kAlgebraTolerance) {
          throw InvalidParameter("structure constants are not antisymmetric");
        }

  // sum_e C^e_ab C^f_ec + C^e_bc C^f_ea + C^e_ca C^f_eb = 0
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t b = 0; b < d; ++b)
      for (std::size_t cc = 0; cc < d; ++cc)
        for (std::size_t f = 0; f < d; ++f) {
          double s = 0.0;
          for (std::size_t e = 0; e < d; ++e) {
            s += c(e, a, b) * c(f, e, cc) + c(e, b, cc) * c(f, e, a) +
                 c(e, cc, a) * c(f, e, b);
          }
          if (std::abs(s) > kAlgebraTolerance) {
            throw InvalidParameter("structure constants violate the Jacobi identity");
          }
        }

  if (basis_.empty()) return;
  if (basis_.size() != d) {
    throw InvalidParameter("basis matrix count differs from algebra dimension");
  }
  gram_ = DenseMatrix(d, d);
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t b = 0; b < d; ++b) gram_(a, b) = frobenius(basis_[a], basis_[b]);

  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t b = 0; b < d; ++b) {
      DenseMatrix diff = commutator(basis_[a], basis_[b]);
      for (std::size_t k = 0; k < d; ++k) diff -= basis_[k] * c(k, a, b);
      if (max_abs(diff) > kAlgebraTolerance) {
        throw InvalidParameter("basis matrices do not satisfy [E_" +
                               std::to_string(a + 1) + ", E_" +
                               std::to_string(b + 1) +
                               "] = C^c_ab E_c for the given constants");
      }
    }
}

LieAlgebraSpec LieAlgebraSpec::from_matrices(std::vector<DenseMatrix> basis) {
  const std::size_t d = basis.size();
  LieAlgebraSpec probe(d, std::vector<double>(d * d * d, 0.0));
  probe.basis_ = basis;
  probe.gram_ = DenseMatrix(d, d);
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t b = 0; b < d; ++b) probe.gram_(a, b) = frobenius(basis[a], basis[b]);

  std::vector<double> constants(d * d * d, 0.0);
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t b = 0; b < d; ++b) {
      const auto coeff = probe.coefficients(commutator(basis[a], basis[b]));
      for (std::size_t k = 0; k < d; ++k) {
        double v = coeff[k];
        if (std::abs(v - std::round(v)) < 1e-13) v = std::round(v);
        constants[(k * d + a) * d + b] = v;
      }
    }
  return LieAlgebraSpec(d, std::move(constants), std::move(basis));
}

DenseMatrix LieAlgebraSpec::ad(std::span<const double> xi) const {
  require_dim(*this, xi.size(), "ad argument");
  DenseMatrix m(dim_, dim_);
  for (std::size_t k = 0; k < dim_; ++k)
    for (std::size_t b = 0; b < dim_; ++b)
      for (std::size_t a = 0; a < dim_; ++a) m(k, b) += c(k, a, b) * xi[a];
  return m;
}

DenseMatrix LieAlgebraSpec::to_matrix(std::span<const double> xi) const {
  require_dim(*this, xi.size(), "algebra element");
  if (!has_matrices()) {
    throw InvalidParameter("algebra has no matrix representation");
  }
  DenseMatrix m(basis_[0].rows(), basis_[0].cols());
  for (std::size_t a = 0; a < dim_; ++a) m += basis_[a] * xi[a];
  return m;
}

std::vector<double> LieAlgebraSpec::coefficients(const DenseMatrix& m,
                                                 double tolerance) const {
  if (!has_matrices()) {
    throw InvalidParameter("algebra has no matrix representation");
  }
  std::vector<double> rhs(dim_);
  for (std::size_t a = 0; a < dim_; ++a) rhs[a] = frobenius(basis_[a], m);
  std::vector<double> coeff = dim_ == 0 ? std::vector<double>{} : lu_solve(gram_, rhs);
  DenseMatrix residual = m;
  for (std::size_t a = 0; a < dim_; ++a) residual -= basis_[a] * coeff[a];
  if (max_abs(residual) > tolerance * (1.0 + max_abs(m))) {
    throw BasisNotClosed("matrix leaves the span of the algebra basis (residual " +
                         std::to_string(max_abs(residual)) + ")");
  }
  return coeff;
}

std::vector<double> bracket(const LieAlgebraSpec& spec,
                            std::span<const double> xi,
                            std::span<const double> eta) {
  require_dim(spec, xi.size(), "first bracket argument");
  require_dim(spec, eta.size(), "second bracket argument");
  const std::size_t d = spec.dim();
  std::vector<double> out(d, 0.0);
  for (std::size_t k = 0; k < d; ++k)
    for (std::size_t a = 0; a < d; ++a)
      for (std::size_t b = 0; b < d; ++b) out[k] += spec.c(k, a, b) * xi[a] * eta[b];
  return out;
}

GroupElement group_element(const MatrixGroup& group,
                           std::span<const double> coords) {
  require_dim(group.algebra, coords.size(), "group coordinates");
  const JetVector jc = lift(coords);
  return {std::vector<double>(coords.begin(), coords.end()),
          values(group.to_matrix(jc))};
}

GroupElement group_identity(const MatrixGroup& group) {
  const std::vector<double> zero(group.algebra.dim(), 0.0);
  return group_element(group, zero);
}

DenseMatrix adjoint_from_matrices(const LieAlgebraSpec& spec,
                                  const GroupElement& g) {
  const std::size_t d = spec.dim();
  const DenseMatrix g_inv = inverse(g.matrix);
  DenseMatrix a(d, d);
  for (std::size_t col = 0; col < d; ++col) {
    const auto coeff = spec.coefficients(g.matrix * spec.basis()[col] * g_inv);
    for (std::size_t r = 0; r < d; ++r) a(r, col) = coeff[r];
  }
  return a;
}

AdjointMap conjugation_adjoint(const MatrixGroup& group) {
  const LieAlgebraSpec spec = group.algebra;
  auto to_matrix = group.to_matrix;
  return [spec, to_matrix](std::span<const Jet> coords) {
    const std::size_t d = spec.dim();
    const JetMatrix g = to_matrix(coords);
    const JetMatrix g_inv = inverse(g);
    // Project g E_a g^-1 on the basis through the (constant) Gram matrix.
    DenseMatrix gram(d, d);
    for (std::size_t a = 0; a < d; ++a)
      for (std::size_t b = 0; b < d; ++b) gram(a, b) = frobenius(spec.basis()[a], spec.basis()[b]);
    const DenseMatrix gram_inv = inverse(gram);
    JetMatrix out(d, d);
    for (std::size_t col = 0; col < d; ++col) {
      const JetMatrix conj = g * lift(spec.basis()[col]) * g_inv;
      JetVector rhs(d);
      for (std::size_t b = 0; b < d; ++b) {
        const DenseMatrix& e = spec.basis()[b];
        Jet s = 0.0;
        for (std::size_t i = 0; i < e.rows(); ++i)
          for (std::size_t j = 0; j < e.cols(); ++j)
            if (e(i, j) != 0.0) s += conj(i, j) * e(i, j);
        rhs[b] = s;
      }
      for (std::size_t r = 0; r < d; ++r) {
        Jet s = 0.0;
        for (std::size_t b = 0; b < d; ++b) s += rhs[b] * gram_inv(r, b);
        out(r, col) = s;
      }
    }
    return out;
  };
}

GroupElement group_exp(const MatrixGroup& group, std::span<const double> xi) {
  const DenseMatrix m = mat_exp(group.algebra.to_matrix(xi));
  return {group.from_matrix(m), m};
}

GroupElement left_multiply(const MatrixGroup& group, const GroupElement& g1,
                           const GroupElement& g2) {
  const DenseMatrix m = g1.matrix * g2.matrix;
  return {group.from_matrix(m), m};
}

GroupElement group_inverse(const MatrixGroup& group, const GroupElement& g) {
  const DenseMatrix m = inverse(g.matrix);
  return {group.from_matrix(m), m};
}

}  // namespace herglotz
