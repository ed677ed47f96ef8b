#include "herglotz/numerics/expm.hpp"

#include <cmath>

namespace herglotz {

namespace {

double norm1(const DenseMatrix& m) {
  double best = 0.0;
  for (std::size_t c = 0; c < m.cols(); ++c) {
    double sum = 0.0;
    for (std::size_t r = 0; r < m.rows(); ++r) sum += std::abs(m(r, c));
    best = std::max(best, sum);
  }
  return best;
}

}  // namespace

DenseMatrix mat_exp(const DenseMatrix& x) {
  if (!x.square()) throw DimensionMismatch("mat_exp of " + x.shape());
  constexpr int kDegree = 10;

  int squarings = 0;
  const double norm = norm1(x);
  if (norm > 0.25) squarings = static_cast<int>(std::ceil(std::log2(norm / 0.25)));
  const DenseMatrix a = x * std::ldexp(1.0, -squarings);

  // Horner: I + a(I + a/2(I + a/3(...)))
  const std::size_t n = x.rows();
  DenseMatrix result = DenseMatrix::identity(n);
  for (int k = kDegree; k >= 1; --k) {
    result = DenseMatrix::identity(n) + (a * result) * (1.0 / k);
  }
  for (int i = 0; i < squarings; ++i) result = result * result;
  return result;
}

}  // namespace herglotz
