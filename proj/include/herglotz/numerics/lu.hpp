#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "herglotz/errors.hpp"
#include "herglotz/numerics/matrix.hpp"

namespace herglotz {

/// Relative pivot threshold: a pivot below kPivotTolerance * max|entry|
/// marks the matrix as singular.
inline constexpr double kPivotTolerance = 1e-12;

/// LU factorization with partial pivoting, PA = LU stored in place.
template <typename T>
class LuDecomposition {
 public:
  explicit LuDecomposition(Matrix<T> a) : lu_(std::move(a)) {
    if (!lu_.square()) {
      throw DimensionMismatch("LU of non-square matrix " + lu_.shape());
    }
    const std::size_t n = lu_.rows();
    perm_.resize(n);
    for (std::size_t i = 0; i < n; ++i) perm_[i] = i;

    double scale = 0.0;
    for (const T& x : lu_.data()) scale = std::max(scale, std::abs(value_of(x)));
    const double tol = kPivotTolerance * scale;

    for (std::size_t k = 0; k < n; ++k) {
      std::size_t p = k;
      double best = std::abs(value_of(lu_(k, k)));
      for (std::size_t r = k + 1; r < n; ++r) {
        const double v = std::abs(value_of(lu_(r, k)));
        if (v > best) {
          best = v;
          p = r;
        }
      }
      if (!(best > tol)) {
        throw SingularMatrix("singular matrix: pivot " + std::to_string(best) +
                             " at column " + std::to_string(k) +
                             " below tolerance " + std::to_string(tol));
      }
      if (p != k) {
        for (std::size_t c = 0; c < n; ++c) std::swap(lu_(k, c), lu_(p, c));
        std::swap(perm_[k], perm_[p]);
        sign_ = -sign_;
      }
      const T pivot = lu_(k, k);
      for (std::size_t r = k + 1; r < n; ++r) {
        lu_(r, k) = lu_(r, k) / pivot;
        const T f = lu_(r, k);
        for (std::size_t c = k + 1; c < n; ++c) lu_(r, c) -= f * lu_(k, c);
      }
    }
  }

  [[nodiscard]] std::size_t size() const { return lu_.rows(); }

  [[nodiscard]] std::vector<T> solve(std::span<const T> b) const {
    const std::size_t n = lu_.rows();
    if (b.size() != n) {
      throw DimensionMismatch("rhs length " + std::to_string(b.size()) +
                              " for system of size " + std::to_string(n));
    }
    std::vector<T> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = b[perm_[i]];
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < i; ++j) x[i] -= lu_(i, j) * x[j];
    for (std::size_t ii = n; ii-- > 0;) {
      for (std::size_t j = ii + 1; j < n; ++j) x[ii] -= lu_(ii, j) * x[j];
      x[ii] = x[ii] / lu_(ii, ii);
    }
    return x;
  }

  [[nodiscard]] Matrix<T> solve(const Matrix<T>& b) const {
    Matrix<T> x(b.rows(), b.cols());
    for (std::size_t c = 0; c < b.cols(); ++c) {
      const auto col = b.column(c);
      const auto sol = solve(std::span<const T>(col));
      x.set_column(c, sol);
    }
    return x;
  }

  [[nodiscard]] Matrix<T> inverse() const {
    return solve(Matrix<T>::identity(size()));
  }

  [[nodiscard]] T determinant() const {
    T det(static_cast<double>(sign_));
    for (std::size_t i = 0; i < size(); ++i) det *= lu_(i, i);
    return det;
  }

 private:
  Matrix<T> lu_;
  std::vector<std::size_t> perm_;
  int sign_ = 1;
};

/// Solves A x = b.  Throws SingularMatrix when a pivot falls below
/// 1e-12 * max|A_ij|.
template <typename T>
std::vector<T> lu_solve(const Matrix<T>& a, std::span<const T> b) {
  return LuDecomposition<T>(a).solve(b);
}

template <typename T>
std::vector<T> lu_solve(const Matrix<T>& a, const std::vector<T>& b) {
  return LuDecomposition<T>(a).solve(std::span<const T>(b));
}

template <typename T>
Matrix<T> inverse(const Matrix<T>& a) {
  return LuDecomposition<T>(a).inverse();
}

/// Determinant; returns exactly zero for a singular matrix.
inline double determinant(const DenseMatrix& a) {
  try {
    return LuDecomposition<double>(a).determinant();
  } catch (const SingularMatrix&) {
    return 0.0;
  }
}

}  // namespace herglotz
