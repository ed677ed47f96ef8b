#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace herglotz {

/// Truncated forward-mode jet: value, gradient and (optionally) the dense
/// symmetric Hessian with respect to a fixed set of seed variables.
///
/// A jet without seeds is a constant and mixes freely with seeded jets.
/// First-order jets (no Hessian storage) are used where only Jacobians are
/// needed; mixing a first-order and a second-order jet drops nothing that
/// the first-order operand carried, the missing curvature is taken as zero.
class Jet {
 public:
  Jet() = default;
  Jet(double value) : value_(value) {}  // NOLINT: constants convert implicitly

  /// Seed variable `index` out of `seeds`.
  static Jet variable(double value, std::size_t index, std::size_t seeds,
                      bool second_order = true);

  [[nodiscard]] double value() const { return value_; }
  [[nodiscard]] std::size_t seeds() const { return grad_.size(); }
  [[nodiscard]] bool second_order() const { return !hess_.empty(); }

  [[nodiscard]] double d(std::size_t i) const {
    return grad_.empty() ? 0.0 : grad_[i];
  }
  [[nodiscard]] double d2(std::size_t i, std::size_t j) const {
    return hess_.empty() ? 0.0 : hess_[i * grad_.size() + j];
  }
  [[nodiscard]] std::span<const double> gradient() const { return grad_; }

  Jet& operator+=(const Jet& o);
  Jet& operator-=(const Jet& o);
  Jet& operator*=(const Jet& o);
  Jet& operator/=(const Jet& o);

  friend Jet operator-(const Jet& a);
  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator*(const Jet& a, const Jet& b);
  friend Jet operator/(const Jet& a, const Jet& b);

  /// Unary chain rule: f(a) with f' and f'' evaluated at a.value().
  friend Jet chain(const Jet& a, double f, double df, double d2f);

 private:
  double value_ = 0.0;
  std::vector<double> grad_;
  std::vector<double> hess_;
};

Jet exp(const Jet& a);
Jet log(const Jet& a);
Jet sin(const Jet& a);
Jet cos(const Jet& a);
Jet sqrt(const Jet& a);
Jet pow(const Jet& a, double p);

inline double value_of(double x) { return x; }
inline double value_of(const Jet& x) { return x.value(); }

using JetVector = std::vector<Jet>;
using JetFunction = std::function<Jet(std::span<const Jet>)>;

/// Seeds every coordinate of `point` as an independent variable.
JetVector seed(std::span<const double> point, bool second_order = true);

}  // namespace herglotz
