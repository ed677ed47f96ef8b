#include "herglotz/numerics/jet.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "herglotz/errors.hpp"

namespace herglotz {

namespace {

void check_compatible(std::size_t a, std::size_t b) {
  if (a != 0 && b != 0 && a != b) {
    throw DimensionMismatch("jets seeded with different variable counts (" +
                            std::to_string(a) + " vs " + std::to_string(b) + ")");
  }
}

}  // namespace

Jet Jet::variable(double value, std::size_t index, std::size_t seeds,
                  bool second_order) {
  Jet j(value);
  j.grad_.assign(seeds, 0.0);
  j.grad_.at(index) = 1.0;
  if (second_order) j.hess_.assign(seeds * seeds, 0.0);
  return j;
}

Jet& Jet::operator+=(const Jet& o) {
  check_compatible(grad_.size(), o.grad_.size());
  value_ += o.value_;
  if (o.grad_.empty()) return *this;
  if (grad_.empty()) {
    grad_ = o.grad_;
    hess_ = o.hess_;
    return *this;
  }
  for (std::size_t i = 0; i < grad_.size(); ++i) grad_[i] += o.grad_[i];
  if (!o.hess_.empty()) {
    if (hess_.empty()) hess_.assign(o.hess_.size(), 0.0);
    for (std::size_t i = 0; i < hess_.size(); ++i) hess_[i] += o.hess_[i];
  }
  return *this;
}

Jet& Jet::operator-=(const Jet& o) { return *this += -o; }

Jet& Jet::operator*=(const Jet& o) { return *this = *this * o; }

Jet& Jet::operator/=(const Jet& o) { return *this = *this / o; }

Jet operator-(const Jet& a) {
  Jet c = a;
  c.value_ = -c.value_;
  for (double& g : c.grad_) g = -g;
  for (double& h : c.hess_) h = -h;
  return c;
}

Jet operator*(const Jet& a, const Jet& b) {
  check_compatible(a.grad_.size(), b.grad_.size());
  Jet c(a.value_ * b.value_);
  const std::size_t n = std::max(a.grad_.size(), b.grad_.size());
  if (n == 0) return c;
  if (b.grad_.empty()) {
    c.grad_ = a.grad_;
    c.hess_ = a.hess_;
    for (double& g : c.grad_) g *= b.value_;
    for (double& h : c.hess_) h *= b.value_;
    return c;
  }
  if (a.grad_.empty()) return b * a;

  c.grad_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    c.grad_[i] = a.value_ * b.grad_[i] + b.value_ * a.grad_[i];
  }
  if (a.second_order() || b.second_order()) {
    c.hess_.resize(n * n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        const std::size_t k = i * n + j;
        double h = a.grad_[i] * b.grad_[j] + b.grad_[i] * a.grad_[j];
        if (!a.hess_.empty()) h += b.value_ * a.hess_[k];
        if (!b.hess_.empty()) h += a.value_ * b.hess_[k];
        c.hess_[k] = h;
      }
    }
  }
  return c;
}

Jet operator/(const Jet& a, const Jet& b) {
  const double v = b.value_;
  if (v == 0.0) throw DomainError("jet division by zero");
  if (b.grad_.empty()) return a * Jet(1.0 / v);
  return a * chain(b, 1.0 / v, -1.0 / (v * v), 2.0 / (v * v * v));
}

Jet chain(const Jet& a, double f, double df, double d2f) {
  Jet c(f);
  const std::size_t n = a.grad_.size();
  if (n == 0) return c;
  c.grad_.resize(n);
  for (std::size_t i = 0; i < n; ++i) c.grad_[i] = df * a.grad_[i];
  if (!a.hess_.empty()) {
    c.hess_.resize(n * n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        c.hess_[i * n + j] =
            df * a.hess_[i * n + j] + d2f * a.grad_[i] * a.grad_[j];
      }
    }
  }
  return c;
}

Jet exp(const Jet& a) {
  const double e = std::exp(a.value());
  return chain(a, e, e, e);
}

Jet log(const Jet& a) {
  const double v = a.value();
  if (!(v > 0.0)) {
    throw DomainError("log of non-positive value " + std::to_string(v));
  }
  return chain(a, std::log(v), 1.0 / v, -1.0 / (v * v));
}

Jet sin(const Jet& a) {
  const double s = std::sin(a.value());
  const double c = std::cos(a.value());
  return chain(a, s, c, -s);
}

Jet cos(const Jet& a) {
  const double s = std::sin(a.value());
  const double c = std::cos(a.value());
  return chain(a, c, -s, -c);
}

Jet sqrt(const Jet& a) {
  const double v = a.value();
  if (v < 0.0 || (v == 0.0 && a.seeds() > 0)) {
    throw DomainError("sqrt outside its differentiable domain at " +
                      std::to_string(v));
  }
  const double r = std::sqrt(v);
  if (a.seeds() == 0) return Jet(r);
  return chain(a, r, 0.5 / r, -0.25 / (r * v));
}

Jet pow(const Jet& a, double p) {
  const double v = a.value();
  if (v <= 0.0 && p != std::floor(p)) {
    throw DomainError("non-integer power of non-positive value " +
                      std::to_string(v));
  }
  if (p == 0.0) return Jet(1.0);
  if (p == 1.0) return a;
  return chain(a, std::pow(v, p), p * std::pow(v, p - 1.0),
               p * (p - 1.0) * std::pow(v, p - 2.0));
}

JetVector seed(std::span<const double> point, bool second_order) {
  JetVector out;
  out.reserve(point.size());
  for (std::size_t i = 0; i < point.size(); ++i) {
    out.push_back(Jet::variable(point[i], i, point.size(), second_order));
  }
  return out;
}

}  // namespace herglotz
