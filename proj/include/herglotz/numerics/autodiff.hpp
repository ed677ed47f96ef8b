#pragma once

#include <functional>
#include <span>
#include <vector>

#include "herglotz/numerics/jet.hpp"
#include "herglotz/numerics/matrix.hpp"

namespace herglotz {

struct Jet2Result {
  double value = 0.0;
  std::vector<double> gradient;
  DenseMatrix hessian;
};

/// Value, gradient and Hessian of a scalar function by forward propagation
/// of second-order jets (no finite differences).
Jet2Result eval_jet2(const JetFunction& f, std::span<const double> point);

/// Unpacks a seeded jet into a Jet2Result.
Jet2Result unpack(const Jet& j);

/// Jacobian d f_r / d x_c of a vector function using first-order jets.
DenseMatrix jacobian(
    const std::function<JetVector(std::span<const Jet>)>& f,
    std::span<const double> point);

/// Partial derivatives of every entry of a jet matrix with respect to seed
/// `k` (entries must be first- or second-order jets on the same seeds).
DenseMatrix partial(const JetMatrix& m, std::size_t k);

}  // namespace herglotz
