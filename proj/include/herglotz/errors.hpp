#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace herglotz {

/// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Failures of the numerics along a computation (singular systems, blow-up,
/// leaving a chart).  The integrators attach the simulation time at which
/// the failure happened and the state there.
class NumericalError : public Error {
 public:
  using Error::Error;

  void set_time(double t) {
    if (!time_) time_ = t;
  }
  [[nodiscard]] std::optional<double> time() const { return time_; }

  /// Integrator state (flattened) at the failing step, innermost wins.
  void set_state(std::vector<double> y) {
    if (state_.empty()) state_ = std::move(y);
  }
  [[nodiscard]] const std::vector<double>& state() const { return state_; }

 private:
  std::optional<double> time_;
  std::vector<double> state_;
};

class SingularMatrix : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// W = d^2L/du^2 is singular at the evaluated state.
class NonRegularLagrangianAtState : public SingularMatrix {
 public:
  using SingularMatrix::SingularMatrix;
};

/// The vertical Hessian block g_ab (or the reduced (v,w) Hessian) is singular.
class NonGRegularAtState : public SingularMatrix {
 public:
  using SingularMatrix::SingularMatrix;
};

class NonFiniteState : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class DomainError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class ChartOutOfRange : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class BasisNotClosed : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// A scenario or algebra was constructed with inconsistent parameters.
class InvalidParameter : public Error {
 public:
  using Error::Error;
};

/// reduce_lagrangian was handed a Lagrangian that is not G-invariant.
class NonInvariantLagrangian : public Error {
 public:
  using Error::Error;
};

}  // namespace herglotz
