#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace herglotz {

using State = std::vector<double>;

struct OdeProblem {
  std::size_t dimension = 0;
  std::function<State(double, std::span<const double>)> rhs;
};

struct OdeSample {
  double t = 0.0;
  State y;
};

/// Classical fixed-step RK4 from t0 to t1.  The last step is shortened so
/// the final sample lands exactly on t1.  Sample k sits at t0 + k*h.
///
/// Throws NonFiniteState when the state stops being finite; any
/// NumericalError raised by the right-hand side is rethrown with the time
/// of the failing step attached.
std::vector<OdeSample> rk4_integrate(const OdeProblem& problem,
                                     std::span<const double> y0, double t0,
                                     double t1, double h);

/// One classical RK4 step of size dt from (t, y).
State rk4_step(const OdeProblem& problem, double t, std::span<const double> y,
               double dt);

/// Number of RK4 steps rk4_integrate takes on [t0, t1] with step h.
std::size_t rk4_step_count(double t0, double t1, double h);

}  // namespace herglotz
