#include "herglotz/numerics/ode.hpp"

#include <cmath>
#include <sstream>
#include <string>

#include "herglotz/errors.hpp"

namespace herglotz {

namespace {

State evaluate(const OdeProblem& p, double t, std::span<const double> y) {
  State k = p.rhs(t, y);
  if (k.size() != p.dimension) {
    throw DimensionMismatch("rhs returned " + std::to_string(k.size()) +
                            " components, expected " +
                            std::to_string(p.dimension));
  }
  return k;
}

void require_finite(double t, std::span<const double> y) {
  for (double v : y) {
    if (!std::isfinite(v)) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "non-finite state at t=" << t << ": (";
      for (std::size_t i = 0; i < y.size(); ++i) msg << (i ? ", " : "") << y[i];
      msg << ")";
      NonFiniteState err(msg.str());
      err.set_time(t);
      err.set_state({y.begin(), y.end()});
      throw err;
    }
  }
}

}  // namespace

State rk4_step(const OdeProblem& problem, double t, std::span<const double> y,
               double dt) {
  const std::size_t n = problem.dimension;
  State tmp(n);
  const State k1 = evaluate(problem, t, y);
  for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + 0.5 * dt * k1[i];
  const State k2 = evaluate(problem, t + 0.5 * dt, tmp);
  for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + 0.5 * dt * k2[i];
  const State k3 = evaluate(problem, t + 0.5 * dt, tmp);
  for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + dt * k3[i];
  const State k4 = evaluate(problem, t + dt, tmp);
  State next(n);
  for (std::size_t i = 0; i < n; ++i) {
    next[i] = y[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  }
  return next;
}

std::size_t rk4_step_count(double t0, double t1, double h) {
  const double steps = (t1 - t0) / h;
  auto n = static_cast<std::size_t>(std::ceil(steps - 1e-9));
  return n == 0 ? 1 : n;
}

std::vector<OdeSample> rk4_integrate(const OdeProblem& problem,
                                     std::span<const double> y0, double t0,
                                     double t1, double h) {
  if (!(h > 0.0)) throw InvalidParameter("rk4 step must be positive");
  if (!(t1 > t0)) throw InvalidParameter("rk4 requires t1 > t0");
  if (y0.size() != problem.dimension) {
    throw DimensionMismatch("initial state has " + std::to_string(y0.size()) +
                            " components, expected " +
                            std::to_string(problem.dimension));
  }

  const std::size_t steps = rk4_step_count(t0, t1, h);
  std::vector<OdeSample> out;
  out.reserve(steps + 1);
  out.push_back({t0, State(y0.begin(), y0.end())});
  require_finite(t0, out.back().y);

  for (std::size_t k = 0; k < steps; ++k) {
    const double t = t0 + static_cast<double>(k) * h;
    const double t_next = (k + 1 == steps) ? t1 : t0 + static_cast<double>(k + 1) * h;
    const double dt = t_next - t;
    const State& y = out.back().y;
    try {
      State next = rk4_step(problem, t, y, dt);
      require_finite(t_next, next);
      out.push_back({t_next, std::move(next)});
    } catch (NumericalError& e) {
      e.set_time(t);
      e.set_state(y);
      throw;
    }
  }
  return out;
}

}  // namespace herglotz
