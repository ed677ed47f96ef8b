#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace herglotz {

/// Time-stamped states plus per-sample diagnostics.  Column names travel
/// with the data so writers need no scenario knowledge.
struct Trajectory {
  std::vector<std::string> state_names;
  std::vector<std::string> diagnostic_names;
  std::vector<double> times;
  std::vector<std::vector<double>> states;
  std::vector<std::vector<double>> diagnostics;

  [[nodiscard]] std::size_t size() const { return times.size(); }
  [[nodiscard]] std::size_t state_index(const std::string& name) const;
  [[nodiscard]] std::size_t diagnostic_index(const std::string& name) const;
  /// State component `name` over all samples.
  [[nodiscard]] std::vector<double> column(const std::string& name) const;
  [[nodiscard]] std::vector<double> diagnostic(const std::string& name) const;
};

/// Four-point Lagrange interpolation of sampled data at time t (clamped
/// stencil at the ends, exact at knots).  `samples[k]` belongs to times[k].
std::vector<double> interpolate(const std::vector<double>& times,
                                const std::vector<std::vector<double>>& samples,
                                double t);

/// Names like q0, q1, ... for `count` components.
std::vector<std::string> indexed_names(const std::string& prefix,
                                       std::size_t count);

}  // namespace herglotz
