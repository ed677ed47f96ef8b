#include "herglotz/numerics/trajectory.hpp"

#include <algorithm>

#include "herglotz/errors.hpp"

namespace herglotz {

namespace {

std::size_t find_name(const std::vector<std::string>& names,
                      const std::string& name) {
  auto it = std::find(names.begin(), names.end(), name);
  if (it == names.end()) throw InvalidParameter("no trajectory column '" + name + "'");
  return static_cast<std::size_t>(it - names.begin());
}

}  // namespace

std::size_t Trajectory::state_index(const std::string& name) const {
  return find_name(state_names, name);
}

std::size_t Trajectory::diagnostic_index(const std::string& name) const {
  return find_name(diagnostic_names, name);
}

std::vector<double> Trajectory::column(const std::string& name) const {
  const std::size_t k = state_index(name);
  std::vector<double> out;
  out.reserve(states.size());
  for (const auto& s : states) out.push_back(s[k]);
  return out;
}

std::vector<double> Trajectory::diagnostic(const std::string& name) const {
  const std::size_t k = diagnostic_index(name);
  std::vector<double> out;
  out.reserve(diagnostics.size());
  for (const auto& s : diagnostics) out.push_back(s[k]);
  return out;
}

std::vector<double> interpolate(const std::vector<double>& times,
                                const std::vector<std::vector<double>>& samples,
                                double t) {
  const std::size_t n = times.size();
  if (n == 0 || samples.size() != n) {
    throw DimensionMismatch("interpolation needs one sample per time");
  }
  if (n == 1) return samples[0];

  // interval [times[k], times[k+1]] containing t
  auto it = std::upper_bound(times.begin(), times.end(), t);
  std::size_t k = it == times.begin() ? 0 : static_cast<std::size_t>(it - times.begin()) - 1;
  k = std::min(k, n - 2);
  if (t == times[k]) return samples[k];
  if (t == times[k + 1]) return samples[k + 1];

  const std::size_t width = std::min<std::size_t>(4, n);
  std::size_t lo = k >= 1 ? k - 1 : 0;
  if (lo + width > n) lo = n - width;

  std::vector<double> out(samples[0].size(), 0.0);
  for (std::size_t j = lo; j < lo + width; ++j) {
    double w = 1.0;
    for (std::size_t l = lo; l < lo + width; ++l) {
      if (l != j) w *= (t - times[l]) / (times[j] - times[l]);
    }
    for (std::size_t c = 0; c < out.size(); ++c) out[c] += w * samples[j][c];
  }
  return out;
}

std::vector<std::string> indexed_names(const std::string& prefix,
                                       std::size_t count) {
  std::vector<std::string> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(prefix + std::to_string(i));
  return out;
}

}  // namespace herglotz
