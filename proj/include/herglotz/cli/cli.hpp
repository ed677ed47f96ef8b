#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "herglotz/numerics/trajectory.hpp"
#include "herglotz/scenarios/scenarios.hpp"

namespace herglotz {

enum class Route { kFull, kReduced, kReconstruct, kCompare };
enum class OutputFormat { kCsv, kJson };

Route parse_route(const std::string& s);
std::string to_string(Route r);
OutputFormat parse_format(const std::string& s);
std::string to_string(OutputFormat f);

struct RunConfig {
  std::string scenario;
  ParameterMap parameters;
  std::optional<NaturalState> initial_state;
  double t_end = 1.0;
  double dt = 1e-3;
  Route route = Route::kFull;
  std::string output_path;  // empty: standard output
  OutputFormat format = OutputFormat::kCsv;
  std::uint64_t seed = 42;
};

/// Throws InvalidParameter on dt <= 0, t_end <= 0 or an unknown scenario.
void validate(const RunConfig& config);

/// Reads a JSON object whose keys mirror the RunConfig fields; keys absent
/// from the object leave `base` untouched.
RunConfig merge_json_config(const std::string& json_text, RunConfig base = {});

/// Result of one simulate run: a single table plus, for `compare`, the
/// sup-norm of the deviation column.
struct SimulationOutput {
  Trajectory table;
  std::optional<double> max_deviation;
};

SimulationOutput run_simulation(const RunConfig& config);
SimulationOutput run_simulation(const Scenario& scenario, const RunConfig& config);

/// Header `t,<states>,<diagnostics>`, 17 significant digits.
void write_csv(const Trajectory& tr, std::ostream& out);
/// {"schema": 1, "columns": [...], "rows": [[...]], ...}
void write_json(const SimulationOutput& result, const RunConfig& config,
                std::ostream& out);

struct CheckResult {
  std::string name;
  double max_residual = 0.0;
  double tolerance = 0.0;
  bool passed = false;
  std::string note;  // set when the check threw
};

struct InvariantReport {
  std::string scenario;
  std::uint64_t seed = 0;
  std::vector<CheckResult> checks;
  [[nodiscard]] bool passed() const;
};

/// Invariant suite at `samples` seed-derived random states.
InvariantReport run_check(const Scenario& scenario, std::uint64_t seed,
                          int samples = 20);

void print_report(const InvariantReport& report, std::ostream& out);
void write_report_json(const InvariantReport& report, std::ostream& out);

/// Full command-line entry point; returns the process exit status
/// (0 ok, 1 configuration error, 2 numerical failure or failed check).
int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace herglotz
