#include "herglotz/cli/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <future>
#include <iomanip>
#include <iostream>
#include <limits>
#include <sstream>

#include "herglotz/bundle/bundle.hpp"
#include "herglotz/contact/contact.hpp"
#include "herglotz/errors.hpp"
#include "herglotz/reconstruction/reconstruction.hpp"
#include "herglotz/reduction/reduction.hpp"

namespace herglotz {

using nlohmann::json;

namespace {

enum class LogLevel { kQuiet, kInfo, kDebug };

LogLevel log_level() {
  const char* env = std::getenv("HERGLOTZ_LOG");
  if (env == nullptr) return LogLevel::kInfo;
  const std::string v = env;
  if (v == "quiet") return LogLevel::kQuiet;
  if (v == "debug") return LogLevel::kDebug;
  return LogLevel::kInfo;
}

std::string format_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// Probe states for the invariance gate of reduce_lagrangian.
std::vector<NaturalState> probe_states(const Scenario& sc,
                                       const NaturalState& x0,
                                       std::uint64_t seed) {
  std::vector<NaturalState> probes{x0};
  std::mt19937_64 rng(seed);
  for (int k = 0; k < 4; ++k) probes.push_back(sc.sample_state(rng));
  return probes;
}

Trajectory full_route(const Scenario& sc, const NaturalState& x0,
                      const RunConfig& c) {
  return integrate_full(sc.lagrangian, x0, c.t_end, c.dt);
}

Trajectory reduced_route(const Scenario& sc, const NaturalState& x0,
                         const RunConfig& c) {
  auto probes = probe_states(sc, x0, c.seed);
  ReducedLagrangian l = reduce_lagrangian(sc.lagrangian, sc.chart, probes);
  return integrate_reduced(l, sc.chart, project(to_full(sc.chart, x0)),
                           c.t_end, c.dt);
}

Trajectory reconstruct_route(const Scenario& sc, const NaturalState& x0,
                             const RunConfig& c) {
  Trajectory red = reduced_route(sc, x0, c);
  ReconstructionResult rec =
      reconstruct(red, sc.chart, sc.lagrangian, to_full(sc.chart, x0));
  Trajectory out = std::move(rec.full_trajectory);
  // carry the reduced diagnostics along
  out.diagnostic_names = red.diagnostic_names;
  out.diagnostics = red.diagnostics;
  return out;
}

SimulationOutput compare_routes(const Scenario& sc, const NaturalState& x0,
                                const RunConfig& c) {
  auto full_job = std::async(std::launch::async, [&] {
    return to_quasi_trajectory(full_route(sc, x0, c), sc.chart);
  });
  auto rec_job = std::async(std::launch::async,
                            [&] { return reconstruct_route(sc, x0, c); });
  Trajectory full = full_job.get();
  Trajectory rec = rec_job.get();
  if (full.size() != rec.size() || full.state_names != rec.state_names) {
    throw DimensionMismatch("compare: routes produced different grids");
  }

  Trajectory t;
  t.state_names = full.state_names;
  for (const auto& n : rec.state_names) t.state_names.push_back("rec_" + n);
  t.diagnostic_names = full.diagnostic_names;
  t.diagnostic_names.push_back("sdot_residual");
  t.diagnostic_names.push_back("deviation");
  const std::size_t sdot = rec.diagnostic_index("sdot_residual");
  double sup = 0.0;
  for (std::size_t k = 0; k < full.size(); ++k) {
    std::vector<double> row = full.states[k];
    row.insert(row.end(), rec.states[k].begin(), rec.states[k].end());
    double dev = 0.0;
    for (std::size_t i = 0; i < full.states[k].size(); ++i) {
      dev = std::max(dev, std::abs(full.states[k][i] - rec.states[k][i]));
    }
    sup = std::max(sup, dev);
    std::vector<double> diag = full.diagnostics[k];
    diag.push_back(rec.diagnostics[k][sdot]);
    diag.push_back(dev);
    t.times.push_back(full.times[k]);
    t.states.push_back(std::move(row));
    t.diagnostics.push_back(std::move(diag));
  }
  return {std::move(t), sup};
}

double parse_double(const std::string& text, const std::string& what) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &pos);
  } catch (const std::exception&) {
    throw InvalidParameter("bad number for " + what + ": '" + text + "'");
  }
  if (pos != text.size()) {
    throw InvalidParameter("bad number for " + what + ": '" + text + "'");
  }
  return v;
}

FrameField combined_frame(const BundleChart& chart) {
  return [&chart](std::span<const Jet> q) {
    FrameSet<Jet> f = frames(chart, q);
    const std::size_t n = chart.dim();
    JetMatrix z(n, n);
    for (std::size_t r = 0; r < n; ++r) {
      for (std::size_t i = 0; i < chart.base_dim; ++i) z(r, i) = f.x(r, i);
      for (std::size_t a = 0; a < chart.fiber_dim; ++a) {
        z(r, chart.base_dim + a) = f.ehat(r, a);
      }
    }
    return z;
  };
}

template <typename F>
CheckResult guarded(const std::string& name, double tol, F&& body) {
  CheckResult r{name, 0.0, tol, false, {}};
  try {
    r.max_residual = body();
    r.passed = std::isfinite(r.max_residual) && r.max_residual <= tol;
  } catch (const std::exception& e) {
    r.max_residual = std::numeric_limits<double>::infinity();
    r.note = e.what();
  }
  return r;
}

json natural_to_json(const NaturalState& x) {
  return json{{"q", x.q}, {"u", x.u}, {"s", x.s}};
}

}  // namespace

Route parse_route(const std::string& s) {
  if (s == "full") return Route::kFull;
  if (s == "reduced") return Route::kReduced;
  if (s == "reconstruct") return Route::kReconstruct;
  if (s == "compare") return Route::kCompare;
  throw InvalidParameter("unknown route '" + s + "'");
}

std::string to_string(Route r) {
  switch (r) {
    case Route::kFull: return "full";
    case Route::kReduced: return "reduced";
    case Route::kReconstruct: return "reconstruct";
    case Route::kCompare: return "compare";
  }
  return "full";
}

OutputFormat parse_format(const std::string& s) {
  if (s == "csv") return OutputFormat::kCsv;
  if (s == "json") return OutputFormat::kJson;
  throw InvalidParameter("unknown format '" + s + "'");
}

std::string to_string(OutputFormat f) {
  return f == OutputFormat::kJson ? "json" : "csv";
}

void validate(const RunConfig& c) {
  if (!(c.dt > 0.0)) throw InvalidParameter("dt must be positive");
  if (!(c.t_end > 0.0)) throw InvalidParameter("t_end must be positive");
  const auto names = scenario_names();
  if (std::find(names.begin(), names.end(), c.scenario) == names.end()) {
    throw InvalidParameter("unknown scenario '" + c.scenario + "'");
  }
}

RunConfig merge_json_config(const std::string& json_text, RunConfig base) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw InvalidParameter(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw InvalidParameter("config must be a JSON object");
  static const std::vector<std::string> known = {
      "scenario", "parameters", "initial_state", "t_end", "dt",
      "route",    "output_path", "format",       "seed"};
  for (const auto& [key, _] : j.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      throw InvalidParameter("unknown config field '" + key + "'");
    }
  }
  try {
    if (j.contains("scenario")) base.scenario = j["scenario"].get<std::string>();
    if (j.contains("parameters")) {
      for (const auto& [k, v] : j["parameters"].items()) {
        base.parameters[k] = v.get<double>();
      }
    }
    if (j.contains("initial_state")) {
      const json& s = j["initial_state"];
      NaturalState x;
      x.q = s.at("q").get<std::vector<double>>();
      x.u = s.at("u").get<std::vector<double>>();
      x.s = s.value("s", 0.0);
      base.initial_state = x;
    }
    if (j.contains("t_end")) base.t_end = j["t_end"].get<double>();
    if (j.contains("dt")) base.dt = j["dt"].get<double>();
    if (j.contains("route")) base.route = parse_route(j["route"].get<std::string>());
    if (j.contains("output_path")) base.output_path = j["output_path"].get<std::string>();
    if (j.contains("format")) base.format = parse_format(j["format"].get<std::string>());
    if (j.contains("seed")) base.seed = j["seed"].get<std::uint64_t>();
  } catch (const json::exception& e) {
    throw InvalidParameter(std::string("bad config field: ") + e.what());
  }
  return base;
}

SimulationOutput run_simulation(const RunConfig& config) {
  validate(config);
  return run_simulation(make_scenario(config.scenario, config.parameters), config);
}

SimulationOutput run_simulation(const Scenario& sc, const RunConfig& c) {
  if (!(c.dt > 0.0) || !(c.t_end > 0.0)) {
    throw InvalidParameter("dt and t_end must be positive");
  }
  const NaturalState x0 = c.initial_state.value_or(sc.default_initial);
  const std::size_t n = sc.chart.dim();
  if (x0.q.size() != n || x0.u.size() != n) {
    throw InvalidParameter("initial_state must have q and u of length " +
                           std::to_string(n));
  }
  switch (c.route) {
    case Route::kFull: return {full_route(sc, x0, c), std::nullopt};
    case Route::kReduced: return {reduced_route(sc, x0, c), std::nullopt};
    case Route::kReconstruct: return {reconstruct_route(sc, x0, c), std::nullopt};
    case Route::kCompare: return compare_routes(sc, x0, c);
  }
  return {};
}

void write_csv(const Trajectory& tr, std::ostream& out) {
  out << "t";
  for (const auto& n : tr.state_names) out << ',' << n;
  for (const auto& n : tr.diagnostic_names) out << ',' << n;
  out << '\n';
  for (std::size_t k = 0; k < tr.size(); ++k) {
    out << format_number(tr.times[k]);
    for (double v : tr.states[k]) out << ',' << format_number(v);
    for (double v : tr.diagnostics[k]) out << ',' << format_number(v);
    out << '\n';
  }
}

void write_json(const SimulationOutput& result, const RunConfig& config,
                std::ostream& out) {
  const Trajectory& tr = result.table;
  json j;
  j["schema"] = 1;
  j["scenario"] = config.scenario;
  j["parameters"] = config.parameters;
  j["route"] = to_string(config.route);
  j["t_end"] = config.t_end;
  j["dt"] = config.dt;
  if (config.initial_state) j["initial_state"] = natural_to_json(*config.initial_state);
  std::vector<std::string> columns{"t"};
  columns.insert(columns.end(), tr.state_names.begin(), tr.state_names.end());
  columns.insert(columns.end(), tr.diagnostic_names.begin(),
                 tr.diagnostic_names.end());
  j["columns"] = columns;
  json rows = json::array();
  for (std::size_t k = 0; k < tr.size(); ++k) {
    std::vector<double> row{tr.times[k]};
    row.insert(row.end(), tr.states[k].begin(), tr.states[k].end());
    row.insert(row.end(), tr.diagnostics[k].begin(), tr.diagnostics[k].end());
    rows.push_back(row);
  }
  j["rows"] = std::move(rows);
  if (result.max_deviation) j["max_deviation"] = *result.max_deviation;
  out << j.dump() << '\n';
}

bool InvariantReport::passed() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const CheckResult& c) { return c.passed; });
}

InvariantReport run_check(const Scenario& sc, std::uint64_t seed, int samples) {
  InvariantReport rep;
  rep.scenario = sc.name;
  rep.seed = seed;
  std::mt19937_64 rng(seed);
  std::vector<NaturalState> states;
  for (int k = 0; k < samples; ++k) states.push_back(sc.sample_state(rng));
  const auto& L = sc.lagrangian;
  const auto& chart = sc.chart;

  rep.checks.push_back(guarded("invariance", 1e-8, [&] {
    return invariance_check(L, chart, states);
  }));
  rep.checks.push_back(guarded("reduction_consistency", 1e-10, [&] {
    ReducedLagrangian l = reduce_lagrangian(L, chart);
    return reduction_consistency(L, chart, l, states);
  }));
  rep.checks.push_back(guarded("bracket_table", 1e-8, [&] {
    double r = 0.0;
    for (const auto& x : states) r = std::max(r, bracket_table_check(chart, x.q).max());
    return r;
  }));
  rep.checks.push_back(guarded("contact_form", 1e-8, [&] {
    double r = 0.0;
    for (const auto& x : states) r = std::max(r, contact_form_check(L, x).max());
    return r;
  }));
  rep.checks.push_back(guarded("frame_equations", 1e-8, [&] {
    const FrameField frame = combined_frame(chart);
    double r = 0.0;
    for (const auto& x : states) r = std::max(r, frame_equation_residual(L, x, frame));
    return r;
  }));
  rep.checks.push_back(guarded("g_regularity", 0.0, [&] {
    (void)hessian_blocks(L, chart, sc.default_initial);
    return 0.0;
  }));
  if (chart.fiber_dim > 0) {
    rep.checks.push_back(guarded("connection_axioms", 1e-8, [&] {
      double r = 0.0;
      for (const auto& x : states) {
        r = std::max(r, connection_axioms_check(L, chart, x).max());
      }
      return r;
    }));
    rep.checks.push_back(guarded("equivariance", 1e-8, [&] {
      double r = 0.0;
      for (const auto& x : states) r = std::max(r, equivariance_check(L, chart, x));
      return r;
    }));
  }
  return rep;
}

void print_report(const InvariantReport& rep, std::ostream& out) {
  out << "scenario " << rep.scenario << " seed " << rep.seed << '\n';
  for (const auto& c : rep.checks) {
    out << (c.passed ? "PASS " : "FAIL ") << std::left << std::setw(22) << c.name
        << " residual " << format_number(c.max_residual) << " tol "
        << format_number(c.tolerance);
    if (!c.note.empty()) out << "  (" << c.note << ")";
    out << '\n';
  }
  out << (rep.passed() ? "all checks passed" : "some checks FAILED") << '\n';
}

void write_report_json(const InvariantReport& rep, std::ostream& out) {
  json j;
  j["schema"] = 1;
  j["scenario"] = rep.scenario;
  j["seed"] = rep.seed;
  j["passed"] = rep.passed();
  json checks = json::array();
  for (const auto& c : rep.checks) {
    json e{{"name", c.name},
           {"tolerance", c.tolerance},
           {"passed", c.passed}};
    // JSON has no infinity; a throwing check reports null
    if (std::isfinite(c.max_residual)) {
      e["max_residual"] = c.max_residual;
    } else {
      e["max_residual"] = nullptr;
    }
    if (!c.note.empty()) e["note"] = c.note;
    checks.push_back(std::move(e));
  }
  j["checks"] = std::move(checks);
  out << j.dump(2) << '\n';
}

namespace {

void open_output(const std::string& path, std::ofstream& file) {
  file.open(path, std::ios::binary);
  if (!file) throw InvalidParameter("cannot open output file '" + path + "'");
}

int do_simulate(const RunConfig& config, std::ostream& out, std::ostream& err) {
  validate(config);
  const LogLevel level = log_level();
  Scenario sc = make_scenario(config.scenario, config.parameters);
  if (level != LogLevel::kQuiet) {
    err << "simulate " << sc.name << " route " << to_string(config.route)
        << " t_end " << config.t_end << " dt " << config.dt << '\n';
  }
  if (level == LogLevel::kDebug) {
    for (const auto& [k, v] : sc.parameters) err << "  " << k << " = " << v << '\n';
  }
  SimulationOutput res = run_simulation(sc, config);

  std::ofstream file;
  std::ostream* sink = &out;
  if (!config.output_path.empty()) {
    open_output(config.output_path, file);
    sink = &file;
  }
  if (config.format == OutputFormat::kJson) {
    write_json(res, config, *sink);
  } else {
    write_csv(res.table, *sink);
  }
  if (res.max_deviation) {
    // keep stdout clean when the data itself goes there
    std::ostream& summary = config.output_path.empty() ? err : out;
    summary << "max_deviation " << format_number(*res.max_deviation) << '\n';
  }
  if (level != LogLevel::kQuiet) {
    err << "wrote " << res.table.size() << " samples"
        << (config.output_path.empty() ? "" : " to " + config.output_path) << '\n';
  }
  return 0;
}

int do_check(const std::string& name, const ParameterMap& params,
             std::uint64_t seed, const std::string& output, OutputFormat fmt,
             std::ostream& out) {
  Scenario sc = make_scenario(name, params);
  InvariantReport rep = run_check(sc, seed);
  if (!output.empty()) {
    std::ofstream file;
    open_output(output, file);
    write_report_json(rep, file);
    print_report(rep, out);
  } else if (fmt == OutputFormat::kJson) {
    write_report_json(rep, out);
  } else {
    print_report(rep, out);
  }
  return rep.passed() ? 0 : 2;
}

void report_numerical(const NumericalError& e, std::ostream& err) {
  err << "numerical failure: " << e.what() << '\n';
  if (e.time()) err << "  at t = " << format_number(*e.time()) << '\n';
  if (!e.state().empty()) {
    err << "  state = (";
    for (std::size_t i = 0; i < e.state().size(); ++i) {
      err << (i ? ", " : "") << format_number(e.state()[i]);
    }
    err << ")\n";
  }
}

}  // namespace

int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Simulate contact Lagrangian systems with symmetry"};
  app.require_subcommand(1);

  std::string scenario;
  std::vector<std::string> params;
  double gamma = 0.0;
  double t_end = 0.0;
  double dt = 0.0;
  std::string route;
  std::string output;
  std::string format;
  std::uint64_t seed = 42;
  std::string config_path;

  auto* sim = app.add_subcommand("simulate", "integrate a scenario and write its trajectory");
  sim->add_option("--scenario", scenario, "registered scenario name");
  sim->add_option("--param", params, "NAME=VALUE scenario parameter (repeatable)");
  sim->add_option("--gamma", gamma, "dissipation rate (same as --param gamma=...)");
  sim->add_option("--t-end", t_end, "final time");
  sim->add_option("--dt", dt, "step size");
  sim->add_option("--route", route, "full | reduced | reconstruct | compare");
  sim->add_option("--output", output, "output file (default: stdout)");
  sim->add_option("--format", format, "csv | json");
  sim->add_option("--seed", seed, "seed for probe states");
  sim->add_option("--config", config_path, "JSON config file");

  auto* chk = app.add_subcommand("check", "run the invariant suite on a scenario");
  chk->add_option("name", scenario, "scenario name");
  chk->add_option("--scenario", scenario, "scenario name");
  chk->add_option("--param", params, "NAME=VALUE scenario parameter (repeatable)");
  chk->add_option("--gamma", gamma, "dissipation rate");
  chk->add_option("--seed", seed, "seed for the random states");
  chk->add_option("--output", output, "write the JSON report here");
  chk->add_option("--format", format, "csv (table) | json");

  auto* list = app.add_subcommand("list-scenarios", "print the registered scenarios");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    std::ostringstream o;
    std::ostringstream eo;
    const int code = app.exit(e, o, eo);
    out << o.str();
    err << eo.str();
    return code == 0 ? 0 : 1;
  }

  auto collect_params = [&](ParameterMap& into, const CLI::App* sub) {
    for (const auto& p : params) {
      const auto eq = p.find('=');
      if (eq == std::string::npos || eq == 0) {
        throw InvalidParameter("--param expects NAME=VALUE, got '" + p + "'");
      }
      const std::string key = p.substr(0, eq);
      into[key] = parse_double(p.substr(eq + 1), key);
    }
    if (sub->count("--gamma") > 0) into["gamma"] = gamma;
  };

  try {
    if (list->parsed()) {
      for (const auto& name : scenario_names()) {
        Scenario sc = make_scenario(name);
        out << name << ": " << sc.description << '\n';
        for (const auto& [k, v] : scenario_defaults(name)) {
          out << "    " << k << " = " << format_number(v) << '\n';
        }
      }
      return 0;
    }
    if (chk->parsed()) {
      if (scenario.empty()) throw InvalidParameter("check needs a scenario name");
      ParameterMap p;
      collect_params(p, chk);
      const OutputFormat fmt = format.empty() ? OutputFormat::kCsv : parse_format(format);
      return do_check(scenario, p, seed, output, fmt, out);
    }
    // simulate: defaults < config file < flags
    RunConfig config;
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw InvalidParameter("cannot read config '" + config_path + "'");
      std::stringstream buf;
      buf << in.rdbuf();
      config = merge_json_config(buf.str(), config);
    }
    if (sim->count("--scenario") > 0) config.scenario = scenario;
    collect_params(config.parameters, sim);
    if (sim->count("--t-end") > 0) config.t_end = t_end;
    if (sim->count("--dt") > 0) config.dt = dt;
    if (sim->count("--route") > 0) config.route = parse_route(route);
    if (sim->count("--output") > 0) config.output_path = output;
    if (sim->count("--format") > 0) config.format = parse_format(format);
    if (sim->count("--seed") > 0) config.seed = seed;
    if (config.scenario.empty()) throw InvalidParameter("simulate needs --scenario");
    return do_simulate(config, out, err);
  } catch (const NumericalError& e) {
    report_numerical(e, err);
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace herglotz
