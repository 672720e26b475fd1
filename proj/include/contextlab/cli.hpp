#pragma once

// Command implementations for the contextlab tool. Each command renders its
// whole output into a string and writes it once, so identical configurations
// give byte-identical files.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "contextlab/graph.hpp"
#include "contextlab/nmrsim.hpp"
#include "contextlab/scenario.hpp"
#include "contextlab/verify.hpp"

namespace contextlab::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

inline constexpr std::uint64_t kDefaultSeed = 20190213;
inline constexpr const char* kSeedEnv = "CONTEXTLAB_SEED";

enum class Command { verify, eval, sweep, bounds, nmr, export_scenario };
enum class Format { csv, json, dat };

struct RunConfig {
  Command command = Command::verify;
  std::string scenario = "kcbs-twin";  // built-in name or path to a scenario JSON file
  std::vector<double> thetas_deg;      // empty: command default
  double epsilon = 1.0;
  std::optional<std::int64_t> shots;   // nullopt: exact
  std::optional<std::uint64_t> seed;   // nullopt: CONTEXTLAB_SEED or kDefaultSeed
  std::size_t repetitions = 3;
  bool normalize = true;
  bool strict = false;
  std::optional<Format> format;        // nullopt: command default
  std::string output_path;             // empty: stdout
};

/// Usage problems detected after parsing (bad angle, bad epsilon...).
class UsageError : public Error {
 public:
  using Error::Error;
};

inline std::uint64_t resolve_seed(const RunConfig& cfg) {
  if (cfg.seed) return *cfg.seed;
  if (const char* env = std::getenv(kSeedEnv); env != nullptr && *env != '\0') {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end == nullptr || *end != '\0') throw UsageError(std::string(kSeedEnv) + " must be an unsigned integer");
    return v;
  }
  return kDefaultSeed;
}

inline ContextualityScenario load_scenario(const std::string& name_or_path) {
  if (auto s = builtin_scenario(name_or_path)) return *s;
  std::ifstream in(name_or_path);
  if (!in) {
    throw UsageError("unknown scenario '" + name_or_path + "' (built-ins: kcbs-twin, c4; or a JSON file path)");
  }
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ScenarioError("cannot parse " + name_or_path + ": " + e.what());
  }
  return scenario_from_json(j);
}

inline void check_thetas(const std::vector<double>& thetas) {
  for (double t : thetas) {
    if (!(t >= 0.0 && t < 360.0)) {
      throw UsageError("theta " + std::to_string(t) + " outside [0, 360) degrees");
    }
  }
}

namespace detail {

inline std::string fixed(double v, int decimals) {
  if (std::abs(v) < 0.5 * std::pow(10.0, -decimals)) v = 0.0;  // no "-0.000"
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

inline std::string theta_text(double deg) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", deg);
  return buf;
}

inline std::string dump(const nlohmann::json& j) { return j.dump(2) + "\n"; }

}  // namespace detail

// --- commands -------------------------------------------------------------

inline int cmd_verify(const RunConfig& cfg, std::string& out) {
  std::optional<ContextualityScenario> extra;
  std::ostringstream os;
  bool load_failed = false;
  const auto names = builtin_scenario_names();
  if (std::find(names.begin(), names.end(), cfg.scenario) == names.end()) {
    try {
      extra = load_scenario(cfg.scenario);
    } catch (const Error& e) {
      os << "FAIL  scenario file " << cfg.scenario << ": " << e.what() << "\n";
      load_failed = true;
    }
  }
  VerificationReport report;
  try {
    report = run_verification(extra, resolve_seed(cfg));
  } catch (const Error& e) {
    report = run_verification(std::nullopt, resolve_seed(cfg));
    report.add("scenario " + cfg.scenario + " identity suite", false, e.what());
  }
  for (const auto& c : report.checks) {
    if (c.passed) {
      os << "PASS  " << c.name << "\n";
    } else {
      os << "FAIL  " << c.name << (c.detail.empty() ? "" : ": " + c.detail) << "\n";
    }
  }
  for (const auto& n : report.notes) os << "NOTE  " << n << "\n";
  for (const auto& s : report.summary) os << s << "\n";
  out = os.str();
  return report.all_passed() && !load_failed ? kExitOk : kExitFailure;
}

inline int cmd_sweep(const RunConfig& cfg, std::string& out) {
  const auto s = load_scenario(cfg.scenario);
  std::vector<double> thetas = cfg.thetas_deg;
  if (thetas.empty()) thetas = s.sweep_grid_deg();
  if (thetas.empty()) {
    for (int d = 180; d >= 0; d -= 15) thetas.push_back(d);
  }
  check_thetas(thetas);
  const auto rows = rotation_sweep(s, thetas);
  const Format fmt = cfg.format.value_or(Format::csv);
  std::ostringstream os;
  if (fmt == Format::json) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : rows) {
      arr.push_back({{"theta_deg", r.theta_deg},
                     {"value", r.value},
                     {"closed_form", r.closed_form_value ? nlohmann::json(*r.closed_form_value) : nlohmann::json(nullptr)},
                     {"nchv_bound", s.bounds().nchv},
                     {"gp_bound", s.bounds().gp}});
    }
    os << detail::dump({{"scenario", s.name()}, {"rows", arr}});
  } else if (fmt == Format::csv) {
    os << "theta_deg,value,closed_form,nchv_bound,gp_bound\n";
    for (const auto& r : rows) {
      os << detail::theta_text(r.theta_deg) << ',' << detail::fixed(r.value, 3) << ','
         << (r.closed_form_value ? detail::fixed(*r.closed_form_value, 3) : "") << ','
         << detail::fixed(s.bounds().nchv, 3) << ',' << detail::fixed(s.bounds().gp, 3) << "\n";
    }
  } else {
    os << "# scenario " << s.name() << "\n";
    os << "# columns: theta_deg value closed_form nchv_bound gp_bound\n";
    for (const auto& r : rows) {
      os << detail::fixed(r.theta_deg, 2) << ' ' << detail::fixed(r.value, 6) << ' '
         << (r.closed_form_value ? detail::fixed(*r.closed_form_value, 6) : "nan") << ' '
         << detail::fixed(s.bounds().nchv, 6) << ' ' << detail::fixed(s.bounds().gp, 6) << "\n";
    }
  }
  out = os.str();
  return kExitOk;
}

inline int cmd_eval(const RunConfig& cfg, std::string& out) {
  const auto s = load_scenario(cfg.scenario);
  std::vector<double> thetas = cfg.thetas_deg;
  if (thetas.empty()) thetas = {0.0};
  check_thetas(thetas);
  if (!(cfg.epsilon > 0.0 && cfg.epsilon <= 1.0)) throw UsageError("epsilon must lie in (0, 1]");
  const auto agg = scenario_observable(s);
  const double divisor = static_cast<double>(s.dim());
  struct Row {
    double theta, value, via_pauli;
  };
  std::vector<Row> rows;
  for (double t : thetas) {
    const auto pure = rotated_reference(s, degrees_to_radians(t));
    const auto rho = pps_state(pure, {cfg.epsilon, qubit_count(s.dim())});
    rows.push_back({t, evaluate(s, rho), evaluate_via_pauli(s, rho, agg, divisor)});
  }
  std::ostringstream os;
  const Format fmt = cfg.format.value_or(Format::csv);
  if (fmt == Format::json) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : rows) arr.push_back({{"theta_deg", r.theta}, {"value", r.value}, {"value_via_pauli", r.via_pauli}});
    os << detail::dump({{"scenario", s.name()}, {"epsilon", cfg.epsilon}, {"observable", agg}, {"divisor", divisor},
                        {"rows", arr}});
  } else {
    const char sep = fmt == Format::csv ? ',' : ' ';
    if (fmt == Format::dat) os << "# ";
    os << "theta_deg" << sep << "value" << sep << "value_via_pauli\n";
    for (const auto& r : rows) {
      os << detail::theta_text(r.theta) << sep << detail::fixed(r.value, 3) << sep << detail::fixed(r.via_pauli, 3)
         << "\n";
    }
  }
  out = os.str();
  return kExitOk;
}

inline int cmd_bounds(const RunConfig& cfg, std::string& out) {
  const auto s = load_scenario(cfg.scenario);
  const auto g = build_graph(s.vectors());
  const auto b = compute_bounds(g);
  nlohmann::json j = b;
  j["n_vertices"] = g.n_vertices();
  nlohmann::json edges = nlohmann::json::array();
  for (auto [a, c] : g.edges()) edges.push_back({a, c});
  j["edges"] = edges;
  j["declared"] = {{"nchv", s.bounds().nchv}, {"qm", s.bounds().qm}, {"gp", s.bounds().gp}};
  j["quantum_value"] = evaluate(s, DensityOperator::pure(s.reference_state()));
  j["scenario"] = s.name();
  out = detail::dump(j);
  return kExitOk;
}

inline int cmd_nmr(const RunConfig& cfg, std::string& out) {
  const auto s = load_scenario(cfg.scenario);
  std::vector<double> thetas = cfg.thetas_deg;
  if (thetas.empty()) thetas = {0.0};
  if (thetas.size() != 1) throw UsageError("nmr takes a single --theta");
  check_thetas(thetas);
  if (!(cfg.epsilon > 0.0 && cfg.epsilon <= 1.0)) throw UsageError("epsilon must lie in (0, 1]");
  if (cfg.shots && *cfg.shots < 1) throw UsageError("shots must be at least 1");
  if (cfg.repetitions == 0) throw UsageError("repetitions must be at least 1");

  const std::size_t n = qubit_count(s.dim());
  const auto rho = pps_state(rotated_reference(s, degrees_to_radians(thetas[0])), {cfg.epsilon, n});
  const auto agg = scenario_observable(s);
  const auto mappings = builtin_mappings(n);
  NmrOptions opt;
  opt.shots = cfg.shots;
  opt.seed = resolve_seed(cfg);
  opt.epsilon = cfg.epsilon;
  opt.normalize = cfg.normalize;
  opt.strict = cfg.strict;
  const auto rep = measure_repeated(s, rho, agg, mappings, opt, cfg.repetitions);

  double err = 0.0;
  if (cfg.shots) err = cfg.repetitions > 1 ? rep.stderr_of_mean : rep.runs.front().standard_error;

  const Format fmt = cfg.format.value_or(Format::json);
  std::ostringstream os;
  if (fmt == Format::json) {
    nlohmann::json j = rep.runs.front();
    j["value"] = rep.mean;
    j["stderr"] = err;
    j["scenario"] = s.name();
    j["theta_deg"] = thetas[0];
    j["repetitions"] = cfg.repetitions;
    nlohmann::json runs = nlohmann::json::array();
    for (const auto& r : rep.runs) runs.push_back({{"seed", r.seed}, {"value", r.value}, {"stderr", r.standard_error}});
    j["runs"] = runs;
    os << detail::dump(j);
  } else {
    const char sep = fmt == Format::csv ? ',' : ' ';
    if (fmt == Format::dat) os << "# ";
    os << "theta_deg" << sep << "value" << sep << "stderr\n";
    os << detail::theta_text(thetas[0]) << sep << detail::fixed(rep.mean, 3) << sep << detail::fixed(err, 3) << "\n";
  }
  out = os.str();
  return kExitOk;
}

inline int cmd_export_scenario(const RunConfig& cfg, std::string& out) {
  const auto s = load_scenario(cfg.scenario);
  out = detail::dump(nlohmann::json(s));
  return kExitOk;
}

/// Runs one command and writes its output to cfg.output_path or `out_sink`.
/// Errors go to `err_sink` with the command name attached.
inline int run(const RunConfig& cfg, std::ostream& out_sink, std::ostream& err_sink) {
  static constexpr const char* kNames[] = {"verify", "eval", "sweep", "bounds", "nmr", "export-scenario"};
  const char* name = kNames[static_cast<int>(cfg.command)];
  std::string text;
  int code = kExitOk;
  try {
    switch (cfg.command) {
      case Command::verify: code = cmd_verify(cfg, text); break;
      case Command::eval: code = cmd_eval(cfg, text); break;
      case Command::sweep: code = cmd_sweep(cfg, text); break;
      case Command::bounds: code = cmd_bounds(cfg, text); break;
      case Command::nmr: code = cmd_nmr(cfg, text); break;
      case Command::export_scenario: code = cmd_export_scenario(cfg, text); break;
    }
  } catch (const UsageError& e) {
    err_sink << "contextlab " << name << ": " << e.what() << "\n";
    return kExitUsage;
  } catch (const ScenarioError& e) {
    err_sink << "contextlab " << name << ": " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    err_sink << "contextlab " << name << ": " << e.what() << "\n";
    return kExitFailure;
  }
  if (cfg.output_path.empty()) {
    out_sink << text;
  } else {
    std::ofstream f(cfg.output_path, std::ios::binary);
    if (!f) {
      err_sink << "contextlab " << name << ": cannot write " << cfg.output_path << "\n";
      return kExitUsage;
    }
    f << text;
  }
  return code;
}

}  // namespace contextlab::cli
