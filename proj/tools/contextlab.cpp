// contextlab: contextuality inequalities, graph bounds and NMR readout simulation.

#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "contextlab/cli.hpp"

namespace {

using contextlab::cli::Command;
using contextlab::cli::Format;
using contextlab::cli::RunConfig;

struct Flags {
  std::string scenario = "kcbs-twin";
  std::vector<double> thetas;
  double epsilon = 1.0;
  std::string shots = "exact";
  std::uint64_t seed = 0;
  std::size_t repeat = 3;
  bool raw = false;
  bool strict = false;
  std::string format;
  std::string output;
};

void add_common(CLI::App* sub, Flags& f) {
  sub->add_option("-s,--scenario", f.scenario, "built-in scenario (kcbs-twin, c4) or scenario JSON file")
      ->capture_default_str();
  sub->add_option("-o,--output", f.output, "write output to this file instead of stdout");
}

void add_theta(CLI::App* sub, Flags& f) {
  sub->add_option("-t,--theta", f.thetas, "rotation angle(s) in degrees, in [0, 360)");
}

void add_format(CLI::App* sub, Flags& f) {
  sub->add_option("-f,--format", f.format, "output format")->check(CLI::IsMember({"csv", "json", "dat"}));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"contextlab: fully contextual correlation inequalities and their NMR readout"};
  app.require_subcommand(1);
  Flags f;

  auto* verify = app.add_subcommand("verify", "run the full identity suite (exit 1 on any failure)");
  verify->add_option("-s,--scenario", f.scenario, "additionally check this scenario JSON file");
  verify->add_option("--seed", f.seed, "seed for random density operators");
  verify->add_option("-o,--output", f.output, "write the report to this file");

  auto* eval = app.add_subcommand("eval", "evaluate the inequality on the rotated reference state");
  add_common(eval, f);
  add_theta(eval, f);
  add_format(eval, f);
  eval->add_option("-e,--epsilon", f.epsilon, "pseudopure polarization in (0, 1]")->capture_default_str();

  auto* sweep = app.add_subcommand("sweep", "rotation sweep table (theta, value, closed form, bounds)");
  add_common(sweep, f);
  add_theta(sweep, f);
  add_format(sweep, f);

  auto* bounds = app.add_subcommand("bounds", "independence number and fractional packing number (JSON)");
  add_common(bounds, f);

  auto* nmr = app.add_subcommand("nmr", "simulate the sigma_z readout protocol");
  add_common(nmr, f);
  add_theta(nmr, f);
  add_format(nmr, f);
  nmr->add_option("-e,--epsilon", f.epsilon, "pseudopure polarization in (0, 1]")->capture_default_str();
  nmr->add_option("--shots", f.shots, "shots per observable, or 'exact'")->capture_default_str();
  nmr->add_option("--seed", f.seed, "sampling seed (default: $CONTEXTLAB_SEED or built-in)");
  nmr->add_option("--repeat", f.repeat, "independent repetitions")->capture_default_str();
  nmr->add_flag("--raw", f.raw, "report raw ensemble expectations (no division by epsilon)");
  nmr->add_flag("--strict", f.strict, "fail when an observable has no readout mapping");

  auto* exp = app.add_subcommand("export-scenario", "write a scenario as JSON");
  add_common(exp, f);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return contextlab::cli::kExitUsage;
  }

  RunConfig cfg;
  if (verify->parsed()) {
    cfg.command = Command::verify;
  } else if (eval->parsed()) {
    cfg.command = Command::eval;
  } else if (sweep->parsed()) {
    cfg.command = Command::sweep;
  } else if (bounds->parsed()) {
    cfg.command = Command::bounds;
  } else if (nmr->parsed()) {
    cfg.command = Command::nmr;
  } else {
    cfg.command = Command::export_scenario;
  }
  cfg.scenario = f.scenario;
  cfg.thetas_deg = f.thetas;
  cfg.epsilon = f.epsilon;
  cfg.repetitions = f.repeat;
  cfg.normalize = !f.raw;
  cfg.strict = f.strict;
  cfg.output_path = f.output;
  if (verify->count("--seed") > 0 || nmr->count("--seed") > 0) cfg.seed = f.seed;
  if (f.shots != "exact") {
    try {
      std::size_t pos = 0;
      const long long n = std::stoll(f.shots, &pos);
      if (pos != f.shots.size() || n < 1) throw std::invalid_argument("shots");
      cfg.shots = n;
    } catch (const std::exception&) {
      std::cerr << "contextlab: --shots must be a positive integer or 'exact'\n";
      return contextlab::cli::kExitUsage;
    }
  }
  if (f.format == "csv") cfg.format = Format::csv;
  if (f.format == "json") cfg.format = Format::json;
  if (f.format == "dat") cfg.format = Format::dat;

  return contextlab::cli::run(cfg, std::cout, std::cerr);
}
