#include <catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "contextlab/cli.hpp"

using namespace contextlab;
using namespace contextlab::cli;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run_cli(const RunConfig& cfg) {
  std::ostringstream out, err;
  const int code = run(cfg, out, err);
  return {code, out.str(), err.str()};
}

RunConfig config(Command c, std::string scenario = "kcbs-twin") {
  RunConfig cfg;
  cfg.command = c;
  cfg.scenario = std::move(scenario);
  return cfg;
}

fs::path scratch_dir() {
  const auto dir = fs::temp_directory_path() / "contextlab_cli_tests";
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("sweep CSV on the default grid") {
  const auto r = run_cli(config(Command::sweep));
  REQUIRE(r.code == kExitOk);
  CHECK(r.out ==
        "theta_deg,value,closed_form,nchv_bound,gp_bound\n"
        "180,1.500,1.500,2.000,2.500\n"
        "120,1.750,1.750,2.000,2.500\n"
        "90,2.000,2.000,2.000,2.500\n"
        "60,2.250,2.250,2.000,2.500\n"
        "45,2.354,2.354,2.000,2.500\n"
        "36,2.405,2.405,2.000,2.500\n"
        "0,2.500,2.500,2.000,2.500\n");
}

TEST_CASE("sweep with explicit angles and formats") {
  auto cfg = config(Command::sweep, "c4");
  cfg.thetas_deg = {0, 90};
  auto r = run_cli(cfg);
  CHECK(r.out == "theta_deg,value,closed_form,nchv_bound,gp_bound\n0,3.500,3.500,3.000,3.500\n90,2.750,2.750,3.000,3.500\n");

  cfg.format = Format::json;
  r = run_cli(cfg);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j.at("scenario") == "c4");
  CHECK(j.at("rows").size() == 2);
  CHECK(j["rows"][0]["value"].get<double>() == Catch::Approx(3.5));

  cfg.format = Format::dat;
  r = run_cli(cfg);
  CHECK(r.out.rfind("# scenario c4\n", 0) == 0);
}

TEST_CASE("angles outside [0, 360) are usage errors") {
  for (double bad : {-1.0, 360.0, 720.0}) {
    auto cfg = config(Command::sweep);
    cfg.thetas_deg = {bad};
    const auto r = run_cli(cfg);
    CHECK(r.code == kExitUsage);
    CHECK(r.out.empty());
    CHECK(r.err.find("outside [0, 360)") != std::string::npos);
  }
}

TEST_CASE("unknown scenario is a usage error") {
  const auto r = run_cli(config(Command::bounds, "/nonexistent/scenario.json"));
  CHECK(r.code == kExitUsage);
  CHECK(r.err.find("unknown scenario") != std::string::npos);
}

TEST_CASE("eval") {
  auto cfg = config(Command::eval);
  cfg.thetas_deg = {45};
  auto r = run_cli(cfg);
  CHECK(r.code == kExitOk);
  CHECK(r.out == "theta_deg,value,value_via_pauli\n45,2.354,2.354\n");

  cfg.epsilon = 0.0;
  CHECK(run_cli(cfg).code == kExitUsage);
}

TEST_CASE("bounds") {
  const auto r = run_cli(config(Command::bounds, "c4"));
  REQUIRE(r.code == kExitOk);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j.at("alpha") == 3);
  CHECK(j.at("alpha_star").get<double>() == Catch::Approx(3.5));
  CHECK(j.at("edges").size() == 21);
  CHECK(j.at("quantum_value").get<double>() == Catch::Approx(3.5));
}

TEST_CASE("nmr exact and sampled") {
  auto cfg = config(Command::nmr);
  auto r = run_cli(cfg);
  REQUIRE(r.code == kExitOk);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j.at("value").get<double>() == Catch::Approx(2.5).margin(1e-12));
  CHECK(j.at("stderr") == 0.0);
  CHECK(j.at("shots") == "exact");

  cfg.scenario = "c4";
  cfg.thetas_deg = {90};
  cfg.shots = 1'000'000;
  cfg.seed = 3;
  r = run_cli(cfg);
  j = nlohmann::json::parse(r.out);
  CHECK(j.at("value").get<double>() == Catch::Approx(2.75).margin(5e-3));
  CHECK(j.at("runs").size() == 3);
  CHECK(j.at("seed") == 3);

  cfg.thetas_deg = {0, 10};
  CHECK(run_cli(cfg).code == kExitUsage);
}

TEST_CASE("verify passes and reports the printed-table discrepancies") {
  const auto r = run_cli(config(Command::verify));
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("20/20 projector decompositions verified") != std::string::npos);
  CHECK(r.out.find("12/12 readout mappings verified") != std::string::npos);
  CHECK(r.out.find("FAIL") == std::string::npos);
  CHECK(r.out.find("NOTE") != std::string::npos);
}

TEST_CASE("verify fails on a corrupted scenario file") {
  const auto path = scratch_dir() / "corrupt.json";
  {
    std::ofstream f(path);
    f << "{\"name\": \"broken\", \"vectors\": [[[1, 0]], ";
  }
  const auto r = run_cli(config(Command::verify, path.string()));
  CHECK(r.code == kExitFailure);
  CHECK(r.out.find("FAIL  scenario file") != std::string::npos);
}

TEST_CASE("verify fails on a scenario that breaks exclusivity") {
  nlohmann::json j = kcbs_twin_scenario();
  j["name"] = "tampered";
  j["contexts"][0] = {0, 1, 2, 3};
  const auto path = scratch_dir() / "tampered.json";
  {
    std::ofstream f(path);
    f << j.dump();
  }
  const auto r = run_cli(config(Command::verify, path.string()));
  CHECK(r.code == kExitFailure);
  CHECK(r.out.find("FAIL") != std::string::npos);
}

TEST_CASE("export then load round trip") {
  const auto path = scratch_dir() / "exported.json";
  auto cfg = config(Command::export_scenario, "c4");
  cfg.output_path = path.string();
  REQUIRE(run_cli(cfg).code == kExitOk);
  auto sweep = config(Command::sweep, path.string());
  auto builtin = config(Command::sweep, "c4");
  CHECK(run_cli(sweep).out == run_cli(builtin).out);
}

TEST_CASE("identical configurations write byte-identical files") {
  const auto dir = scratch_dir();
  for (Command c : {Command::sweep, Command::eval, Command::bounds, Command::nmr, Command::verify}) {
    auto cfg = config(c);
    cfg.seed = 42;
    if (c == Command::nmr) {
      cfg.shots = 2000;
      cfg.thetas_deg = {60};
    }
    cfg.output_path = (dir / "a.out").string();
    run_cli(cfg);
    cfg.output_path = (dir / "b.out").string();
    run_cli(cfg);
    CHECK(slurp(dir / "a.out") == slurp(dir / "b.out"));
    CHECK_FALSE(slurp(dir / "a.out").empty());
  }
}

TEST_CASE("seed resolution") {
  RunConfig cfg;
  ::unsetenv(kSeedEnv);
  CHECK(resolve_seed(cfg) == kDefaultSeed);
  ::setenv(kSeedEnv, "17", 1);
  CHECK(resolve_seed(cfg) == 17);
  cfg.seed = 5;
  CHECK(resolve_seed(cfg) == 5);
  cfg.seed.reset();
  ::setenv(kSeedEnv, "abc", 1);
  CHECK_THROWS_AS(resolve_seed(cfg), UsageError);
  ::unsetenv(kSeedEnv);
}

TEST_CASE("environment seed changes sampled output") {
  auto cfg = config(Command::nmr);
  cfg.shots = 500;
  cfg.thetas_deg = {60};
  ::setenv(kSeedEnv, "1", 1);
  const auto a = run_cli(cfg).out;
  ::setenv(kSeedEnv, "2", 1);
  const auto b = run_cli(cfg).out;
  ::unsetenv(kSeedEnv);
  CHECK(a != b);
}
