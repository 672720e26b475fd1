#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>
#include <set>

#include "contextlab/nmrsim.hpp"
#include "contextlab/random.hpp"

using namespace contextlab;
using Catch::Matchers::WithinAbs;

namespace {

/// Oracle for CNOT: permutation matrix built from bit strings.
ComplexMatrix cnot_oracle(std::size_t control, std::size_t target, std::size_t n) {
  const std::size_t dim = std::size_t{1} << n;
  ComplexMatrix u = ComplexMatrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  for (std::size_t k = 0; k < dim; ++k) {
    std::string bits(n, '0');
    for (std::size_t q = 0; q < n; ++q) bits[q] = (k >> (n - 1 - q) & 1U) ? '1' : '0';
    if (bits[control] == '1') bits[target] = bits[target] == '1' ? '0' : '1';
    const auto out = std::stoul(bits, nullptr, 2);
    u(static_cast<Eigen::Index>(out), static_cast<Eigen::Index>(k)) = 1.0;
  }
  return u;
}

DensityOperator pure_at(const ContextualityScenario& s, double deg) {
  return DensityOperator::pure(rotated_reference(s, degrees_to_radians(deg)));
}

}  // namespace

TEST_CASE("gate matrices") {
  const double h = 1.0 / std::sqrt(2.0);
  const auto& x = single_qubit_pauli('X');
  const auto& y = single_qubit_pauli('Y');
  CHECK(max_abs_diff(gate_matrix(GateStep::y90(0), 1), h * (identity(2) - Complex(0, 1) * y)) < 1e-15);
  CHECK(max_abs_diff(gate_matrix(GateStep::x90(0, -1), 1), h * (identity(2) + Complex(0, 1) * x)) < 1e-15);
  // Y90 takes |0> to (|0> + |1>)/sqrt2
  const auto plus = StateVector::basis(2, 0).evolved(gate_matrix(GateStep::y90(0), 1));
  CHECK(std::abs(plus[0] - h) < 1e-15);
  CHECK(std::abs(plus[1] - h) < 1e-15);

  for (std::size_t c = 0; c < 3; ++c) {
    for (std::size_t t = 0; t < 3; ++t) {
      if (c == t) continue;
      CHECK(max_abs_diff(gate_matrix(GateStep::cnot(c, t), 3), cnot_oracle(c, t, 3)) == 0.0);
    }
  }
  CHECK(max_abs_diff(gate_matrix(GateStep::identity(), 2), identity(4)) == 0.0);
  CHECK_THROWS_AS(gate_matrix(GateStep::cnot(1, 1), 3), IndexError);
  CHECK_THROWS_AS(gate_matrix(GateStep::x90(3), 3), IndexError);
  CHECK(GateStep::cnot(0, 1).label() == "CNOT_12");
  CHECK(GateStep::y90(0, -1).label() == "Ybar_1");
}

TEST_CASE("compose_unitary applies steps in time order") {
  const std::vector<GateStep> steps{GateStep::y90(0), GateStep::cnot(0, 1)};
  const auto u = compose_unitary(steps, 2);
  const ComplexMatrix expected = gate_matrix(steps[1], 2) * gate_matrix(steps[0], 2);
  CHECK(max_abs_diff(u, expected) < 1e-15);
  // Bell state from |00>
  const auto bell = StateVector::basis(4, 0).evolved(u);
  CHECK(std::abs(bell[0] - 1.0 / std::sqrt(2.0)) < 1e-15);
  CHECK(std::abs(bell[3] - 1.0 / std::sqrt(2.0)) < 1e-15);
  CHECK(max_abs_diff(compose_unitary(std::vector<GateStep>{}, 3), identity(8)) == 0.0);
}

TEST_CASE("mapping tables") {
  const auto three = builtin_mappings(3);
  std::set<std::string> labels;
  for (const auto& m : three) labels.insert(m.observable.label());
  CHECK(labels == std::set<std::string>{"IIZ", "IZI", "IZZ", "ZII", "ZIZ", "ZZI", "ZZZ"});
  CHECK(builtin_mappings(2).size() == 5);
  CHECK_THROWS_AS(builtin_mappings(4), Error);
  CHECK(three.back().describe() == "ZZZ <- CNOT_23.CNOT_12 ; read Z_3");
}

TEST_CASE("every mapping reproduces its observable on random states") {
  std::mt19937_64 rng(71);
  for (std::size_t n : {2U, 3U}) {
    for (const auto& m : builtin_mappings(n)) {
      INFO(m.describe());
      const auto u = m.unitary();
      // U^dagger Z_k U equals the observable as an operator
      CHECK(max_abs_diff(u.adjoint() * sigma_z_on(m.readout_qubit, n) * u, pauli_matrix(m.observable)) < 1e-12);
      for (int trial = 0; trial < 100; ++trial) {
        CHECK(m.contract_error(random_density_operator(std::size_t{1} << n, rng)) < 1e-10);
      }
    }
  }
}

TEST_CASE("pseudopure states") {
  const auto ref = StateVector::basis(8, 0);
  CHECK(max_abs_diff(pps_state(ref, {1.0, 3}).matrix(), projector_from_vector(ref)) < 1e-15);
  const auto half = pps_state(ref, {0.5, 3});
  CHECK_THAT(half.matrix()(0, 0).real(), WithinAbs(0.5 + 0.5 / 8, 1e-15));
  CHECK_THAT(half.matrix()(1, 1).real(), WithinAbs(0.5 / 8, 1e-15));
  CHECK_THROWS_AS(pps_state(ref, {0.0, 3}), Error);
  CHECK_THROWS_AS(pps_state(ref, {1.5, 3}), Error);
  CHECK_THROWS_AS(pps_state(ref, {0.5, 2}), DimensionError);
}

TEST_CASE("exact NMR readout equals direct evaluation") {
  std::mt19937_64 rng(73);
  for (const auto& s : {kcbs_twin_scenario(), c4_scenario()}) {
    const auto agg = scenario_observable(s);
    const auto maps = builtin_mappings(qubit_count(s.dim()));
    for (int trial = 0; trial < 50; ++trial) {
      const auto rho = random_density_operator(s.dim(), rng);
      NmrOptions opt;
      const auto r = measure_inequality_nmr(s, rho, agg, maps, opt);
      CHECK_THAT(r.value, WithinAbs(evaluate(s, rho), 1e-10));
      CHECK(r.standard_error == 0.0);
      CHECK(r.unmapped.empty());
    }
  }
}

TEST_CASE("shot noise at the optimal state") {
  const auto s = kcbs_twin_scenario();
  const auto agg = scenario_observable(s);
  const auto maps = builtin_mappings(3);
  NmrOptions opt;
  opt.shots = 1'000'000;
  opt.seed = 5;
  // every mapped observable is sharp on |000>, so sampling is exact
  const auto r = measure_inequality_nmr(s, pure_at(s, 0), agg, maps, opt);
  CHECK_THAT(r.value, WithinAbs(2.5, 1e-12));
  CHECK(r.standard_error == 0.0);

  const auto r60 = measure_inequality_nmr(s, pure_at(s, 60), agg, maps, opt);
  CHECK(r60.standard_error > 0.0);
  CHECK(r60.standard_error < 1e-3);
  CHECK(std::abs(r60.value - 2.25) < 5 * r60.standard_error);
}

TEST_CASE("epsilon enters affinely without normalization") {
  for (const auto& s : {kcbs_twin_scenario(), c4_scenario()}) {
    const auto agg = scenario_observable(s);
    const auto maps = builtin_mappings(qubit_count(s.dim()));
    const double offset = agg.identity_coefficient() / static_cast<double>(s.dim());
    const double pure_value = evaluate(s, pure_at(s, 0));
    for (double eps : {0.1, 0.5, 1.0}) {
      NmrOptions opt;
      opt.epsilon = eps;
      opt.normalize = false;
      const auto rho = pps_state(s.reference_state(), {eps, qubit_count(s.dim())});
      const auto r = measure_inequality_nmr(s, rho, agg, maps, opt);
      CHECK_THAT(r.value, WithinAbs(offset + eps * (pure_value - offset), 1e-10));

      opt.normalize = true;
      CHECK_THAT(measure_inequality_nmr(s, rho, agg, maps, opt).value, WithinAbs(pure_value, 1e-10));
    }
  }
}

TEST_CASE("vanishing polarization leaves the identity contribution") {
  const auto s = kcbs_twin_scenario();
  NmrOptions opt;
  opt.normalize = false;
  opt.epsilon = 1e-9;
  const auto rho = pps_state(s.reference_state(), {1e-9, 3});
  const auto r = measure_inequality_nmr(s, rho, scenario_observable(s), builtin_mappings(3), opt);
  CHECK_THAT(r.value, WithinAbs(1.25, 1e-8));
}

TEST_CASE("statistical error falls as one over root N") {
  const auto s = kcbs_twin_scenario();
  const auto agg = scenario_observable(s);
  const auto maps = builtin_mappings(3);
  const auto rho = pure_at(s, 60);
  const double truth = evaluate(s, rho);
  std::vector<double> log_n, log_rms;
  for (std::int64_t shots : {100, 10'000, 1'000'000}) {
    double ss = 0.0;
    const int seeds = 400;
    for (int k = 0; k < seeds; ++k) {
      NmrOptions opt;
      opt.shots = shots;
      opt.seed = 1000 + static_cast<std::uint64_t>(k);
      const double e = measure_inequality_nmr(s, rho, agg, maps, opt).value - truth;
      ss += e * e;
    }
    log_n.push_back(std::log10(static_cast<double>(shots)));
    log_rms.push_back(std::log10(std::sqrt(ss / seeds)));
  }
  // least-squares slope
  const double mx = (log_n[0] + log_n[1] + log_n[2]) / 3.0;
  const double my = (log_rms[0] + log_rms[1] + log_rms[2]) / 3.0;
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < 3; ++i) {
    num += (log_n[i] - mx) * (log_rms[i] - my);
    den += (log_n[i] - mx) * (log_n[i] - mx);
  }
  const double slope = num / den;
  INFO("slope " << slope);
  CHECK(slope > -0.6);
  CHECK(slope < -0.4);
}

TEST_CASE("a fixed seed reproduces the run exactly") {
  const auto s = c4_scenario();
  const auto agg = scenario_observable(s);
  const auto maps = builtin_mappings(2);
  NmrOptions opt;
  opt.shots = 5000;
  opt.seed = 99;
  const auto rho = pure_at(s, 90);
  const nlohmann::json a = measure_inequality_nmr(s, rho, agg, maps, opt);
  const nlohmann::json b = measure_inequality_nmr(s, rho, agg, maps, opt);
  CHECK(a.dump() == b.dump());
  opt.seed = 100;
  const nlohmann::json c = measure_inequality_nmr(s, rho, agg, maps, opt);
  CHECK(a.dump() != c.dump());
}

TEST_CASE("unmapped observables") {
  const auto s = kcbs_twin_scenario();
  const auto agg = scenario_observable(s);
  auto maps = builtin_mappings(3);
  maps.pop_back();  // drop ZZZ
  const auto rho = pure_at(s, 30);
  NmrOptions opt;
  const auto r = measure_inequality_nmr(s, rho, agg, maps, opt);
  CHECK(r.unmapped == std::vector<std::string>{"ZZZ"});
  CHECK_FALSE(r.per_term.at("ZZZ").mapped);
  CHECK_THAT(r.value, WithinAbs(evaluate(s, rho), 1e-10));
  const nlohmann::json j = r;
  CHECK(j.at("unmapped").size() == 1);

  opt.strict = true;
  CHECK_THROWS_AS(measure_inequality_nmr(s, rho, agg, maps, opt), MappingError);
}

TEST_CASE("option validation") {
  const auto s = kcbs_twin_scenario();
  const auto agg = scenario_observable(s);
  const auto maps = builtin_mappings(3);
  const auto rho = pure_at(s, 0);
  NmrOptions opt;
  opt.shots = 0;
  CHECK_THROWS_AS(measure_inequality_nmr(s, rho, agg, maps, opt), Error);
  opt = {};
  opt.epsilon = 0.0;
  CHECK_THROWS_AS(measure_inequality_nmr(s, rho, agg, maps, opt), Error);
  opt = {};
  opt.divisor = 0.0;
  CHECK_THROWS_AS(measure_inequality_nmr(s, rho, agg, maps, opt), Error);
  CHECK_THROWS_AS(measure_inequality_nmr(s, DensityOperator::maximally_mixed(4), agg, maps, NmrOptions{}),
                  DimensionError);
  CHECK_THROWS_AS(measure_repeated(s, rho, agg, maps, NmrOptions{}, 0), Error);
}

TEST_CASE("repetitions use consecutive seeds") {
  const auto s = kcbs_twin_scenario();
  const auto agg = scenario_observable(s);
  const auto maps = builtin_mappings(3);
  NmrOptions opt;
  opt.shots = 1000;
  opt.seed = 10;
  const auto rho = pure_at(s, 60);
  const auto rep = measure_repeated(s, rho, agg, maps, opt, 4);
  REQUIRE(rep.runs.size() == 4);
  double sum = 0.0;
  for (std::size_t k = 0; k < 4; ++k) {
    CHECK(rep.runs[k].seed == 10 + k);
    opt.seed = 10 + k;
    CHECK(rep.runs[k].value == measure_inequality_nmr(s, rho, agg, maps, opt).value);
    sum += rep.runs[k].value;
  }
  CHECK_THAT(rep.mean, WithinAbs(sum / 4, 1e-15));
  CHECK(rep.stderr_of_mean > 0.0);
}
