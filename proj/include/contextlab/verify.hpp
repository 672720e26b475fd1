#pragma once

// The identity suite behind `contextlab verify`: projector expansions,
// aggregate observables, exclusivity, graph bounds, closed forms and the
// readout-mapping contracts.

#include <cstdio>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "contextlab/graph.hpp"
#include "contextlab/hilbert.hpp"
#include "contextlab/nmrsim.hpp"
#include "contextlab/pauli.hpp"
#include "contextlab/printed_expansions.hpp"
#include "contextlab/random.hpp"
#include "contextlab/scenario.hpp"

namespace contextlab {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct VerificationReport {
  std::vector<CheckResult> checks;
  std::vector<std::string> notes;
  std::vector<std::string> summary;

  bool all_passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
  }
  void add(std::string name, bool passed, std::string detail = {}) {
    checks.push_back({std::move(name), passed, std::move(detail)});
  }
};

namespace detail {

inline std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

}  // namespace detail

/// Decomposes every projector of `s`, checks the reconstruction, and compares
/// against a printed table when one is supplied. Returns the number verified.
inline std::size_t verify_projector_expansions(const ContextualityScenario& s,
                                               const std::vector<PrintedExpansion>* printed,
                                               VerificationReport& report, double tol = 1e-10) {
  std::size_t ok = 0;
  const double d = static_cast<double>(s.dim());
  for (std::size_t j = 0; j < s.size(); ++j) {
    const std::string tag = s.name() + " Pi_" + std::to_string(j);
    const PauliPolynomial derived = decompose(s.projectors()[j]);
    const double err = max_abs_diff(reconstruct(derived), s.projectors()[j]);
    const double id_err = std::abs(derived.identity_coefficient() - 1.0 / d);
    const bool pass = err < tol && id_err < 1e-12;
    report.add(tag + " expansion reconstructs projector", pass,
               "max entry error " + detail::sci(err) + ", identity coefficient error " + detail::sci(id_err));
    if (pass) ++ok;
    if (printed != nullptr && j < printed->size()) {
      const PauliPolynomial table = (*printed)[j].polynomial();
      const double table_err = max_abs_diff(reconstruct(table), s.projectors()[j]);
      for (const auto& m : compare_terms(derived, table, tol)) {
        report.notes.push_back(tag + ": printed term " + table_name(m.label) + " (" + m.label + ") has coefficient " +
                               detail::sci(m.printed) + ", vectors give " + detail::sci(m.derived));
      }
      if (table_err >= tol) {
        report.notes.push_back(tag + ": printed expansion deviates from the projector by " + detail::sci(table_err) +
                               "; derived expansion used");
      }
    }
  }
  return ok;
}

inline void verify_aggregate(const ContextualityScenario& s, const PauliPolynomial& expected,
                             VerificationReport& report, double tol = 1e-10) {
  const PauliPolynomial agg = scenario_observable(s);
  const auto diff = compare_terms(agg, expected, tol);
  std::string detail;
  for (const auto& m : diff) detail += m.label + ": " + detail::sci(m.derived) + " vs " + detail::sci(m.printed) + "; ";
  report.add(s.name() + " aggregate observable coefficients", diff.empty(), detail);
}

inline void verify_scenario_structure(const ContextualityScenario& s, VerificationReport& report) {
  const auto ex = validate_exclusivity(s);
  for (std::size_t c = 0; c < ex.contexts.size(); ++c) {
    if (!ex.contexts[c].orthogonal) {
      report.add(s.name() + " context " + std::to_string(c) + " orthogonality", false,
                 "max overlap " + detail::sci(ex.contexts[c].max_overlap));
    }
  }
  if (ex.all_orthogonal()) report.add(s.name() + " contexts pairwise orthogonal", true);
  if (s.evaluation() == EvaluationMode::contexts) {
    report.add(s.name() + " context probabilities sum to one on the reference state", ex.all_sum_to_one());
  }

  const double qv = evaluate(s, DensityOperator::pure(s.reference_state()));
  report.add(s.name() + " quantum value on reference state within declared GP bound", qv <= s.bounds().gp + 1e-9,
             "value " + detail::sci(qv) + ", gp " + detail::sci(s.bounds().gp));

  const auto w = s.projector_weights();
  const bool unit_weights = std::all_of(w.begin(), w.end(), [](double x) { return std::abs(x - 1.0) < 1e-12; });
  const auto g = build_graph(s.vectors());
  if (unit_weights && g.n_vertices() <= kVertexBudget) {
    const auto b = compute_bounds(g);
    report.add(s.name() + " independence number equals declared NCHV bound",
               std::abs(static_cast<double>(b.independence_number) - s.bounds().nchv) < 1e-9,
               "alpha " + std::to_string(b.independence_number));
    report.add(s.name() + " fractional packing number equals declared GP bound",
               std::abs(b.fractional_packing - s.bounds().gp) < 1e-9, "alpha* " + detail::sci(b.fractional_packing));
  }

  // Edges of the orthogonality graph not covered by any declared context.
  std::size_t extra = 0;
  for (auto [a, b] : g.edges()) {
    bool covered = false;
    for (const auto& ctx : s.contexts()) {
      const bool ha = std::find(ctx.begin(), ctx.end(), a) != ctx.end();
      const bool hb = std::find(ctx.begin(), ctx.end(), b) != ctx.end();
      if (ha && hb) covered = true;
    }
    if (!covered) ++extra;
  }
  report.notes.push_back(s.name() + ": orthogonality graph has " + std::to_string(g.edges().size()) + " edges, " +
                         std::to_string(extra) + " outside the declared contexts");

  if (s.closed_form()) {
    const double dev = closed_form_deviation(s);
    report.add(s.name() + " closed-form sweep matches direct evaluation", dev < 1e-9, "max deviation " + detail::sci(dev));
  }
}

inline void verify_mappings(std::size_t n_qubits, VerificationReport& report, std::uint64_t seed, std::size_t samples = 100) {
  std::mt19937_64 rng(seed);
  std::vector<DensityOperator> states;
  for (std::size_t k = 0; k < samples; ++k) states.push_back(random_density_operator(std::size_t{1} << n_qubits, rng));
  for (const auto& m : builtin_mappings(n_qubits)) {
    double worst = 0.0;
    for (const auto& rho : states) worst = std::max(worst, m.contract_error(rho));
    report.add("mapping " + m.describe(), worst < 1e-10, "max error " + detail::sci(worst));
  }
}

/// Full suite over the built-in scenarios, plus structural checks on `extra` when given.
inline VerificationReport run_verification(const std::optional<ContextualityScenario>& extra = std::nullopt,
                                           std::uint64_t seed = 7) {
  VerificationReport report;
  const auto k = kcbs_twin_scenario();
  const auto c = c4_scenario();

  const std::size_t nk = verify_projector_expansions(k, &kcbs_twin_printed_expansions(), report);
  const std::size_t nc = verify_projector_expansions(c, &c4_printed_expansions(), report);
  report.summary.push_back(std::to_string(nk + nc) + "/" + std::to_string(k.size() + c.size()) +
                           " projector decompositions verified");

  verify_aggregate(k, kcbs_twin_printed_aggregate(), report);
  verify_aggregate(c, c4_printed_aggregate(), report);

  verify_scenario_structure(k, report);
  verify_scenario_structure(c, report);

  const auto pentagon = compute_bounds(pentagon_graph());
  report.add("pentagon bounds alpha = 2, alpha* = 5/2",
             pentagon.independence_number == 2 && std::abs(pentagon.fractional_packing - 2.5) < 1e-9);

  for (const auto* s : {&k, &c}) {
    const double qv = evaluate(*s, DensityOperator::pure(s->reference_state()));
    report.add(s->name() + " quantum value saturates the GP bound", std::abs(qv - s->bounds().gp) < 1e-9,
               "value " + detail::sci(qv));
  }

  const std::size_t before = report.checks.size();
  verify_mappings(3, report, seed);
  verify_mappings(2, report, seed + 1);
  std::size_t mapped_ok = 0;
  for (std::size_t i = before; i < report.checks.size(); ++i) mapped_ok += report.checks[i].passed ? 1 : 0;
  report.summary.push_back(std::to_string(mapped_ok) + "/" + std::to_string(report.checks.size() - before) +
                           " readout mappings verified");

  if (extra) {
    verify_projector_expansions(*extra, nullptr, report);
    verify_scenario_structure(*extra, report);
  }

  std::size_t passed = 0;
  for (const auto& ch : report.checks) passed += ch.passed ? 1 : 0;
  report.summary.push_back(std::to_string(passed) + "/" + std::to_string(report.checks.size()) + " checks passed");
  return report;
}

}  // namespace contextlab
