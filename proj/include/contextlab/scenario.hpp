#pragma once

// Contextuality scenarios: projector vectors, measurement contexts, the
// declared bound hierarchy and a reference state, plus evaluation of the
// inequality on arbitrary states and along a one-qubit rotation sweep.

#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "contextlab/error.hpp"
#include "contextlab/graph.hpp"
#include "contextlab/hilbert.hpp"
#include "contextlab/pauli.hpp"

namespace contextlab {

struct BoundHierarchy {
  double nchv = 0.0;
  double qm = 0.0;
  double gp = 0.0;
};

/// How probabilities are combined into the inequality value.
enum class EvaluationMode {
  contexts,    // weight * sum over contexts of sum over members
  projectors,  // plain sum over all projectors; contexts only carry exclusivity
};

/// value(theta) = offset + amplitude * cos(theta) along the rotation sweep.
struct ClosedForm {
  double offset = 0.0;
  double amplitude = 0.0;
  double operator()(double theta_rad) const { return offset + amplitude * std::cos(theta_rad); }
};

struct ScenarioSpec {
  std::string name;
  std::vector<StateVector> vectors;
  std::vector<std::vector<std::size_t>> contexts;
  double context_weight = 1.0;
  EvaluationMode evaluation = EvaluationMode::contexts;
  StateVector reference_state;
  BoundHierarchy bounds;
  std::optional<ClosedForm> closed_form;
  std::vector<double> sweep_grid_deg;
};

class ContextualityScenario {
 public:
  explicit ContextualityScenario(ScenarioSpec spec) : s_(std::move(spec)) {
    const std::string where = "scenario '" + s_.name + "': ";
    if (s_.vectors.empty()) throw ScenarioError(where + "no vectors");
    dim_ = s_.vectors.front().dim();
    if (dim_ == 0) throw ScenarioError(where + "zero-dimensional vectors");
    for (std::size_t i = 0; i < s_.vectors.size(); ++i) {
      const auto& v = s_.vectors[i];
      if (v.dim() != dim_) throw ScenarioError(where + "vector " + std::to_string(i) + " has the wrong dimension");
      if (v.norm() == 0.0) throw ScenarioError(where + "vector " + std::to_string(i) + " is zero");
      if (!v.is_normalized()) {
        throw ScenarioError(where + "vector " + std::to_string(i) + " is not normalized (norm " +
                            std::to_string(v.norm()) + ")");
      }
    }
    if (s_.contexts.empty()) throw ScenarioError(where + "no contexts");
    for (std::size_t c = 0; c < s_.contexts.size(); ++c) {
      if (s_.contexts[c].empty()) throw ScenarioError(where + "context " + std::to_string(c) + " is empty");
      for (auto idx : s_.contexts[c]) {
        if (idx >= s_.vectors.size()) {
          throw ScenarioError(where + "context " + std::to_string(c) + " refers to vector " + std::to_string(idx));
        }
      }
    }
    if (s_.reference_state.dim() != dim_) throw ScenarioError(where + "reference state has the wrong dimension");
    if (!s_.reference_state.is_normalized()) throw ScenarioError(where + "reference state is not normalized");
    if (!(s_.context_weight > 0.0) || !std::isfinite(s_.context_weight)) {
      throw ScenarioError(where + "context weight must be positive");
    }
    if (!(s_.bounds.nchv <= s_.bounds.qm && s_.bounds.qm <= s_.bounds.gp)) {
      throw ScenarioError(where + "bounds must satisfy nchv <= qm <= gp");
    }
    projectors_.reserve(s_.vectors.size());
    for (const auto& v : s_.vectors) projectors_.push_back(projector_from_vector(v));
  }

  const std::string& name() const { return s_.name; }
  std::size_t dim() const { return dim_; }
  std::size_t size() const { return s_.vectors.size(); }
  const std::vector<StateVector>& vectors() const { return s_.vectors; }
  const std::vector<ComplexMatrix>& projectors() const { return projectors_; }
  const std::vector<std::vector<std::size_t>>& contexts() const { return s_.contexts; }
  double context_weight() const { return s_.context_weight; }
  EvaluationMode evaluation() const { return s_.evaluation; }
  const StateVector& reference_state() const { return s_.reference_state; }
  const BoundHierarchy& bounds() const { return s_.bounds; }
  const std::optional<ClosedForm>& closed_form() const { return s_.closed_form; }
  const std::vector<double>& sweep_grid_deg() const { return s_.sweep_grid_deg; }
  const ScenarioSpec& spec() const { return s_; }

  /// Coefficient of Tr[rho Pi_j] in the inequality value.
  std::vector<double> projector_weights() const {
    std::vector<double> w(size(), 0.0);
    if (s_.evaluation == EvaluationMode::projectors) {
      std::fill(w.begin(), w.end(), 1.0);
    } else {
      for (const auto& ctx : s_.contexts) {
        for (auto j : ctx) w[j] += s_.context_weight;
      }
    }
    return w;
  }

 private:
  ScenarioSpec s_;
  std::size_t dim_ = 0;
  std::vector<ComplexMatrix> projectors_;
};

/// Ten projectors on three qubits in five four-element contexts.
inline ContextualityScenario kcbs_twin_scenario() {
  const double r2 = std::numbers::sqrt2;
  const double r3 = std::numbers::sqrt3;
  const double s8 = 1.0 / std::sqrt(8.0);
  ScenarioSpec s;
  s.name = "kcbs-twin";
  s.vectors = {
      StateVector::from_real({r2, -r2, 0, 0, 2, 0, 0, 0}, s8),
      StateVector::from_real({r2, 0, 0, r2, -1, r3, 0, 0}, s8),
      StateVector::from_real({1, -1, -1, -1, 0, 0, 0, 0}, 0.5),
      StateVector::from_real({1, -1, 1, 1, 0, 0, 0, 0}, 0.5),
      StateVector::from_real({r2, 0, 0, -r2, -1, r3, 0, 0}, s8),
      StateVector::from_real({r2, 0, -r2, 0, -1, -r3, 0, 0}, s8),
      StateVector::from_real({r2, 0, r2, 0, -1, -r3, 0, 0}, s8),
      StateVector::from_real({1, 1, 1, -1, 0, 0, 0, 0}, 0.5),
      StateVector::from_real({r2, r2, 0, 0, 2, 0, 0, 0}, s8),
      StateVector::from_real({1, 1, -1, 1, 0, 0, 0, 0}, 0.5),
  };
  // M_i = {i, i+1, i+5, i+7}, with the first pair wrapping in 0..4 and the
  // second in 5..9 (so 4+1 = 0 and 3+7 = 5).
  for (std::size_t i = 0; i < 5; ++i) s.contexts.push_back({i, (i + 1) % 5, 5 + i % 5, 5 + (i + 2) % 5});
  s.context_weight = 0.5;
  s.evaluation = EvaluationMode::contexts;
  s.reference_state = StateVector::basis(8, 0);
  s.bounds = {2.0, 2.5, 2.5};
  s.closed_form = ClosedForm{2.0, 0.5};
  s.sweep_grid_deg = {180, 120, 90, 60, 45, 36, 0};
  return ContextualityScenario(std::move(s));
}

/// Ten projectors on two qubits, each measured as its own binary test.
inline ContextualityScenario c4_scenario() {
  const double h = 1.0 / std::numbers::sqrt2;
  ScenarioSpec s;
  s.name = "c4";
  s.vectors = {
      StateVector::from_real({0, 0, 1, 1}, h),     StateVector::from_real({1, -1, 1, -1}, 0.5),
      StateVector::from_real({1, -1, -1, 1}, 0.5), StateVector::from_real({1, 0, 0, -1}, h),
      StateVector::from_real({1, 1, 1, 1}, 0.5),   StateVector::from_real({0, 1, 0, -1}, h),
      StateVector::from_real({-1, 1, 1, 1}, 0.5),  StateVector::from_real({1, 0, 0, 1}, h),
      StateVector::from_real({1, 1, 1, -1}, 0.5),  StateVector::from_real({1, 1, -1, 1}, 0.5),
  };
  // Exclusivity structure is whatever the vectors say it is.
  const auto g = build_graph(s.vectors);
  for (auto [a, b] : g.edges()) s.contexts.push_back({a, b});
  s.context_weight = 1.0;
  s.evaluation = EvaluationMode::projectors;
  s.reference_state = StateVector::basis(4, 3);
  s.bounds = {3.0, 3.5, 3.5};
  s.closed_form = ClosedForm{2.75, 0.75};
  s.sweep_grid_deg = {180, 120, 90, 69.23, 60, 45, 30, 0};
  return ContextualityScenario(std::move(s));
}

inline std::vector<std::string> builtin_scenario_names() { return {"kcbs-twin", "c4"}; }

inline std::optional<ContextualityScenario> builtin_scenario(const std::string& name) {
  if (name == "kcbs-twin") return kcbs_twin_scenario();
  if (name == "c4") return c4_scenario();
  return std::nullopt;
}

struct ContextCheck {
  std::vector<std::size_t> members;
  double max_overlap = 0.0;       // max |<v_a|v_b>| over distinct members
  double probability_sum = 0.0;   // sum of |<v_j|ref>|^2
  bool orthogonal = false;
  bool sums_to_one = false;
};

struct ExclusivityReport {
  std::vector<ContextCheck> contexts;
  double total_probability = 0.0;  // sum over every projector on the reference state

  bool all_orthogonal() const {
    return std::all_of(contexts.begin(), contexts.end(), [](const auto& c) { return c.orthogonal; });
  }
  bool all_sum_to_one() const {
    return std::all_of(contexts.begin(), contexts.end(), [](const auto& c) { return c.sums_to_one; });
  }
};

inline ExclusivityReport validate_exclusivity(const ContextualityScenario& s, double tol = kDefaultTolerance) {
  ExclusivityReport r;
  const auto& v = s.vectors();
  const auto& ref = s.reference_state();
  for (const auto& ctx : s.contexts()) {
    ContextCheck c;
    c.members = ctx;
    for (std::size_t a = 0; a < ctx.size(); ++a) {
      for (std::size_t b = a + 1; b < ctx.size(); ++b) {
        c.max_overlap = std::max(c.max_overlap, std::abs(v[ctx[a]].inner(v[ctx[b]])));
      }
      c.probability_sum += std::norm(v[ctx[a]].inner(ref));
    }
    c.orthogonal = c.max_overlap < tol;
    c.sums_to_one = std::abs(c.probability_sum - 1.0) < tol;
    r.contexts.push_back(std::move(c));
  }
  for (const auto& vec : v) r.total_probability += std::norm(vec.inner(ref));
  return r;
}

/// Inequality value on `state`, straight from the projectors.
inline double evaluate(const ContextualityScenario& s, const DensityOperator& state) {
  if (state.dim() != s.dim()) {
    throw DimensionError("state dimension " + std::to_string(state.dim()) + " does not match scenario dimension " +
                         std::to_string(s.dim()));
  }
  std::vector<double> prob(s.size());
  for (std::size_t j = 0; j < s.size(); ++j) prob[j] = expectation(state, s.projectors()[j]);
  double value = 0.0;
  if (s.evaluation() == EvaluationMode::projectors) {
    for (double p : prob) value += p;
  } else {
    for (const auto& ctx : s.contexts()) {
      double ctx_sum = 0.0;
      for (auto j : ctx) ctx_sum += prob[j];
      value += s.context_weight() * ctx_sum;
    }
  }
  return value;
}

/// decompose(weight * sum_j w_j Pi_j) with w_j the scenario's projector weights.
/// Defaults weight to the Hilbert-space dimension.
inline PauliPolynomial scenario_observable(const ContextualityScenario& s, std::optional<double> weight = {}) {
  const double scale = weight.value_or(static_cast<double>(s.dim()));
  const auto w = s.projector_weights();
  ComplexMatrix sum = ComplexMatrix::Zero(static_cast<Eigen::Index>(s.dim()), static_cast<Eigen::Index>(s.dim()));
  for (std::size_t j = 0; j < s.size(); ++j) sum += w[j] * s.projectors()[j];
  return decompose(scale * sum);
}

/// (1/divisor) Tr[reconstruct(agg) rho].
inline double evaluate_via_pauli(const ContextualityScenario& s, const DensityOperator& state,
                                 const PauliPolynomial& agg, double divisor) {
  if (divisor == 0.0) throw Error("divisor must be non-zero");
  if (state.dim() != s.dim()) throw DimensionError("state dimension does not match scenario dimension");
  const ComplexMatrix obs = reconstruct(agg);
  if (static_cast<std::size_t>(obs.rows()) != s.dim()) {
    throw DimensionError("observable acts on " + std::to_string(agg.n_qubits()) + " qubits, scenario needs " +
                         std::to_string(qubit_count(s.dim())));
  }
  return expectation(state, obs) / divisor;
}

/// Reference state rotated by theta (radians) on qubit 0.
inline StateVector rotated_reference(const ContextualityScenario& s, double theta_rad) {
  return s.reference_state().evolved(embed_rotation(theta_rad, 0, qubit_count(s.dim())));
}

struct SweepRecord {
  double theta_deg = 0.0;
  double value = 0.0;
  std::optional<double> closed_form_value;
};

inline std::vector<SweepRecord> rotation_sweep(const ContextualityScenario& s, const std::vector<double>& thetas_deg) {
  std::vector<SweepRecord> out;
  out.reserve(thetas_deg.size());
  for (double deg : thetas_deg) {
    const double rad = degrees_to_radians(deg);
    SweepRecord r;
    r.theta_deg = deg;
    r.value = evaluate(s, DensityOperator::pure(rotated_reference(s, rad)));
    if (s.closed_form()) r.closed_form_value = (*s.closed_form())(rad);
    out.push_back(r);
  }
  return out;
}

/// Largest |direct - closed form| over an integer-degree grid on [0, 360).
/// Infinity when the scenario has no closed form.
inline double closed_form_deviation(const ContextualityScenario& s, double step_deg = 1.0) {
  if (!s.closed_form()) return INFINITY;
  std::vector<double> grid;
  for (double d = 0.0; d < 360.0; d += step_deg) grid.push_back(d);
  double worst = 0.0;
  for (const auto& r : rotation_sweep(s, grid)) worst = std::max(worst, std::abs(r.value - *r.closed_form_value));
  return worst;
}

// --- JSON ---------------------------------------------------------------

namespace detail {

inline nlohmann::json vector_to_json(const StateVector& v) {
  nlohmann::json arr = nlohmann::json::array();
  for (std::size_t i = 0; i < v.dim(); ++i) arr.push_back({v[i].real(), v[i].imag()});
  return arr;
}

inline StateVector vector_from_json(const nlohmann::json& j) {
  if (!j.is_array()) throw ScenarioError("vector must be an array of [re, im] pairs");
  ComplexVector amps(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    const auto& e = j[i];
    if (e.is_number()) {
      amps(static_cast<Eigen::Index>(i)) = Complex(e.get<double>(), 0.0);
    } else if (e.is_array() && e.size() == 2) {
      amps(static_cast<Eigen::Index>(i)) = Complex(e[0].get<double>(), e[1].get<double>());
    } else {
      throw ScenarioError("vector component " + std::to_string(i) + " must be [re, im]");
    }
  }
  return StateVector(std::move(amps));
}

}  // namespace detail

inline void to_json(nlohmann::json& j, const ContextualityScenario& s) {
  nlohmann::json vectors = nlohmann::json::array();
  for (const auto& v : s.vectors()) vectors.push_back(detail::vector_to_json(v));
  j = nlohmann::json{{"name", s.name()},
                     {"dim", s.dim()},
                     {"vectors", vectors},
                     {"contexts", s.contexts()},
                     {"context_weight", s.context_weight()},
                     {"evaluation", s.evaluation() == EvaluationMode::contexts ? "contexts" : "projectors"},
                     {"reference_state", detail::vector_to_json(s.reference_state())},
                     {"bounds", {{"nchv", s.bounds().nchv}, {"qm", s.bounds().qm}, {"gp", s.bounds().gp}}}};
  if (s.closed_form()) j["closed_form"] = {{"offset", s.closed_form()->offset}, {"amplitude", s.closed_form()->amplitude}};
  if (!s.sweep_grid_deg().empty()) j["sweep_grid"] = s.sweep_grid_deg();
}

/// Parses the scenario schema; every structural problem surfaces as ScenarioError.
inline ContextualityScenario scenario_from_json(const nlohmann::json& j) {
  try {
    ScenarioSpec s;
    s.name = j.at("name").get<std::string>();
    for (const auto& v : j.at("vectors")) s.vectors.push_back(detail::vector_from_json(v));
    s.contexts = j.at("contexts").get<std::vector<std::vector<std::size_t>>>();
    s.context_weight = j.at("context_weight").get<double>();
    const std::string mode = j.value("evaluation", std::string("contexts"));
    if (mode == "contexts") {
      s.evaluation = EvaluationMode::contexts;
    } else if (mode == "projectors") {
      s.evaluation = EvaluationMode::projectors;
    } else {
      throw ScenarioError("unknown evaluation mode '" + mode + "'");
    }
    s.reference_state = detail::vector_from_json(j.at("reference_state"));
    const auto& b = j.at("bounds");
    s.bounds = {b.at("nchv").get<double>(), b.at("qm").get<double>(), b.at("gp").get<double>()};
    if (j.contains("closed_form")) {
      s.closed_form = ClosedForm{j["closed_form"].at("offset").get<double>(),
                                 j["closed_form"].at("amplitude").get<double>()};
    }
    if (j.contains("sweep_grid")) s.sweep_grid_deg = j["sweep_grid"].get<std::vector<double>>();
    ContextualityScenario out(std::move(s));
    if (j.contains("dim") && j["dim"].get<std::size_t>() != out.dim()) {
      throw ScenarioError("declared dim " + std::to_string(j["dim"].get<std::size_t>()) +
                          " does not match vector dimension " + std::to_string(out.dim()));
    }
    return out;
  } catch (const nlohmann::json::exception& e) {
    throw ScenarioError(std::string("malformed scenario JSON: ") + e.what());
  }
}

}  // namespace contextlab
