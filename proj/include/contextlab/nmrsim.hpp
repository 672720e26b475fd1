#pragma once

// NMR readout simulation. Each multi-qubit Pauli observable P is measured as
// a single-qubit sigma_z after a mapping unitary U with U^dagger Z_k U = P,
// on a pseudopure ensemble state, with optional binomial shot noise.

#include <cmath>
#include <cstdint>
#include <map>
#include <numbers>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "contextlab/error.hpp"
#include "contextlab/hilbert.hpp"
#include "contextlab/pauli.hpp"
#include "contextlab/scenario.hpp"

namespace contextlab {

enum class GateKind { identity, cnot, x90, y90 };

/// One gate of a mapping sequence. Qubit indices are 0-based, qubit 0 being
/// the most significant (labelled "1" in printed tables).
struct GateStep {
  GateKind kind = GateKind::identity;
  std::size_t qubit = 0;   // control for CNOT
  std::size_t target = 0;  // CNOT only
  int sign = +1;           // rotation phase: +1 for x / y, -1 for -x / -y

  static GateStep identity() { return {}; }
  static GateStep cnot(std::size_t control, std::size_t target) { return {GateKind::cnot, control, target, +1}; }
  static GateStep x90(std::size_t qubit, int sign = +1) { return {GateKind::x90, qubit, 0, sign}; }
  static GateStep y90(std::size_t qubit, int sign = +1) { return {GateKind::y90, qubit, 0, sign}; }

  std::string label() const {
    switch (kind) {
      case GateKind::identity: return "Identity";
      case GateKind::cnot: return "CNOT_" + std::to_string(qubit + 1) + std::to_string(target + 1);
      case GateKind::x90: return (sign > 0 ? "X_" : "Xbar_") + std::to_string(qubit + 1);
      case GateKind::y90: return (sign > 0 ? "Y_" : "Ybar_") + std::to_string(qubit + 1);
    }
    return "?";
  }
};

namespace detail {

inline ComplexMatrix single_qubit_on(const ComplexMatrix& gate, std::size_t qubit, std::size_t n) {
  ComplexMatrix out = identity(1);
  const ComplexMatrix id2 = identity(2);
  for (std::size_t q = 0; q < n; ++q) out = tensor_product(out, q == qubit ? gate : id2);
  return out;
}

/// exp(-i sign (pi/4) sigma).
inline ComplexMatrix quarter_turn(char axis, int sign) {
  const double h = 1.0 / std::numbers::sqrt2;
  return h * identity(2) - Complex(0.0, sign * h) * single_qubit_pauli(axis);
}

}  // namespace detail

inline ComplexMatrix gate_matrix(const GateStep& g, std::size_t n_qubits) {
  const auto check = [&](std::size_t q) {
    if (q >= n_qubits) {
      throw IndexError("gate " + g.label() + " refers to qubit " + std::to_string(q + 1) + " of " +
                       std::to_string(n_qubits));
    }
  };
  const std::size_t dim = std::size_t{1} << n_qubits;
  switch (g.kind) {
    case GateKind::identity: return identity(dim);
    case GateKind::x90:
    case GateKind::y90:
      check(g.qubit);
      if (g.sign != 1 && g.sign != -1) throw Error("rotation sign must be +1 or -1");
      return detail::single_qubit_on(detail::quarter_turn(g.kind == GateKind::x90 ? 'X' : 'Y', g.sign), g.qubit,
                                     n_qubits);
    case GateKind::cnot: {
      check(g.qubit);
      check(g.target);
      if (g.qubit == g.target) throw IndexError("CNOT control and target coincide");
      ComplexMatrix u = ComplexMatrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
      const std::size_t cbit = std::size_t{1} << (n_qubits - 1 - g.qubit);
      const std::size_t tbit = std::size_t{1} << (n_qubits - 1 - g.target);
      for (std::size_t k = 0; k < dim; ++k) {
        const std::size_t out = (k & cbit) ? (k ^ tbit) : k;
        u(static_cast<Eigen::Index>(out), static_cast<Eigen::Index>(k)) = 1.0;
      }
      return u;
    }
  }
  throw Error("unknown gate kind");
}

/// Steps are listed in the order they act: the result is G_last ... G_first.
inline ComplexMatrix compose_unitary(std::span<const GateStep> steps, std::size_t n_qubits) {
  if (n_qubits == 0) throw Error("need at least one qubit");
  ComplexMatrix u = identity(std::size_t{1} << n_qubits);
  for (const auto& g : steps) u = gate_matrix(g, n_qubits) * u;
  return u;
}

inline ComplexMatrix sigma_z_on(std::size_t qubit, std::size_t n_qubits) {
  if (qubit >= n_qubits) throw IndexError("readout qubit out of range");
  std::string label(n_qubits, 'I');
  label[qubit] = 'Z';
  return pauli_matrix(PauliString(label));
}

struct MeasurementMapping {
  PauliString observable;
  std::vector<GateStep> steps;
  std::size_t readout_qubit = 0;

  std::size_t n_qubits() const { return observable.size(); }
  ComplexMatrix unitary() const { return compose_unitary(steps, n_qubits()); }

  /// Tr[(U rho U^dagger) Z_readout].
  double readout(const DensityOperator& rho) const {
    return expectation(rho.evolved(unitary()), sigma_z_on(readout_qubit, n_qubits()));
  }

  /// |readout(rho) - Tr[rho P]|; zero (to rounding) for a correct mapping.
  double contract_error(const DensityOperator& rho) const {
    return std::abs(readout(rho) - expectation(rho, pauli_matrix(observable)));
  }

  std::string describe() const {
    std::string s = observable.label() + " <- ";
    for (std::size_t i = steps.size(); i-- > 0;) {
      s += steps[i].label();
      if (i != 0) s += ".";
    }
    return s + " ; read Z_" + std::to_string(readout_qubit + 1);
  }
};

/// Mapping tables for three qubits (seven Z-type observables) and two qubits (five observables).
inline std::vector<MeasurementMapping> builtin_mappings(std::size_t n_qubits) {
  using G = GateStep;
  const auto m = [](const char* obs, std::vector<GateStep> steps, std::size_t readout) {
    return MeasurementMapping{PauliString(obs), std::move(steps), readout};
  };
  if (n_qubits == 3) {
    return {
        m("IIZ", {G::identity()}, 2),
        m("IZI", {G::identity()}, 1),
        m("IZZ", {G::cnot(1, 2)}, 2),
        m("ZII", {G::identity()}, 0),
        m("ZIZ", {G::cnot(0, 2)}, 2),
        m("ZZI", {G::cnot(0, 1)}, 1),
        m("ZZZ", {G::cnot(0, 1), G::cnot(1, 2)}, 2),
    };
  }
  if (n_qubits == 2) {
    return {
        m("XX", {G::y90(0), G::y90(1), G::cnot(0, 1)}, 1),
        m("YY", {G::x90(0, -1), G::x90(1, -1), G::cnot(0, 1)}, 1),
        m("ZI", {G::identity()}, 0),
        m("ZZ", {G::cnot(0, 1)}, 1),
        m("IZ", {G::identity()}, 1),
    };
  }
  throw Error("no built-in mapping table for " + std::to_string(n_qubits) + " qubits (supported: 2, 3)");
}

struct PseudopureModel {
  double epsilon = 1.0;
  std::size_t n_qubits = 0;
};

/// (1 - eps)/2^n * I + eps |pure><pure|.
inline DensityOperator pps_state(const StateVector& pure, const PseudopureModel& model) {
  if (!(model.epsilon > 0.0 && model.epsilon <= 1.0)) {
    throw Error("polarization epsilon must lie in (0, 1], got " + std::to_string(model.epsilon));
  }
  const std::size_t dim = std::size_t{1} << model.n_qubits;
  if (pure.dim() != dim) {
    throw DimensionError("pure state has dimension " + std::to_string(pure.dim()) + ", model expects " +
                         std::to_string(dim));
  }
  ComplexMatrix m = (1.0 - model.epsilon) / static_cast<double>(dim) * identity(dim) +
                    model.epsilon * projector_from_vector(pure);
  return DensityOperator(std::move(m));
}

struct NmrOptions {
  std::optional<std::int64_t> shots;  // nullopt: exact expectations
  std::uint64_t seed = 0;
  double epsilon = 1.0;   // used for normalization and reported
  bool normalize = true;  // divide traceless expectations by epsilon
  bool strict = false;    // unmapped terms are an error instead of being evaluated exactly
  std::optional<double> divisor;  // defaults to the scenario dimension
};

struct TermReading {
  double exact = 0.0;             // as it enters the sum (after normalization)
  std::optional<double> sampled;  // likewise; absent in exact mode
  double variance = 0.0;          // of `sampled` as an estimate
  bool mapped = true;
};

struct NmrResult {
  double value = 0.0;
  double standard_error = 0.0;
  std::map<std::string, TermReading> per_term;
  std::vector<std::string> unmapped;
  double epsilon = 1.0;
  bool normalized = true;
  std::optional<std::int64_t> shots;
  std::uint64_t seed = 0;
};

/// Estimates (1/divisor) * Tr[agg rho] term by term through the mapping table.
/// The identity term is added as a constant; every other term is read out as
/// sigma_z on the mapped state, optionally replaced by a mean of `shots`
/// +-1 outcomes drawn with the exact probabilities.
inline NmrResult measure_inequality_nmr(const ContextualityScenario& s, const DensityOperator& state,
                                        const PauliPolynomial& agg, std::span<const MeasurementMapping> mappings,
                                        const NmrOptions& opt) {
  if (state.dim() != s.dim()) throw DimensionError("state dimension does not match scenario");
  if (agg.n_qubits() != qubit_count(s.dim())) throw DimensionError("observable does not act on the scenario qubits");
  if (opt.shots && *opt.shots < 1) throw Error("shots must be at least 1");
  if (!(opt.epsilon > 0.0 && opt.epsilon <= 1.0)) throw Error("epsilon must lie in (0, 1]");
  const double divisor = opt.divisor.value_or(static_cast<double>(s.dim()));
  if (divisor == 0.0) throw Error("divisor must be non-zero");

  NmrResult r;
  r.epsilon = opt.epsilon;
  r.normalized = opt.normalize;
  r.shots = opt.shots;
  r.seed = opt.seed;

  const double scale = opt.normalize ? 1.0 / opt.epsilon : 1.0;
  std::mt19937_64 rng(opt.seed);
  double total = agg.identity_coefficient();
  double variance = 0.0;

  for (const auto& [p, c] : agg.non_identity_terms()) {
    const MeasurementMapping* mapping = nullptr;
    for (const auto& m : mappings) {
      if (m.observable == p) {
        mapping = &m;
        break;
      }
    }
    TermReading t;
    double raw = 0.0;
    if (mapping != nullptr) {
      raw = mapping->readout(state);
    } else {
      if (opt.strict) throw MappingError("no readout mapping for observable " + p.label());
      raw = expectation(state, pauli_matrix(p));
      t.mapped = false;
      r.unmapped.push_back(p.label());
    }
    t.exact = raw * scale;
    double used = t.exact;
    if (opt.shots && t.mapped) {
      const std::int64_t n = *opt.shots;
      const double prob_up = std::clamp((1.0 + raw) / 2.0, 0.0, 1.0);
      std::binomial_distribution<std::int64_t> draw(n, prob_up);
      const std::int64_t ups = draw(rng);
      const double mean = static_cast<double>(2 * ups - n) / static_cast<double>(n);
      t.sampled = mean * scale;
      t.variance = (1.0 - mean * mean) / static_cast<double>(n) * scale * scale;
      used = *t.sampled;
      variance += c * c * t.variance;
    }
    total += c * used;
    r.per_term.emplace(p.label(), t);
  }
  r.value = total / divisor;
  r.standard_error = std::sqrt(variance) / std::abs(divisor);
  return r;
}

struct RepeatedNmrResult {
  std::vector<NmrResult> runs;
  double mean = 0.0;
  double stderr_of_mean = 0.0;  // sample std across runs / sqrt(runs); 0 for a single run
};

/// Independent repetitions with seeds seed, seed + 1, ...
inline RepeatedNmrResult measure_repeated(const ContextualityScenario& s, const DensityOperator& state,
                                          const PauliPolynomial& agg, std::span<const MeasurementMapping> mappings,
                                          NmrOptions opt, std::size_t repetitions) {
  if (repetitions == 0) throw Error("need at least one repetition");
  RepeatedNmrResult out;
  const std::uint64_t base = opt.seed;
  for (std::size_t k = 0; k < repetitions; ++k) {
    opt.seed = base + k;
    out.runs.push_back(measure_inequality_nmr(s, state, agg, mappings, opt));
  }
  double sum = 0.0;
  for (const auto& r : out.runs) sum += r.value;
  out.mean = sum / static_cast<double>(repetitions);
  if (repetitions > 1) {
    double ss = 0.0;
    for (const auto& r : out.runs) ss += (r.value - out.mean) * (r.value - out.mean);
    out.stderr_of_mean = std::sqrt(ss / static_cast<double>(repetitions - 1)) / std::sqrt(static_cast<double>(repetitions));
  }
  return out;
}

inline void to_json(nlohmann::json& j, const NmrResult& r) {
  nlohmann::json terms = nlohmann::json::object();
  for (const auto& [label, t] : r.per_term) {
    terms[label] = {{"exact", t.exact}, {"sampled", t.sampled ? nlohmann::json(*t.sampled) : nlohmann::json(nullptr)}};
    if (!t.mapped) terms[label]["mapped"] = false;
  }
  j = nlohmann::json{{"value", r.value},
                     {"stderr", r.standard_error},
                     {"per_term", terms},
                     {"epsilon", r.epsilon},
                     {"normalized", r.normalized},
                     {"shots", r.shots ? nlohmann::json(*r.shots) : nlohmann::json("exact")},
                     {"seed", r.seed}};
  if (!r.unmapped.empty()) j["unmapped"] = r.unmapped;
}

}  // namespace contextlab
