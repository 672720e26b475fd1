#pragma once

// n-qubit Pauli strings and real-weighted sums of them.

#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "contextlab/error.hpp"
#include "contextlab/hilbert.hpp"

namespace contextlab {

/// Tensor product label over {I, X, Y, Z}; character 0 acts on qubit 0 (most significant).
class PauliString {
 public:
  PauliString() = default;

  explicit PauliString(std::string label) : label_(std::move(label)) {
    if (label_.empty()) throw Error("Pauli label must not be empty");
    for (char c : label_) {
      if (c != 'I' && c != 'X' && c != 'Y' && c != 'Z') {
        throw Error("invalid Pauli label '" + label_ + "': symbols must be I, X, Y or Z");
      }
    }
  }

  static PauliString identity(std::size_t n) { return PauliString(std::string(n, 'I')); }

  const std::string& label() const { return label_; }
  std::size_t size() const { return label_.size(); }
  bool is_identity() const { return label_.find_first_not_of('I') == std::string::npos; }

  // I < X < Y < Z in ASCII, so the label order is the lexicographic order we want.
  auto operator<=>(const PauliString&) const = default;

 private:
  std::string label_;
};

inline const ComplexMatrix& single_qubit_pauli(char symbol) {
  static const ComplexMatrix id = identity(2);
  static const ComplexMatrix x = [] {
    ComplexMatrix m(2, 2);
    m << 0, 1, 1, 0;
    return m;
  }();
  static const ComplexMatrix y = [] {
    ComplexMatrix m(2, 2);
    m << 0, Complex(0, -1), Complex(0, 1), 0;
    return m;
  }();
  static const ComplexMatrix z = [] {
    ComplexMatrix m(2, 2);
    m << 1, 0, 0, -1;
    return m;
  }();
  switch (symbol) {
    case 'I': return id;
    case 'X': return x;
    case 'Y': return y;
    case 'Z': return z;
    default: throw Error(std::string("invalid Pauli symbol '") + symbol + "'");
  }
}

/// 2^n x 2^n matrix of a Pauli string, built by chained tensor products.
inline ComplexMatrix pauli_matrix(const PauliString& p) {
  if (p.size() == 0) throw Error("Pauli label must not be empty");
  ComplexMatrix out = single_qubit_pauli(p.label()[0]);
  for (std::size_t q = 1; q < p.size(); ++q) out = tensor_product(out, single_qubit_pauli(p.label()[q]));
  return out;
}

namespace detail {

/// Tr[P H] using the permutation-with-phase structure of P:
/// P|k> = i^{#Y} (-1)^{popcount(k & zmask)} |k ^ xmask>.
inline Complex pauli_trace_product(const PauliString& p, const ComplexMatrix& h) {
  const std::size_t n = p.size();
  std::uint64_t xmask = 0, zmask = 0;
  int n_y = 0;
  for (std::size_t q = 0; q < n; ++q) {
    const std::uint64_t bit = std::uint64_t{1} << (n - 1 - q);
    const char c = p.label()[q];
    if (c == 'X' || c == 'Y') xmask |= bit;
    if (c == 'Z' || c == 'Y') zmask |= bit;
    if (c == 'Y') ++n_y;
  }
  static constexpr std::array<Complex, 4> kIPowers{Complex(1, 0), Complex(0, 1), Complex(-1, 0), Complex(0, -1)};
  const Complex phase = kIPowers[static_cast<std::size_t>(n_y % 4)];
  const std::uint64_t dim = std::uint64_t{1} << n;
  Complex acc = 0.0;
  for (std::uint64_t k = 0; k < dim; ++k) {
    const double sign = (std::popcount(k & zmask) % 2 == 0) ? 1.0 : -1.0;
    // <k^x| P |k> = phase * sign, so Tr[P H] = sum_k P_{k^x,k} H_{k,k^x}.
    acc += sign * h(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k ^ xmask));
  }
  return phase * acc;
}

}  // namespace detail

/// Hermitian operator written as sum_P c_P P with real c_P. Terms are kept in label order.
class PauliPolynomial {
 public:
  using TermMap = std::map<PauliString, double>;

  PauliPolynomial() = default;
  explicit PauliPolynomial(std::size_t n_qubits) : n_qubits_(n_qubits) {}

  std::size_t n_qubits() const { return n_qubits_; }
  const TermMap& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }

  /// Adds to the coefficient of `p`; a resulting exact zero removes the term.
  void add(const PauliString& p, double coefficient) {
    if (p.size() != n_qubits_) {
      throw DimensionError("term '" + p.label() + "' does not act on " + std::to_string(n_qubits_) + " qubits");
    }
    double& c = terms_[p];
    c += coefficient;
    if (c == 0.0) terms_.erase(p);
  }
  void add(std::string_view label, double coefficient) { add(PauliString(std::string(label)), coefficient); }

  double coefficient(const PauliString& p) const {
    auto it = terms_.find(p);
    return it == terms_.end() ? 0.0 : it->second;
  }
  double coefficient(std::string_view label) const { return coefficient(PauliString(std::string(label))); }

  double identity_coefficient() const {
    return n_qubits_ == 0 ? 0.0 : coefficient(PauliString::identity(n_qubits_));
  }

  PauliPolynomial scaled(double factor) const {
    PauliPolynomial out(n_qubits_);
    for (const auto& [p, c] : terms_) out.terms_.emplace(p, c * factor);
    return out;
  }

  /// Terms other than the all-I string.
  std::vector<std::pair<PauliString, double>> non_identity_terms() const {
    std::vector<std::pair<PauliString, double>> out;
    for (const auto& [p, c] : terms_) {
      if (!p.is_identity()) out.emplace_back(p, c);
    }
    return out;
  }

 private:
  std::size_t n_qubits_ = 0;
  TermMap terms_;
};

inline constexpr double kPruneThreshold = 1e-12;

/// c_P = Tr[P H] / 2^n; coefficients below `prune` in magnitude are dropped.
inline PauliPolynomial decompose(const ComplexMatrix& h, double prune = kPruneThreshold) {
  if (h.rows() != h.cols()) throw DimensionError("decompose requires a square matrix");
  const std::size_t dim = static_cast<std::size_t>(h.rows());
  if (!is_power_of_two(dim) || dim < 2) {
    throw DimensionError("decompose requires a 2^n x 2^n matrix with n >= 1, got " + std::to_string(dim));
  }
  const double herm = hermiticity_error(h);
  if (herm > kDefaultTolerance) {
    throw HermiticityError("decompose requires a Hermitian matrix (max |H - H^dagger| = " + std::to_string(herm) +
                           ")");
  }
  const std::size_t n = qubit_count(dim);
  PauliPolynomial out(n);
  static constexpr std::array<char, 4> kSymbols{'I', 'X', 'Y', 'Z'};
  std::string label(n, 'I');
  const std::size_t total = std::size_t{1} << (2 * n);
  for (std::size_t code = 0; code < total; ++code) {
    for (std::size_t q = 0; q < n; ++q) label[q] = kSymbols[(code >> (2 * (n - 1 - q))) & 3U];
    const PauliString p(label);
    const double c = detail::pauli_trace_product(p, h).real() / static_cast<double>(dim);
    if (std::abs(c) >= prune) out.add(p, c);
  }
  return out;
}

/// sum_P c_P * pauli_matrix(P).
inline ComplexMatrix reconstruct(const PauliPolynomial& poly) {
  if (poly.n_qubits() == 0) return ComplexMatrix(0, 0);
  const std::size_t dim = std::size_t{1} << poly.n_qubits();
  ComplexMatrix out = ComplexMatrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  for (const auto& [p, c] : poly.terms()) out += c * pauli_matrix(p);
  return out;
}

/// decompose(weight * sum of projectors). An empty list gives the zero polynomial on zero qubits.
inline PauliPolynomial aggregate_observable(std::span<const ComplexMatrix> projectors, double weight) {
  if (projectors.empty()) return PauliPolynomial();
  const Eigen::Index dim = projectors.front().rows();
  ComplexMatrix sum = ComplexMatrix::Zero(dim, dim);
  for (const auto& p : projectors) {
    if (p.rows() != dim || p.cols() != dim) throw DimensionError("projectors must share one dimension");
    sum += p;
  }
  return decompose(weight * sum);
}

/// Operator dictionary for three qubits: index k names the k-th entry A_k.
inline constexpr std::array<std::string_view, 36> kThreeQubitTable{
    "IIX", "IIZ", "IXI", "IXX", "IXZ", "IYY", "IZI", "IZX", "IZZ", "XII", "XIX", "XIZ",
    "XXI", "XXX", "XXZ", "XYX", "XYY", "XZI", "XZX", "XZZ", "YIY", "YXY", "YYI", "YYX",
    "YYZ", "YZY", "ZII", "ZIX", "ZIZ", "ZXI", "ZXX", "ZXZ", "ZYY", "ZZI", "ZZX", "ZZZ"};

/// Two-qubit observables B_0..B_4.
inline constexpr std::array<std::string_view, 5> kTwoQubitTable{"XX", "YY", "ZI", "ZZ", "IZ"};

inline std::optional<std::size_t> table_index(std::string_view label) {
  const auto search = [&](auto const& table) -> std::optional<std::size_t> {
    for (std::size_t i = 0; i < table.size(); ++i) {
      if (table[i] == label) return i;
    }
    return std::nullopt;
  };
  if (label.size() == 3) return search(kThreeQubitTable);
  if (label.size() == 2) return search(kTwoQubitTable);
  return std::nullopt;
}

/// "A_26" / "B_3" style name for a label, or the label itself when it is not tabulated.
inline std::string table_name(std::string_view label) {
  if (auto idx = table_index(label)) {
    return std::string(label.size() == 3 ? "A_" : "B_") + std::to_string(*idx);
  }
  return std::string(label);
}

inline void to_json(nlohmann::json& j, const PauliPolynomial& poly) {
  nlohmann::json terms = nlohmann::json::object();
  for (const auto& [p, c] : poly.terms()) terms[p.label()] = c;
  j = nlohmann::json{{"n", poly.n_qubits()}, {"terms", terms}};
}

inline void from_json(const nlohmann::json& j, PauliPolynomial& poly) {
  poly = PauliPolynomial(j.at("n").get<std::size_t>());
  for (const auto& [label, c] : j.at("terms").items()) poly.add(label, c.get<double>());
}

}  // namespace contextlab
