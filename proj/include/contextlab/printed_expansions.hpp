#pragma once

// Pauli expansions of the scenario projectors and aggregate observables as
// they appear in print, transcribed term by term (misprints included). The
// library never evaluates with these; they exist so derived decompositions
// can be compared against them and every disagreeing term reported.

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "contextlab/pauli.hpp"

namespace contextlab {

struct PrintedTerm {
  std::string label;
  double numerator;  // coefficient before division by the common divisor
};

struct PrintedExpansion {
  double divisor;
  std::vector<PrintedTerm> terms;  // identity written as an all-I label

  PauliPolynomial polynomial() const {
    PauliPolynomial out(terms.front().label.size());
    for (const auto& t : terms) out.add(t.label, t.numerator / divisor);
    return out;
  }
};

namespace detail {

inline PrintedTerm a_term(std::size_t index, double numerator) {
  return {std::string(kThreeQubitTable.at(index)), numerator};
}

}  // namespace detail

/// Ten three-qubit expansions, Pi_0 .. Pi_9, in A_k notation.
inline const std::vector<PrintedExpansion>& kcbs_twin_printed_expansions() {
  using detail::a_term;
  static const std::vector<PrintedExpansion> table = [] {
    const double r2 = std::numbers::sqrt2;
    const double r3 = std::numbers::sqrt3;
    const double r6 = std::sqrt(6.0);
    auto with_id = [&](double divisor, std::vector<PrintedTerm> terms, double id_num) {
      terms.push_back({"III", id_num});
      return PrintedExpansion{divisor, std::move(terms)};
    };
    std::vector<PrintedExpansion> t;
    // Pi_0
    t.push_back(with_id(16,
                        {a_term(0, -1), a_term(1, 1), a_term(6, 2), a_term(7, -1), a_term(8, 1), a_term(9, r2),
                         a_term(10, -r2), a_term(11, r2), a_term(17, r2), a_term(18, -r2), a_term(19, r2),
                         a_term(20, -r2), a_term(25, -r2), a_term(27, -1), a_term(28, -1), a_term(34, -1),
                         a_term(35, -1)},
                        2));
    // Pi_1
    t.push_back(with_id(32,
                        {a_term(0, -r3),        a_term(1, -1),         a_term(3, 2),          a_term(5, -2),
                         a_term(6, 2),          a_term(7, -r3),        a_term(8, 1),          a_term(9, -r2),
                         a_term(10, r2 * r6),   a_term(11, -r2),       a_term(12, r2 * r6),   a_term(13, -r2),
                         a_term(14, -r2 * r6),  a_term(15, r2),        a_term(16, r2),        a_term(17, -r2),
                         a_term(18, r2 * r6),   a_term(19, -r2),       a_term(20, -r2 * r6),  a_term(21, -r2),
                         a_term(22, r2 * r6),   a_term(23, -r2),       a_term(24, -r2 * r6),  a_term(25, -r2 * r6),
                         a_term(27, r3),        a_term(28, 1),         a_term(30, 2),         a_term(32, -2),
                         a_term(33, -2),        a_term(34, r3),        a_term(35, 3)},
                        4));
    // Pi_2
    t.push_back(with_id(8,
                        {a_term(4, -1), a_term(5, 1), a_term(7, -1), a_term(26, 1), a_term(31, -1), a_term(32, 1),
                         a_term(34, -1)},
                        1));
    // Pi_3
    t.push_back(with_id(8,
                        {a_term(4, 1), a_term(5, -1), a_term(7, -1), a_term(26, 1), a_term(31, 1), a_term(32, -1),
                         a_term(34, -1)},
                        1));
    // Pi_4
    t.push_back(with_id(32,
                        {a_term(0, -r3),        a_term(1, -1),         a_term(3, -2),         a_term(5, 2),
                         a_term(6, 2),          a_term(7, -r3),        a_term(8, 1),          a_term(9, -r2),
                         a_term(10, r2 * r6),   a_term(11, -r2),       a_term(12, -r2 * r6),  a_term(13, r2),
                         a_term(14, r2 * r6),   a_term(15, -r2),       a_term(16, -r2),       a_term(17, -r2),
                         a_term(18, r2 * r6),   a_term(19, -r2),       a_term(20, -r2 * r6),  a_term(21, r2),
                         a_term(22, -r2 * r6),  a_term(23, r2),        a_term(24, r2 * r6),   a_term(25, -r2 * r6),
                         a_term(27, r3),        a_term(28, 1),         a_term(30, -2),        a_term(32, 2),
                         a_term(33, -2),        a_term(34, r3),        a_term(35, 3)},
                        4));
    // Pi_5
    t.push_back(with_id(32,
                        {a_term(0, r3),         a_term(1, 1),          a_term(2, -2),         a_term(4, -2),
                         a_term(6, 2),          a_term(7, r3),         a_term(8, -1),         a_term(9, -r2),
                         a_term(10, -r2 * r6),  a_term(11, -r2),       a_term(12, r2),        a_term(13, r2 * r6),
                         a_term(14, r2),        a_term(16, r2 * r6),   a_term(17, -r2),       a_term(18, -r2 * r6),
                         a_term(19, -r2),       a_term(20, r2 * r6),   a_term(21, -r2 * r6),  a_term(22, r2),
                         a_term(23, r2 * r6),   a_term(24, r2),        a_term(25, r2 * r6),   a_term(27, -r3),
                         a_term(28, 3),         a_term(29, -2),        a_term(31, -2),        a_term(33, -2),
                         a_term(34, -r3),       a_term(35, 1)},
                        4));
    // Pi_6
    t.push_back(with_id(32,
                        {a_term(0, r3),         a_term(1, 1),          a_term(2, 2),          a_term(4, 2),
                         a_term(6, 2),          a_term(7, r3),         a_term(8, -1),         a_term(9, -r2),
                         a_term(10, -r2 * r6),  a_term(11, -r2),       a_term(12, -r2),       a_term(13, -r2 * r6),
                         a_term(14, -r2),       a_term(16, -r2 * r6),  a_term(17, -r2),       a_term(18, -r2 * r6),
                         a_term(19, -r2),       a_term(20, r2 * r6),   a_term(21, r2 * r6),   a_term(22, -r2),
                         a_term(23, -r2 * r6),  a_term(24, -r2),       a_term(25, r2 * r6),   a_term(27, -r3),
                         a_term(28, 3),         a_term(29, 2),         a_term(31, 2),         a_term(33, -2),
                         a_term(34, -r3),       a_term(35, 1)},
                        4));
    // Pi_7
    t.push_back(with_id(8,
                        {a_term(4, 1), a_term(5, 1), a_term(7, 1), a_term(26, 1), a_term(31, 1), a_term(32, 1),
                         a_term(34, 1)},
                        1));
    // Pi_8
    t.push_back(with_id(16,
                        {a_term(0, 1), a_term(1, 1), a_term(6, 2), a_term(7, 1), a_term(8, 1), a_term(9, r2),
                         a_term(10, r2), a_term(11, r2), a_term(17, r2), a_term(18, r2), a_term(19, r2),
                         a_term(20, r2), a_term(25, r2), a_term(27, 1), a_term(28, -1), a_term(34, 1),
                         a_term(35, -1)},
                        2));
    // Pi_9
    t.push_back(with_id(8,
                        {a_term(4, -1), a_term(5, -1), a_term(7, 1), a_term(26, 1), a_term(31, -1), a_term(32, -1),
                         a_term(34, 1)},
                        1));
    return t;
  }();
  return table;
}

/// Ten two-qubit expansions, Pi_0 .. Pi_9.
inline const std::vector<PrintedExpansion>& c4_printed_expansions() {
  static const std::vector<PrintedExpansion> table = {
      {4, {{"ZI", -1}, {"ZX", -1}, {"IX", 1}, {"II", 1}}},
      {4, {{"XI", 1}, {"XX", -1}, {"IX", -1}, {"II", 1}}},
      {4, {{"XI", -1}, {"XX", 1}, {"IX", -1}, {"II", 1}}},
      {4, {{"XX", -1}, {"YY", 1}, {"ZZ", 1}, {"II", 1}}},
      {4, {{"XI", 1}, {"XX", 1}, {"IX", 1}, {"II", 1}}},
      {4, {{"XI", -1}, {"XZ", 1}, {"IZ", -1}, {"II", 1}}},
      {4, {{"XZ", -1}, {"YY", 1}, {"ZX", -1}, {"II", 1}}},
      {4, {{"XX", 1}, {"YY", -1}, {"ZZ", 1}, {"II", 1}}},
      {4, {{"XZ", 1}, {"YY", 1}, {"ZX", 1}, {"II", 1}}},
      {4, {{"XZ", -1}, {"YY", -1}, {"ZX", 1}, {"II", 1}}},
  };
  return table;
}

/// A = A_1 + 4A_6 + A_8 + 4A_26 + A_28 - 2A_33 + A_35 + 10.
inline PauliPolynomial kcbs_twin_printed_aggregate() {
  PauliPolynomial a(3);
  for (auto [index, c] : std::vector<std::pair<std::size_t, double>>{
           {1, 1}, {6, 4}, {8, 1}, {26, 4}, {28, 1}, {33, -2}, {35, 1}}) {
    a.add(kThreeQubitTable.at(index), c);
  }
  a.add("III", 10);
  return a;
}

/// B = B_0 + B_1 - B_2 + 2B_3 - B_4 + 10.
inline PauliPolynomial c4_printed_aggregate() {
  PauliPolynomial b(2);
  const double coeffs[] = {1, 1, -1, 2, -1};
  for (std::size_t i = 0; i < kTwoQubitTable.size(); ++i) b.add(kTwoQubitTable[i], coeffs[i]);
  b.add("II", 10);
  return b;
}

struct TermMismatch {
  std::string label;
  double derived;
  double printed;
};

/// Terms whose coefficients differ by more than `tol` (absent terms count as zero).
inline std::vector<TermMismatch> compare_terms(const PauliPolynomial& derived, const PauliPolynomial& printed,
                                               double tol = 1e-10) {
  std::map<PauliString, std::pair<double, double>> merged;
  for (const auto& [p, c] : derived.terms()) merged[p].first = c;
  for (const auto& [p, c] : printed.terms()) merged[p].second = c;
  std::vector<TermMismatch> out;
  for (const auto& [p, pair] : merged) {
    if (std::abs(pair.first - pair.second) > tol) out.push_back({p.label(), pair.first, pair.second});
  }
  return out;
}

}  // namespace contextlab
