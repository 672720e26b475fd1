#pragma once

// Orthogonality (exclusivity) graphs and the two bounds read off them:
// the independence number (best non-contextual assignment) and the
// fractional packing number over maximal cliques (best assignment in any
// theory that only respects exclusivity).

#include <algorithm>
#include <bit>
#include <cstdint>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "contextlab/error.hpp"
#include "contextlab/hilbert.hpp"
#include "contextlab/simplex.hpp"

namespace contextlab {

using Edge = std::pair<std::size_t, std::size_t>;
using VertexSet = std::vector<std::size_t>;

/// Enumeration routines refuse graphs larger than this.
inline constexpr std::size_t kVertexBudget = 24;

class OrthogonalityGraph {
 public:
  OrthogonalityGraph() = default;
  explicit OrthogonalityGraph(std::size_t n_vertices) : n_vertices_(n_vertices) {}

  OrthogonalityGraph(std::size_t n_vertices, std::initializer_list<Edge> edges) : n_vertices_(n_vertices) {
    for (auto [a, b] : edges) add_edge(a, b);
  }

  void add_edge(std::size_t a, std::size_t b) {
    if (a == b) throw Error("self-loop on vertex " + std::to_string(a));
    if (a >= n_vertices_ || b >= n_vertices_) {
      throw IndexError("edge (" + std::to_string(a) + "," + std::to_string(b) + ") out of range for " +
                       std::to_string(n_vertices_) + " vertices");
    }
    edges_.insert(std::minmax(a, b));
  }

  std::size_t n_vertices() const { return n_vertices_; }
  const std::set<Edge>& edges() const { return edges_; }
  bool adjacent(std::size_t a, std::size_t b) const { return edges_.contains(std::minmax(a, b)); }

  /// Neighbourhood bitmasks; only valid within the vertex budget.
  std::vector<std::uint32_t> adjacency_masks() const {
    if (n_vertices_ > kVertexBudget) {
      throw BudgetError("graph has " + std::to_string(n_vertices_) + " vertices; enumeration budget is " +
                        std::to_string(kVertexBudget));
    }
    std::vector<std::uint32_t> adj(n_vertices_, 0);
    for (auto [a, b] : edges_) {
      adj[a] |= std::uint32_t{1} << b;
      adj[b] |= std::uint32_t{1} << a;
    }
    return adj;
  }

 private:
  std::size_t n_vertices_ = 0;
  std::set<Edge> edges_;
};

inline OrthogonalityGraph pentagon_graph() {
  return OrthogonalityGraph(5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 0}});
}

inline OrthogonalityGraph complete_graph(std::size_t n) {
  OrthogonalityGraph g(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) g.add_edge(i, j);
  }
  return g;
}

inline constexpr double kDefaultEdgeTolerance = 1e-9;

/// Edge (i, j) iff |<v_i|v_j>| < tol.
inline OrthogonalityGraph build_graph(std::span<const StateVector> vectors, double tol = kDefaultEdgeTolerance) {
  if (!(tol > 0.0)) throw Error("edge tolerance must be positive");
  OrthogonalityGraph g(vectors.size());
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    for (std::size_t j = i + 1; j < vectors.size(); ++j) {
      if (vectors[i].dim() != vectors[j].dim()) {
        throw DimensionError("vectors " + std::to_string(i) + " and " + std::to_string(j) +
                             " have different dimensions");
      }
      if (std::abs(vectors[i].inner(vectors[j])) < tol) g.add_edge(i, j);
    }
  }
  return g;
}

namespace detail {

inline void max_independent(const std::vector<std::uint32_t>& adj, std::uint32_t candidates, std::size_t size,
                            std::size_t& best) {
  if (candidates == 0) {
    best = std::max(best, size);
    return;
  }
  if (size + static_cast<std::size_t>(std::popcount(candidates)) <= best) return;
  const auto v = static_cast<std::size_t>(std::countr_zero(candidates));
  const std::uint32_t bit = std::uint32_t{1} << v;
  max_independent(adj, candidates & ~bit & ~adj[v], size + 1, best);
  max_independent(adj, candidates & ~bit, size, best);
}

inline void bron_kerbosch(const std::vector<std::uint32_t>& adj, std::uint32_t r, std::uint32_t p, std::uint32_t x,
                          std::vector<std::uint32_t>& out) {
  if (p == 0 && x == 0) {
    out.push_back(r);
    return;
  }
  // Pivot on the vertex of P u X with the most neighbours in P.
  std::uint32_t pux = p | x;
  std::size_t pivot = 0;
  int best = -1;
  while (pux != 0) {
    const auto u = static_cast<std::size_t>(std::countr_zero(pux));
    pux &= pux - 1;
    const int deg = std::popcount(p & adj[u]);
    if (deg > best) {
      best = deg;
      pivot = u;
    }
  }
  std::uint32_t todo = p & ~adj[pivot];
  while (todo != 0) {
    const auto v = static_cast<std::size_t>(std::countr_zero(todo));
    const std::uint32_t bit = std::uint32_t{1} << v;
    todo &= todo - 1;
    bron_kerbosch(adj, r | bit, p & adj[v], x & adj[v], out);
    p &= ~bit;
    x |= bit;
  }
}

inline VertexSet mask_to_set(std::uint32_t mask) {
  VertexSet out;
  while (mask != 0) {
    out.push_back(static_cast<std::size_t>(std::countr_zero(mask)));
    mask &= mask - 1;
  }
  return out;
}

}  // namespace detail

/// Size of the largest set of pairwise non-adjacent vertices (branch and bound).
inline std::size_t independence_number(const OrthogonalityGraph& g) {
  const auto adj = g.adjacency_masks();
  const std::uint32_t all = g.n_vertices() == 0 ? 0U : static_cast<std::uint32_t>((std::uint64_t{1} << g.n_vertices()) - 1);
  std::size_t best = 0;
  detail::max_independent(adj, all, 0, best);
  return best;
}

/// All maximal cliques, each sorted ascending, the list sorted lexicographically.
inline std::vector<VertexSet> maximal_cliques(const OrthogonalityGraph& g) {
  const auto adj = g.adjacency_masks();
  const std::uint32_t all = g.n_vertices() == 0 ? 0U : static_cast<std::uint32_t>((std::uint64_t{1} << g.n_vertices()) - 1);
  std::vector<std::uint32_t> masks;
  if (all != 0) detail::bron_kerbosch(adj, 0, all, 0, masks);
  std::vector<VertexSet> out;
  out.reserve(masks.size());
  for (auto m : masks) out.push_back(detail::mask_to_set(m));
  std::sort(out.begin(), out.end());
  return out;
}

/// max sum_i w_i  s.t.  sum_{i in Q} w_i <= 1 for every maximal clique Q,  0 <= w_i <= 1.
inline double fractional_packing_number(const OrthogonalityGraph& g, const std::vector<VertexSet>& cliques) {
  const std::size_t n = g.n_vertices();
  if (n == 0) return 0.0;
  std::vector<std::vector<double>> a;
  std::vector<double> b;
  for (const auto& q : cliques) {
    std::vector<double> row(n, 0.0);
    for (auto v : q) row.at(v) = 1.0;
    a.push_back(std::move(row));
    b.push_back(1.0);
  }
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> row(n, 0.0);
    row[i] = 1.0;
    a.push_back(std::move(row));
    b.push_back(1.0);
  }
  const LpResult r = solve_lp_max(std::vector<double>(n, 1.0), a, b);
  if (r.status != LpStatus::optimal) throw Error("internal error: fractional packing LP is not bounded");
  return r.objective;
}

inline double fractional_packing_number(const OrthogonalityGraph& g) {
  return fractional_packing_number(g, maximal_cliques(g));
}

struct BoundReport {
  std::size_t independence_number = 0;
  double fractional_packing = 0.0;
  std::vector<VertexSet> maximal_cliques;
};

inline BoundReport compute_bounds(const OrthogonalityGraph& g) {
  BoundReport r;
  r.maximal_cliques = maximal_cliques(g);
  r.independence_number = independence_number(g);
  r.fractional_packing = fractional_packing_number(g, r.maximal_cliques);
  return r;
}

inline void to_json(nlohmann::json& j, const BoundReport& r) {
  j = nlohmann::json{{"alpha", r.independence_number},
                     {"alpha_star", r.fractional_packing},
                     {"cliques", r.maximal_cliques}};
}

}  // namespace contextlab
