#pragma once

// Dense tableau simplex for   maximize c.x   s.t.  A x <= b,  x >= 0,  b >= 0.
// With b >= 0 the all-slack basis is feasible, so no phase one is needed.
// Pivoting follows Bland's rule, which rules out cycling.

#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "contextlab/error.hpp"

namespace contextlab {

enum class LpStatus { optimal, unbounded };

struct LpResult {
  LpStatus status = LpStatus::optimal;
  double objective = 0.0;
  std::vector<double> x;
  std::size_t pivots = 0;
};

inline LpResult solve_lp_max(const std::vector<double>& c, const std::vector<std::vector<double>>& a,
                             const std::vector<double>& b, double eps = 1e-9) {
  const std::size_t n = c.size();
  const std::size_t m = a.size();
  if (b.size() != m) throw DimensionError("LP: constraint matrix and right-hand side disagree");
  for (std::size_t i = 0; i < m; ++i) {
    if (a[i].size() != n) throw DimensionError("LP: constraint row " + std::to_string(i) + " has wrong width");
    if (b[i] < 0.0) throw Error("LP: right-hand side must be non-negative");
  }

  // Columns 0..n-1 structural, n..n+m-1 slack, last column rhs. Row m is the objective
  // row holding reduced costs c_j - z_j, and -objective in the rhs slot.
  const std::size_t cols = n + m + 1;
  std::vector<std::vector<double>> t(m + 1, std::vector<double>(cols, 0.0));
  std::vector<std::size_t> basis(m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) t[i][j] = a[i][j];
    t[i][n + i] = 1.0;
    t[i][cols - 1] = b[i];
    basis[i] = n + i;
  }
  for (std::size_t j = 0; j < n; ++j) t[m][j] = c[j];

  LpResult result;
  const std::size_t max_pivots = 50 * (n + m + 1) * (n + m + 1);
  while (true) {
    std::size_t enter = cols;
    for (std::size_t j = 0; j + 1 < cols; ++j) {
      if (t[m][j] > eps) {
        enter = j;
        break;
      }
    }
    if (enter == cols) break;

    std::size_t leave = m;
    double best_ratio = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < m; ++i) {
      if (t[i][enter] > eps) {
        const double ratio = t[i][cols - 1] / t[i][enter];
        if (ratio < best_ratio - eps || (std::abs(ratio - best_ratio) <= eps && leave < m && basis[i] < basis[leave])) {
          best_ratio = ratio;
          leave = i;
        }
      }
    }
    if (leave == m) {
      result.status = LpStatus::unbounded;
      result.objective = std::numeric_limits<double>::infinity();
      return result;
    }

    const double pivot = t[leave][enter];
    for (double& v : t[leave]) v /= pivot;
    for (std::size_t i = 0; i <= m; ++i) {
      if (i == leave) continue;
      const double factor = t[i][enter];
      if (factor == 0.0) continue;
      for (std::size_t j = 0; j < cols; ++j) t[i][j] -= factor * t[leave][j];
    }
    basis[leave] = enter;
    if (++result.pivots > max_pivots) throw Error("LP: pivot limit exceeded");
  }

  result.x.assign(n, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    if (basis[i] < n) result.x[basis[i]] = t[i][cols - 1];
  }
  result.objective = 0.0;
  for (std::size_t j = 0; j < n; ++j) result.objective += c[j] * result.x[j];
  return result;
}

}  // namespace contextlab
