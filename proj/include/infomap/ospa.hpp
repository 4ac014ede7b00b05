#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <vector>

#include "infomap/error.hpp"
#include "infomap/grid.hpp"

namespace infomap {

/// Minimum-cost perfect assignment on a square cost matrix (row-major,
/// n x n). Returns, for each row, the assigned column. O(n^3) shortest
/// augmenting path with potentials.
inline std::vector<std::size_t> solve_assignment(std::span<const double> cost, std::size_t n) {
  if (cost.size() != n * n) throw Error(ErrorCode::InvalidArgument, "cost matrix must be n x n");
  constexpr double inf = std::numeric_limits<double>::infinity();
  // 1-based arrays; index 0 is the virtual source column.
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0), minv(n + 1);
  std::vector<std::size_t> p(n + 1, 0), way(n + 1, 0);
  std::vector<bool> used(n + 1);
  for (std::size_t i = 1; i <= n; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::fill(minv.begin(), minv.end(), inf);
    std::fill(used.begin(), used.end(), false);
    do {
      used[j0] = true;
      const std::size_t i0 = p[j0];
      double delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost[(i0 - 1) * n + (j - 1)] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<std::size_t> row_to_col(n);
  for (std::size_t j = 1; j <= n; ++j) row_to_col[p[j] - 1] = j - 1;
  return row_to_col;
}

/// Optimal Subpattern Assignment distance of order `order` with cutoff
/// `cutoff` between two finite point sets. Lies in [0, cutoff].
inline double ospa(std::span<const WorldPosition> x, std::span<const WorldPosition> y, double cutoff, double order) {
  if (!(cutoff > 0.0)) throw Error(ErrorCode::InvalidArgument, "OSPA cutoff must be positive");
  if (!(order >= 1.0)) throw Error(ErrorCode::InvalidArgument, "OSPA order must be at least 1");
  if (x.size() > y.size()) std::swap(x, y);
  const std::size_t m = x.size();
  const std::size_t n = y.size();
  if (n == 0) return 0.0;
  const double penalty = std::pow(cutoff, order);
  if (m == 0) return cutoff;

  // Rows beyond m are dummies that cost the cardinality penalty.
  std::vector<double> cost(n * n, penalty);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const double d = std::min(cutoff, std::hypot(x[i].x - y[j].x, x[i].y - y[j].y));
      cost[i * n + j] = std::pow(d, order);
    }
  const auto assignment = solve_assignment(cost, n);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) total += cost[i * n + assignment[i]];
  return std::pow(total / static_cast<double>(n), 1.0 / order);
}

}  // namespace infomap
