#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hyperflow/error.hpp"
#include "hyperflow/matrix.hpp"

namespace hyperflow {

//
// Minimum-weight perfect matching on a square cost matrix (Hungarian method
// with row/column potentials, O(n^3)).
//
// Returns assignment[row] = column.
//
inline std::vector<int> hungarian(const Eigen::MatrixXd& cost) {
  const int n = static_cast<int>(cost.rows());
  if (cost.cols() != n) throw DimensionMismatch("hungarian: cost matrix must be square");
  if (n == 0) return {};

  constexpr double inf = std::numeric_limits<double>::infinity();
  // 1-based potentials; column 0 is the virtual start column.
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<int> match_col(n + 1, 0), way(n + 1, 0);

  for (int row = 1; row <= n; ++row) {
    match_col[0] = row;
    int col0 = 0;
    std::vector<double> min_slack(n + 1, inf);
    std::vector<char> used(n + 1, 0);
    do {
      used[col0] = 1;
      const int r0 = match_col[col0];
      double delta = inf;
      int col1 = 0;
      for (int c = 1; c <= n; ++c) {
        if (used[c]) continue;
        const double slack = cost(r0 - 1, c - 1) - u[r0] - v[c];
        if (slack < min_slack[c]) {
          min_slack[c] = slack;
          way[c] = col0;
        }
        if (min_slack[c] < delta) {
          delta = min_slack[c];
          col1 = c;
        }
      }
      for (int c = 0; c <= n; ++c) {
        if (used[c]) {
          u[match_col[c]] += delta;
          v[c] -= delta;
        } else {
          min_slack[c] -= delta;
        }
      }
      col0 = col1;
    } while (match_col[col0] != 0);
    do {
      const int col1 = way[col0];
      match_col[col0] = match_col[col1];
      col0 = col1;
    } while (col0 != 0);
  }

  std::vector<int> assignment(n, -1);
  for (int c = 1; c <= n; ++c) assignment[match_col[c] - 1] = c - 1;
  return assignment;
}

struct Matching {
  std::vector<int> permutation;  // a[i] is paired with b[permutation[i]]
  double max_distance = 0.0;
  double total_distance = 0.0;
};

// Optimal pairing of two equally sized complex multisets under |a_i - b_j|.
inline Matching match_multisets(std::span<const Complex> a, std::span<const Complex> b) {
  if (a.size() != b.size()) {
    throw DimensionMismatch("match_multisets: sizes " + std::to_string(a.size()) + " vs " +
                            std::to_string(b.size()));
  }
  const auto n = static_cast<Eigen::Index>(a.size());
  Eigen::MatrixXd cost(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      cost(i, j) = std::abs(a[static_cast<std::size_t>(i)] - b[static_cast<std::size_t>(j)]);

  Matching m;
  m.permutation = hungarian(cost);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double dist = cost(i, m.permutation[static_cast<std::size_t>(i)]);
    m.max_distance = std::max(m.max_distance, dist);
    m.total_distance += dist;
  }
  return m;
}

}  // namespace hyperflow
