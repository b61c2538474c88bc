// SPDX-License-Identifier: Apache-2.0
#include "skelpipe/assignment.hpp"

#include <algorithm>
#include <limits>

namespace skelpipe {

namespace {

// Classic O(n^3) Kuhn-Munkres on a square matrix using dual potentials and
// shortest augmenting paths. Indices are 1-based internally; column 0 is the
// virtual source. Returns col_match[j] = row assigned to column j (1-based).
std::vector<int> kuhn_munkres_square(const Eigen::MatrixXd& a) {
  const int n = static_cast<int>(a.rows());
  constexpr double kInf = std::numeric_limits<double>::infinity();

  std::vector<double> row_potential(n + 1, 0.0), col_potential(n + 1, 0.0);
  std::vector<int> col_match(n + 1, 0);  // row currently matched to column j
  std::vector<int> prev_col(n + 1, 0);   // augmenting-path predecessor

  for (int row = 1; row <= n; ++row) {
    col_match[0] = row;
    int j0 = 0;
    std::vector<double> min_reduced(n + 1, kInf);
    std::vector<bool> visited(n + 1, false);
    do {
      visited[j0] = true;
      const int i0 = col_match[j0];
      double delta = kInf;
      int j1 = 0;
      for (int j = 1; j <= n; ++j) {
        if (visited[j]) continue;
        double reduced =
            a(i0 - 1, j - 1) - row_potential[i0] - col_potential[j];
        if (reduced < min_reduced[j]) {
          min_reduced[j] = reduced;
          prev_col[j] = j0;
        }
        if (min_reduced[j] < delta) {
          delta = min_reduced[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (visited[j]) {
          row_potential[col_match[j]] += delta;
          col_potential[j] -= delta;
        } else {
          min_reduced[j] -= delta;
        }
      }
      j0 = j1;
    } while (col_match[j0] != 0);
    // Augment along the found path.
    do {
      const int j1 = prev_col[j0];
      col_match[j0] = col_match[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  return col_match;
}

}  // namespace

std::vector<std::pair<int, int>> solve_assignment(const Eigen::MatrixXd& cost) {
  const int n = static_cast<int>(cost.rows());
  const int m = static_cast<int>(cost.cols());
  if (n == 0 || m == 0) return {};

  const int side = std::max(n, m);
  const double dummy = cost.maxCoeff() + 1.0;
  Eigen::MatrixXd padded = Eigen::MatrixXd::Constant(side, side, dummy);
  padded.topLeftCorner(n, m) = cost;

  const std::vector<int> col_match = kuhn_munkres_square(padded);
  std::vector<std::pair<int, int>> pairs;
  pairs.reserve(static_cast<std::size_t>(std::min(n, m)));
  for (int j = 1; j <= side; ++j) {
    const int i = col_match[j];
    if (i >= 1 && i <= n && j <= m) pairs.emplace_back(i - 1, j - 1);
  }
  std::sort(pairs.begin(), pairs.end());
  return pairs;
}

double assignment_cost(const Eigen::MatrixXd& cost,
                       const std::vector<std::pair<int, int>>& pairs) {
  double total = 0.0;
  for (const auto& [i, j] : pairs) total += cost(i, j);
  return total;
}

}  // namespace skelpipe
