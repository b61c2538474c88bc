// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <utility>
#include <vector>

#include <Eigen/Core>

namespace skelpipe {

/// Minimum-total-cost bipartite assignment (Kuhn-Munkres) over an n x m
/// cost matrix with finite non-negative entries. Rectangular inputs are
/// padded to square with dummy cost max(M)+1; dummy matches are dropped,
/// so the result always has min(n, m) (row, column) pairs, sorted by row.
std::vector<std::pair<int, int>> solve_assignment(const Eigen::MatrixXd& cost);

/// Total cost of the assignment returned by solve_assignment.
double assignment_cost(const Eigen::MatrixXd& cost,
                       const std::vector<std::pair<int, int>>& pairs);

}  // namespace skelpipe
