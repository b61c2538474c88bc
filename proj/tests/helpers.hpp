// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <random>
#include <vector>

#include "skelpipe/skeleton.hpp"

namespace skelpipe::testing {

inline Vec3 random_point(std::mt19937_64& rng, double span = 1.0) {
  std::uniform_real_distribution<double> u(-span, span);
  return {u(rng), u(rng), u(rng)};
}

/// Random partial skeleton: each joint present with probability keep_p,
/// positions near (0, 0, 2), confidences uniform in [0, 1].
inline Skeleton random_skeleton(std::mt19937_64& rng, double keep_p = 0.8) {
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  Skeleton s;
  for (Joint j : all_joints()) {
    if (j == Joint::root || j == Joint::neck) continue;
    if (u01(rng) > keep_p) continue;
    s.set(j, Keypoint{Vec3(0.0, 0.0, 2.0) + random_point(rng, 0.5), u01(rng)});
  }
  return s;
}

/// Exhaustive minimum assignment cost over all injective row->column maps
/// of size min(n, m). Independent oracle for the Kuhn-Munkres solver.
inline double brute_force_assignment(const Eigen::MatrixXd& cost) {
  const int n = static_cast<int>(cost.rows());
  const int m = static_cast<int>(cost.cols());
  if (n == 0 || m == 0) return 0.0;
  if (n > m) return brute_force_assignment(cost.transpose());

  std::vector<bool> used(m, false);
  double best = std::numeric_limits<double>::infinity();
  auto dfs = [&](auto&& self, int row, double acc) -> void {
    if (acc >= best) return;
    if (row == n) {
      best = acc;
      return;
    }
    for (int j = 0; j < m; ++j) {
      if (used[j]) continue;
      used[j] = true;
      self(self, row + 1, acc + cost(row, j));
      used[j] = false;
    }
  };
  dfs(dfs, 0, 0.0);
  return best;
}

}  // namespace skelpipe::testing
