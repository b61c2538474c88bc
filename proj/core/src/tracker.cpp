// SPDX-License-Identifier: Apache-2.0
#include "skelpipe/tracker.hpp"

#include <limits>

#include "skelpipe/assignment.hpp"
#include "skelpipe/errors.hpp"

namespace skelpipe {

namespace {

template <typename PerJoint>
Eigen::MatrixXd pairwise_mean_matrix(const std::vector<Skeleton>& prev,
                                     const std::vector<Skeleton>& curr,
                                     double all_empty_fill,
                                     PerJoint&& per_joint) {
  const auto n = static_cast<Eigen::Index>(prev.size());
  const auto m = static_cast<Eigen::Index>(curr.size());
  Eigen::MatrixXd out(n, m);
  Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> empty(n, m);
  double max_seen = -std::numeric_limits<double>::infinity();

  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) {
      double sum = 0.0;
      int common = 0;
      prev[i].for_each([&](Joint joint, const Keypoint& a) {
        if (!curr[j].has(joint)) return;
        sum += per_joint(a, curr[j].at(joint));
        ++common;
      });
      empty(i, j) = common == 0;
      if (common > 0) {
        out(i, j) = sum / common;
        max_seen = std::max(max_seen, out(i, j));
      }
    }
  }

  // Empty cells are filled once, with the max over non-empty cells only.
  const double fill =
      std::isfinite(max_seen) ? max_seen : all_empty_fill;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) {
      if (empty(i, j)) out(i, j) = fill;
    }
  }
  return out;
}

}  // namespace

Eigen::MatrixXd distance_matrix(const std::vector<Skeleton>& prev,
                                const std::vector<Skeleton>& curr,
                                double all_empty_fill) {
  return pairwise_mean_matrix(
      prev, curr, all_empty_fill, [](const Keypoint& a, const Keypoint& b) {
        return (a.position - b.position).norm();
      });
}

Eigen::MatrixXd confidence_matrix(const std::vector<Skeleton>& prev,
                                  const std::vector<Skeleton>& curr,
                                  double all_empty_fill) {
  return pairwise_mean_matrix(
      prev, curr, all_empty_fill, [](const Keypoint& a, const Keypoint& b) {
        return std::abs(a.confidence - b.confidence);
      });
}

Eigen::MatrixXd combined_cost(const Eigen::MatrixXd& distances,
                              const Eigen::MatrixXd& confidences,
                              double step_constant) {
  if (distances.rows() != confidences.rows() ||
      distances.cols() != confidences.cols()) {
    throw ShapeMismatch("combined_cost: D and C shapes differ");
  }
  Eigen::MatrixXd base = distances + confidences;
  return base.unaryExpr([step_constant](double x) {
    return x + (x - step_constant > 0.0 ? 1.0 : 0.0);
  });
}

std::int64_t TrackRegistry::open_track(Skeleton s) {
  const std::int64_t id = next_id_++;
  tracks_[id] = Entry{std::move(s), 0};
  return id;
}

void TrackRegistry::mark_assigned(std::int64_t id, Skeleton s) {
  auto& entry = tracks_.at(id);
  entry.last_skeleton = std::move(s);
  entry.frames_since_seen = 0;
}

void TrackRegistry::age_tracks(const std::vector<std::int64_t>& unassigned,
                               int max_age) {
  for (std::int64_t id : unassigned) {
    auto it = tracks_.find(id);
    if (it == tracks_.end()) continue;
    if (++it->second.frames_since_seen > max_age) tracks_.erase(it);
  }
}

std::vector<Skeleton> track_frame(TrackRegistry& registry,
                                  std::vector<Skeleton> skeletons,
                                  const TrackerConfig& cfg) {
  // Previous skeletons in ascending id order keeps the solve deterministic.
  std::vector<std::int64_t> prev_ids;
  std::vector<Skeleton> prev;
  for (const auto& [id, entry] : registry.tracks()) {
    prev_ids.push_back(id);
    prev.push_back(entry.last_skeleton);
  }

  std::vector<bool> curr_matched(skeletons.size(), false);
  std::vector<bool> prev_matched(prev.size(), false);

  if (!prev.empty() && !skeletons.empty()) {
    const Eigen::MatrixXd d =
        distance_matrix(prev, skeletons, cfg.empty_matrix_fill);
    const Eigen::MatrixXd c =
        confidence_matrix(prev, skeletons, cfg.empty_matrix_fill);
    const Eigen::MatrixXd m = combined_cost(d, c, cfg.step_constant);
    for (const auto& [i, j] : solve_assignment(m)) {
      skeletons[j].track_id = prev_ids[i];
      skeletons[j].assignment_cost = m(i, j);
      registry.mark_assigned(prev_ids[i], skeletons[j]);
      prev_matched[i] = true;
      curr_matched[j] = true;
    }
  }

  for (std::size_t j = 0; j < skeletons.size(); ++j) {
    if (curr_matched[j]) continue;
    skeletons[j].assignment_cost.reset();
    skeletons[j].track_id = registry.open_track(skeletons[j]);
  }

  std::vector<std::int64_t> unassigned;
  for (std::size_t i = 0; i < prev.size(); ++i) {
    if (!prev_matched[i]) unassigned.push_back(prev_ids[i]);
  }
  registry.age_tracks(unassigned, cfg.max_track_age);

  return skeletons;
}

}  // namespace skelpipe
