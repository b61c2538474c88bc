// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include <Eigen/Core>

#include "skelpipe/skeleton.hpp"

namespace skelpipe {

struct TrackerConfig {
  double step_constant = 0.5;  // delta in the combined-cost step penalty
  int max_track_age = 90;      // frames a track survives unassigned
  // Fill value when a whole cost matrix is empty (no common joints anywhere);
  // mirrors the spatial gate distance so such pairs cost a full gate radius.
  double empty_matrix_fill = 3.0;
};

/// D[i][j] = mean Euclidean distance over joints present in both skeletons.
/// Cells with disjoint joint sets are filled afterwards with max over the
/// non-empty cells, or with all_empty_fill when every cell is empty.
Eigen::MatrixXd distance_matrix(const std::vector<Skeleton>& prev,
                                const std::vector<Skeleton>& curr,
                                double all_empty_fill);

/// C[i][j] = mean absolute confidence difference over common joints, with
/// the same empty-cell rules as distance_matrix.
Eigen::MatrixXd confidence_matrix(const std::vector<Skeleton>& prev,
                                  const std::vector<Skeleton>& curr,
                                  double all_empty_fill);

/// M = D + C + u(D + C - delta), with the strict unit step u(x) = 1 for
/// x > 0 and 0 otherwise. Throws ShapeMismatch when D and C differ in shape.
Eigen::MatrixXd combined_cost(const Eigen::MatrixXd& distances,
                              const Eigen::MatrixXd& confidences,
                              double step_constant);

/// Live-track bookkeeping. Ids are never reused within a stream.
class TrackRegistry {
 public:
  struct Entry {
    Skeleton last_skeleton;
    int frames_since_seen = 0;
  };

  const std::map<std::int64_t, Entry>& tracks() const { return tracks_; }
  std::int64_t next_id() const { return next_id_; }
  bool contains(std::int64_t id) const { return tracks_.count(id) != 0; }

  std::int64_t open_track(Skeleton s);
  void mark_assigned(std::int64_t id, Skeleton s);
  /// Ages every listed track by one frame, dropping those past max_age.
  void age_tracks(const std::vector<std::int64_t>& unassigned, int max_age);

 private:
  std::map<std::int64_t, Entry> tracks_;
  std::int64_t next_id_ = 0;
};

/// Assigns persistent ids to the frame's skeletons by solving the combined
/// distance+confidence assignment against the registry's live tracks.
/// Matched skeletons carry track_id and assignment_cost; unmatched ones open
/// fresh tracks (no assignment_cost). Unmatched tracks age and eventually die.
std::vector<Skeleton> track_frame(TrackRegistry& registry,
                                  std::vector<Skeleton> skeletons,
                                  const TrackerConfig& cfg);

}  // namespace skelpipe
