// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string_view>

#include "skelpipe/kalman.hpp"
#include "skelpipe/permanence.hpp"
#include "skelpipe/skeleton.hpp"
#include "skelpipe/spatial.hpp"
#include "skelpipe/tracker.hpp"

namespace skelpipe {

enum class FilterKind { none, kalman1, kalman2, permanence };

std::string_view filter_kind_name(FilterKind kind);
std::optional<FilterKind> filter_kind_from_name(std::string_view name);

struct FollowerConfig {
  double gain = 5.0;  // 1/s
};

struct PipelineConfig {
  SpatialConfig spatial;
  TrackerConfig tracker;
  PermanenceConfig permanence;
  KalmanConfig kalman1{.order = 1, .measurement_sigma = 0.05, .process_sigma = 4.0};
  KalmanConfig kalman2{.order = 2, .measurement_sigma = 0.05, .process_sigma = 30.0};
  FilterKind filter = FilterKind::permanence;
  Joint target_joint = Joint::left_wrist;
  // Operator selection: explicit track id, or (by default) the track with
  // the smallest mean camera-to-root distance over the warmup window.
  std::optional<std::int64_t> operator_track;
  int warmup_frames = 30;
  Vec3 safety_offset{0.150, 0.0, 0.150};
  std::uint64_t seed = 0;
  FollowerConfig follower;
};

/// First-order linear tracker standing in for the velocity controller's
/// target dynamics: ee <- ee + gain * (target - ee) * dt.
struct FollowerState {
  Vec3 ee_position = Vec3::Zero();
  double gain = 5.0;
  bool initialized = false;
};

FollowerState follow(FollowerState state, const Vec3& target, double dt);

/// The three filtering nodes composed in order (spatial evaluation,
/// temporal tracking, smoothing filter) plus tracking-target selection.
class Pipeline {
 public:
  explicit Pipeline(PipelineConfig cfg);

  struct FrameResult {
    Frame refined;
    // Tracked joint of the operator plus the safety offset; absent until an
    // operator track has been seen (and, without the permanence filter,
    // whenever the joint goes unobserved).
    std::optional<Vec3> target;
  };

  /// Frames must arrive in strictly increasing timestamp order; anything
  /// else throws OutOfOrderFrame and leaves the stream state untouched.
  FrameResult process_frame(const Frame& frame);

  const PipelineConfig& config() const { return cfg_; }
  std::optional<std::int64_t> operator_id() const;

 private:
  struct TrackFilter {
    SkeletonPermanenceFilter permanence;
    SkeletonKalmanFilter kalman;
    TrackFilter(const KalmanConfig& kcfg) : kalman(kcfg) {}
  };

  void note_operator_candidates(const std::vector<Skeleton>& tracked);
  Skeleton run_filter(TrackFilter& tf, const std::optional<Skeleton>& s,
                      double time);

  PipelineConfig cfg_;
  TrackRegistry registry_;
  std::map<std::int64_t, TrackFilter> filters_;
  Rng rng_;
  double last_timestamp_;
  int frames_processed_ = 0;

  struct CandidateStats {
    double distance_sum = 0.0;
    int frames = 0;
  };
  std::map<std::int64_t, CandidateStats> candidates_;
  std::optional<std::int64_t> locked_operator_;
};

}  // namespace skelpipe
