// SPDX-License-Identifier: Apache-2.0
#include "skelpipe/pipeline.hpp"

#include <iterator>
#include <limits>

#include "skelpipe/errors.hpp"

namespace skelpipe {

std::string_view filter_kind_name(FilterKind kind) {
  switch (kind) {
    case FilterKind::none: return "none";
    case FilterKind::kalman1: return "kf1";
    case FilterKind::kalman2: return "kf2";
    case FilterKind::permanence: return "perm";
  }
  return "none";
}

std::optional<FilterKind> filter_kind_from_name(std::string_view name) {
  if (name == "none") return FilterKind::none;
  if (name == "kf1" || name == "kalman1") return FilterKind::kalman1;
  if (name == "kf2" || name == "kalman2") return FilterKind::kalman2;
  if (name == "perm" || name == "permanence") return FilterKind::permanence;
  return std::nullopt;
}

FollowerState follow(FollowerState state, const Vec3& target, double dt) {
  state.ee_position += state.gain * dt * (target - state.ee_position);
  return state;
}

Pipeline::Pipeline(PipelineConfig cfg)
    : cfg_(std::move(cfg)),
      rng_(cfg_.seed),
      last_timestamp_(-std::numeric_limits<double>::infinity()) {
  // The tracker's empty-matrix fallback mirrors the spatial gate radius.
  cfg_.tracker.empty_matrix_fill = cfg_.spatial.distance_threshold;
  cfg_.permanence.assignment_cost_gate = cfg_.tracker.step_constant;
  cfg_.kalman1.order = 1;
  cfg_.kalman2.order = 2;
  if (cfg_.operator_track) locked_operator_ = cfg_.operator_track;
}

std::optional<std::int64_t> Pipeline::operator_id() const {
  if (locked_operator_) return locked_operator_;
  // Interim pick while the warmup window is still open.
  std::optional<std::int64_t> best;
  double best_mean = std::numeric_limits<double>::infinity();
  for (const auto& [id, stats] : candidates_) {
    if (stats.frames == 0) continue;
    const double mean = stats.distance_sum / stats.frames;
    if (mean < best_mean) {
      best_mean = mean;
      best = id;
    }
  }
  return best;
}

void Pipeline::note_operator_candidates(const std::vector<Skeleton>& tracked) {
  if (locked_operator_) return;
  for (const Skeleton& s : tracked) {
    if (!s.track_id || !s.has(Joint::root)) continue;
    auto& stats = candidates_[*s.track_id];
    stats.distance_sum +=
        (s.at(Joint::root).position - cfg_.spatial.camera_origin).norm();
    stats.frames += 1;
  }
  if (frames_processed_ >= cfg_.warmup_frames) locked_operator_ = operator_id();
}

Skeleton Pipeline::run_filter(TrackFilter& tf, const std::optional<Skeleton>& s,
                              double time) {
  switch (cfg_.filter) {
    case FilterKind::none:
      return s.value_or(Skeleton{});
    case FilterKind::kalman1:
    case FilterKind::kalman2:
      return tf.kalman.filter_skeleton(s, time);
    case FilterKind::permanence:
      return tf.permanence.filter_skeleton(s, time, cfg_.permanence, rng_);
  }
  return Skeleton{};
}

Pipeline::FrameResult Pipeline::process_frame(const Frame& frame) {
  if (frame.timestamp <= last_timestamp_) {
    throw OutOfOrderFrame("frame timestamp not strictly increasing");
  }

  // Node 1: spatial evaluation.
  Frame evaluated = evaluate_frame(frame, default_graph(), cfg_.spatial);

  // Node 2: temporal tracking.
  std::vector<Skeleton> tracked =
      track_frame(registry_, std::move(evaluated.skeletons), cfg_.tracker);

  frames_processed_ += 1;
  note_operator_candidates(tracked);

  // Node 3: smoothing filter, one instance per live track. Tracks missing
  // from this frame advance on their occlusion path; tracks dropped by the
  // registry lose their filter state.
  std::map<std::int64_t, const Skeleton*> by_id;
  for (const Skeleton& s : tracked) {
    if (s.track_id) by_id[*s.track_id] = &s;
  }
  for (auto it = filters_.begin(); it != filters_.end();) {
    it = registry_.contains(it->first) ? std::next(it) : filters_.erase(it);
  }

  FrameResult result;
  result.refined.timestamp = frame.timestamp;
  std::optional<std::int64_t> op_id = operator_id();

  for (const auto& [id, entry] : registry_.tracks()) {
    auto [fit, inserted] = filters_.try_emplace(
        id, cfg_.filter == FilterKind::kalman2 ? cfg_.kalman2 : cfg_.kalman1);
    TrackFilter& tf = fit->second;

    const auto present = by_id.find(id);
    std::optional<Skeleton> input;
    if (present != by_id.end()) input = *present->second;

    Skeleton refined = run_filter(tf, input, frame.timestamp);
    refined.track_id = id;

    if (op_id && id == *op_id && refined.has(cfg_.target_joint)) {
      result.target =
          refined.at(cfg_.target_joint).position + cfg_.safety_offset;
    }
    // Only skeletons detected this frame enter the refined stream; absent
    // tracks keep extrapolating internally and still feed the target.
    if (input && !refined.empty()) {
      result.refined.skeletons.push_back(std::move(refined));
    }
  }

  last_timestamp_ = frame.timestamp;
  return result;
}

}  // namespace skelpipe
