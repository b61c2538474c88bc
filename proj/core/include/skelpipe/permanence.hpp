// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <deque>
#include <optional>
#include <random>
#include <vector>

#include <Eigen/Core>

#include "skelpipe/skeleton.hpp"

namespace skelpipe {

using Rng = std::mt19937_64;

struct PermanenceConfig {
  double alpha = 0.01;               // measurement covariance base
  double beta = 0.2;                 // confidence offset in R = alpha^(c-beta)
  double occlusion_threshold = 0.4;  // T: below this a measurement is absent
  int history_frames = 50;           // gamma: dynamics-fit trajectory length
  int particle_count = 200;
  Eigen::Matrix3d process_noise = Eigen::Matrix3d::Identity() * 1e-3;  // Q
  double resample_ess_fraction = 0.5;
  // Matches treated as occluded when the tracker's assignment cost exceeds
  // this; defaults to the tracker step constant.
  double assignment_cost_gate = 0.5;
};

/// Scalar measurement noise law R(c) = alpha^(c - beta); low confidence
/// means a wide search area, high confidence a conservative update.
double measurement_variance(double confidence, const PermanenceConfig& cfg);

/// Isotropic lift of measurement_variance onto R^3.
Eigen::Matrix3d measurement_covariance(double confidence,
                                       const PermanenceConfig& cfg);

struct HistorySample {
  double time;
  Vec3 position;
};

/// First-order polynomial fitted to (time, position) samples by per-axis
/// ordinary least squares. With fewer than two samples (or coincident
/// times) the fit degenerates to holding the last known position.
struct HistoryLine {
  Vec3 velocity = Vec3::Zero();
  Vec3 anchor = Vec3::Zero();  // fitted position at anchor_time
  double anchor_time = 0.0;

  Vec3 at(double time) const {
    return anchor + velocity * (time - anchor_time);
  }
};

HistoryLine fit_history_line(const std::deque<HistorySample>& history);

/// Slope of fit_history_line: zero velocity with fewer than two samples or
/// coincident times.
Vec3 dynamics_fit(const std::deque<HistorySample>& history);

/// Per-keypoint particle filter state.
struct KeypointFilterState {
  std::vector<Vec3> particles;
  std::vector<double> weights;
  std::deque<HistorySample> history;  // at most history_frames samples
  bool occluded = false;
  int frames_occluded = 0;
  Vec3 last_output = Vec3::Zero();
  double last_time = 0.0;
  // Set when an update had to reinitialize around the measurement because
  // every particle likelihood underflowed.
  bool degenerate_reinit = false;

  static KeypointFilterState initialize(const Vec3& measurement,
                                        double confidence, double time,
                                        const PermanenceConfig& cfg, Rng& rng);

  Vec3 weighted_mean() const;
  double effective_sample_size() const;
};

/// Advances every particle by the fitted first-order dynamics plus process
/// noise ~ N(0, Q). Weights are untouched.
void predict(KeypointFilterState& state, double dt,
             const PermanenceConfig& cfg, Rng& rng);

/// Particle-filter correction: weights are multiplied by the Gaussian
/// density of the innovation under R(confidence), then normalized. Systematic
/// resampling triggers when the effective sample size drops below
/// resample_ess_fraction * N. Appends the posterior mean to the history.
void update(KeypointFilterState& state, const Vec3& measurement,
            double confidence, double time, const PermanenceConfig& cfg,
            Rng& rng);

struct StepResult {
  Vec3 position;
  bool occluded;
};

struct Observation {
  Vec3 position;
  double confidence;
  // Assignment cost of the skeleton this measurement came from, if any.
  std::optional<double> assignment_cost;
};

/// One filter tick for one keypoint. A usable observation (confidence >= T
/// and assignment cost within the gate) runs predict+update; anything else
/// takes the occlusion path: the output advances along the line fitted to
/// the stored pre-occlusion history and the history is left untouched.
StepResult step_keypoint(KeypointFilterState& state,
                         const std::optional<Observation>& obs, double time,
                         const PermanenceConfig& cfg, Rng& rng);

/// Per-skeleton wrapper owning one filter state per joint.
class SkeletonPermanenceFilter {
 public:
  /// Steps every known joint. `skeleton` is absent when the whole person
  /// was missed this frame; every initialized joint then extrapolates.
  /// The result contains every joint with an initialized state; occluded
  /// joints carry confidence 0.
  Skeleton filter_skeleton(const std::optional<Skeleton>& skeleton,
                           double time, const PermanenceConfig& cfg, Rng& rng);

  bool has_state(Joint j) const {
    return states_[static_cast<std::size_t>(j)].has_value();
  }
  const KeypointFilterState& state(Joint j) const {
    return *states_[static_cast<std::size_t>(j)];
  }

 private:
  std::array<std::optional<KeypointFilterState>, kJointCount> states_;
};

}  // namespace skelpipe
