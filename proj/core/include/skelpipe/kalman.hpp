// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>

#include <Eigen/Core>

#include "skelpipe/skeleton.hpp"

namespace skelpipe {

struct KalmanConfig {
  int order = 1;                    // 1: constant velocity, 2: constant accel
  double measurement_sigma = 0.05;  // meters
  // Piecewise-constant white-noise level: acceleration (m/s^2) for order 1,
  // jerk (m/s^3) for order 2. Stand-ins for the usual library defaults.
  double process_sigma = 4.0;
};

/// Per-keypoint linear Kalman filter with constant-velocity (order 1) or
/// constant-acceleration (order 2) dynamics. State is [p v (a)] per axis.
class LinearKalman {
 public:
  LinearKalman(const Vec3& position, const KalmanConfig& cfg);

  void predict(double dt);
  void update(const Vec3& measurement);

  Vec3 position() const { return mean_.head<3>(); }
  Vec3 velocity() const { return mean_.segment<3>(3); }
  Vec3 acceleration() const;  // zero for order 1

  int order() const { return cfg_.order; }
  const Eigen::VectorXd& mean() const { return mean_; }
  const Eigen::MatrixXd& covariance() const { return cov_; }

  Eigen::VectorXd& mutable_mean() { return mean_; }
  Eigen::MatrixXd& mutable_covariance() { return cov_; }
  /// Overrides the built-in process noise model (test hook).
  void set_process_noise(std::optional<Eigen::MatrixXd> q) {
    q_override_ = std::move(q);
  }

 private:
  Eigen::MatrixXd transition(double dt) const;
  Eigen::MatrixXd process_noise(double dt) const;

  KalmanConfig cfg_;
  Eigen::VectorXd mean_;
  Eigen::MatrixXd cov_;
  std::optional<Eigen::MatrixXd> q_override_;
};

/// Baseline per-skeleton smoother: one independent LinearKalman per joint.
/// Joints without a measurement coast on predict only.
class SkeletonKalmanFilter {
 public:
  explicit SkeletonKalmanFilter(KalmanConfig cfg) : cfg_(cfg) {}

  /// Mirrors SkeletonPermanenceFilter::filter_skeleton: every initialized
  /// joint appears in the output; coasting joints carry confidence 0.
  Skeleton filter_skeleton(const std::optional<Skeleton>& skeleton,
                           double time);

  bool has_state(Joint j) const {
    return filters_[static_cast<std::size_t>(j)].has_value();
  }
  const LinearKalman& state(Joint j) const {
    return *filters_[static_cast<std::size_t>(j)];
  }

 private:
  KalmanConfig cfg_;
  std::array<std::optional<LinearKalman>, kJointCount> filters_;
  std::array<double, kJointCount> last_time_{};
};

}  // namespace skelpipe
