// SPDX-License-Identifier: Apache-2.0
#include "skelpipe/kalman.hpp"

#include <Eigen/LU>

namespace skelpipe {

namespace {

// Initial covariance: position known to the measurement scale, derivatives
// loose so the filter converges to the data quickly.
Eigen::MatrixXd initial_covariance(int order, double measurement_sigma) {
  const int dim = 3 * (order + 1);
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(dim, dim);
  p.topLeftCorner(3, 3) =
      Eigen::Matrix3d::Identity() * measurement_sigma * measurement_sigma;
  p.block(3, 3, 3, 3) = Eigen::Matrix3d::Identity() * 1.0;
  if (order == 2) p.block(6, 6, 3, 3) = Eigen::Matrix3d::Identity() * 10.0;
  return p;
}

}  // namespace

LinearKalman::LinearKalman(const Vec3& position, const KalmanConfig& cfg)
    : cfg_(cfg) {
  const int dim = 3 * (cfg.order + 1);
  mean_ = Eigen::VectorXd::Zero(dim);
  mean_.head<3>() = position;
  cov_ = initial_covariance(cfg.order, cfg.measurement_sigma);
}

Vec3 LinearKalman::acceleration() const {
  if (cfg_.order < 2) return Vec3::Zero();
  return mean_.segment<3>(6);
}

Eigen::MatrixXd LinearKalman::transition(double dt) const {
  const int dim = 3 * (cfg_.order + 1);
  Eigen::MatrixXd f = Eigen::MatrixXd::Identity(dim, dim);
  f.block(0, 3, 3, 3) = Eigen::Matrix3d::Identity() * dt;
  if (cfg_.order == 2) {
    f.block(0, 6, 3, 3) = Eigen::Matrix3d::Identity() * (0.5 * dt * dt);
    f.block(3, 6, 3, 3) = Eigen::Matrix3d::Identity() * dt;
  }
  return f;
}

Eigen::MatrixXd LinearKalman::process_noise(double dt) const {
  if (q_override_) return *q_override_;
  // Piecewise-constant highest-derivative model: Q = sigma^2 * G G^T.
  Eigen::VectorXd g;
  if (cfg_.order == 1) {
    g = Eigen::Vector2d(0.5 * dt * dt, dt);
  } else {
    g = Eigen::Vector3d(dt * dt * dt / 6.0, 0.5 * dt * dt, dt);
  }
  const Eigen::MatrixXd block =
      cfg_.process_sigma * cfg_.process_sigma * g * g.transpose();
  const int blocks = cfg_.order + 1;
  Eigen::MatrixXd q = Eigen::MatrixXd::Zero(3 * blocks, 3 * blocks);
  for (int axis = 0; axis < 3; ++axis) {
    for (int bi = 0; bi < blocks; ++bi) {
      for (int bj = 0; bj < blocks; ++bj) {
        q(3 * bi + axis, 3 * bj + axis) = block(bi, bj);
      }
    }
  }
  return q;
}

void LinearKalman::predict(double dt) {
  const Eigen::MatrixXd f = transition(dt);
  mean_ = f * mean_;
  cov_ = f * cov_ * f.transpose() + process_noise(dt);
}

void LinearKalman::update(const Vec3& measurement) {
  const int dim = static_cast<int>(mean_.size());
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(3, dim);
  h.topLeftCorner(3, 3) = Eigen::Matrix3d::Identity();
  const Eigen::Matrix3d r = Eigen::Matrix3d::Identity() *
                            cfg_.measurement_sigma * cfg_.measurement_sigma;

  const Eigen::Vector3d innovation = measurement - h * mean_;
  const Eigen::Matrix3d s = h * cov_ * h.transpose() + r;
  const Eigen::MatrixXd gain = cov_ * h.transpose() * s.inverse();

  mean_ += gain * innovation;
  // Joseph form keeps the covariance symmetric PSD under roundoff.
  const Eigen::MatrixXd ikh =
      Eigen::MatrixXd::Identity(dim, dim) - gain * h;
  cov_ = ikh * cov_ * ikh.transpose() + gain * r * gain.transpose();
  cov_ = 0.5 * (cov_ + cov_.transpose());
}

Skeleton SkeletonKalmanFilter::filter_skeleton(
    const std::optional<Skeleton>& skeleton, double time) {
  Skeleton refined;
  if (skeleton) {
    refined.track_id = skeleton->track_id;
    refined.assignment_cost = skeleton->assignment_cost;
    refined.estimated_height = skeleton->estimated_height;
  }

  for (Joint j : all_joints()) {
    auto& filter = filters_[static_cast<std::size_t>(j)];
    const std::size_t idx = static_cast<std::size_t>(j);
    std::optional<Keypoint> kp;
    if (skeleton && skeleton->has(j)) kp = skeleton->at(j);

    if (!filter) {
      if (kp) {
        filter.emplace(kp->position, cfg_);
        last_time_[idx] = time;
        refined.set(j, Keypoint{filter->position(), kp->confidence});
      }
      continue;
    }

    const double dt = time - last_time_[idx];
    if (dt > 0.0) filter->predict(dt);
    last_time_[idx] = time;
    if (kp) {
      filter->update(kp->position);
      refined.set(j, Keypoint{filter->position(), kp->confidence});
    } else {
      refined.set(j, Keypoint{filter->position(), 0.0});
    }
  }
  return refined;
}

}  // namespace skelpipe
