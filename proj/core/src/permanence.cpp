// SPDX-License-Identifier: Apache-2.0
#include "skelpipe/permanence.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

namespace skelpipe {

namespace {

// PSD-safe square root for sampling N(0, Q); Q = 0 yields no noise.
Eigen::Matrix3d covariance_sqrt(const Eigen::Matrix3d& q) {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(q);
  Eigen::Vector3d lambda = eig.eigenvalues().cwiseMax(0.0);
  return eig.eigenvectors() * lambda.cwiseSqrt().asDiagonal() *
         eig.eigenvectors().transpose();
}

Vec3 sample_gaussian(const Eigen::Matrix3d& sqrt_cov, Rng& rng) {
  std::normal_distribution<double> unit;
  Vec3 z(unit(rng), unit(rng), unit(rng));
  return sqrt_cov * z;
}

// Adds N(0, cov) noise in antithetic pairs: marginals are unchanged but the
// cloud centroid picks up no sampling drift.
template <typename Apply>
void add_antithetic_noise(std::size_t count, const Eigen::Matrix3d& sqrt_cov,
                          Rng& rng, Apply&& apply) {
  for (std::size_t i = 0; i + 1 < count; i += 2) {
    const Vec3 noise = sample_gaussian(sqrt_cov, rng);
    apply(i, noise);
    apply(i + 1, -noise);
  }
  if (count % 2 == 1) apply(count - 1, sample_gaussian(sqrt_cov, rng));
}

void append_history(KeypointFilterState& state, double time, const Vec3& p,
                    int max_len) {
  if (!state.history.empty() && time <= state.history.back().time) return;
  state.history.push_back({time, p});
  while (static_cast<int>(state.history.size()) > max_len) {
    state.history.pop_front();
  }
}

void systematic_resample(KeypointFilterState& state, Rng& rng) {
  const std::size_t n = state.particles.size();
  std::vector<Vec3> resampled;
  resampled.reserve(n);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  const double start = u01(rng) / static_cast<double>(n);
  double cumulative = state.weights[0];
  std::size_t i = 0;
  for (std::size_t k = 0; k < n; ++k) {
    const double pointer = start + static_cast<double>(k) / n;
    while (cumulative < pointer && i + 1 < n) {
      ++i;
      cumulative += state.weights[i];
    }
    resampled.push_back(state.particles[i]);
  }
  state.particles = std::move(resampled);
  state.weights.assign(n, 1.0 / static_cast<double>(n));
}

}  // namespace

double measurement_variance(double confidence, const PermanenceConfig& cfg) {
  return std::pow(cfg.alpha, confidence - cfg.beta);
}

Eigen::Matrix3d measurement_covariance(double confidence,
                                       const PermanenceConfig& cfg) {
  return Eigen::Matrix3d::Identity() * measurement_variance(confidence, cfg);
}

HistoryLine fit_history_line(const std::deque<HistorySample>& history) {
  HistoryLine line;
  const std::size_t n = history.size();
  if (n == 0) return line;
  line.anchor = history.back().position;
  line.anchor_time = history.back().time;
  if (n < 2) return line;

  double t_mean = 0.0;
  Vec3 p_mean = Vec3::Zero();
  for (const auto& s : history) {
    t_mean += s.time;
    p_mean += s.position;
  }
  t_mean /= static_cast<double>(n);
  p_mean /= static_cast<double>(n);

  double tt = 0.0;
  Vec3 tp = Vec3::Zero();
  for (const auto& s : history) {
    const double dt = s.time - t_mean;
    tt += dt * dt;
    tp += dt * (s.position - p_mean);
  }
  if (tt <= 0.0) return line;  // coincident timestamps: hold position
  line.velocity = tp / tt;
  line.anchor = p_mean + line.velocity * (line.anchor_time - t_mean);
  return line;
}

Vec3 dynamics_fit(const std::deque<HistorySample>& history) {
  return fit_history_line(history).velocity;
}

KeypointFilterState KeypointFilterState::initialize(
    const Vec3& measurement, double confidence, double time,
    const PermanenceConfig& cfg, Rng& rng) {
  KeypointFilterState state;
  const std::size_t n = static_cast<std::size_t>(cfg.particle_count);
  const Eigen::Matrix3d sqrt_r =
      covariance_sqrt(measurement_covariance(confidence, cfg));
  state.particles.assign(n, measurement);
  add_antithetic_noise(n, sqrt_r, rng, [&](std::size_t i, const Vec3& noise) {
    state.particles[i] += noise;
  });
  state.weights.assign(n, 1.0 / static_cast<double>(n));
  state.last_output = measurement;
  state.last_time = time;
  state.history.push_back({time, measurement});
  return state;
}

Vec3 KeypointFilterState::weighted_mean() const {
  Vec3 mean = Vec3::Zero();
  for (std::size_t i = 0; i < particles.size(); ++i) {
    mean += weights[i] * particles[i];
  }
  return mean;
}

double KeypointFilterState::effective_sample_size() const {
  double sum_sq = 0.0;
  for (double w : weights) sum_sq += w * w;
  return sum_sq > 0.0 ? 1.0 / sum_sq : 0.0;
}

void predict(KeypointFilterState& state, double dt,
             const PermanenceConfig& cfg, Rng& rng) {
  const Vec3 drift = dynamics_fit(state.history) * dt;
  for (auto& p : state.particles) p += drift;
  if (cfg.process_noise.isZero(0.0)) return;
  const Eigen::Matrix3d sqrt_q = covariance_sqrt(cfg.process_noise);
  add_antithetic_noise(state.particles.size(), sqrt_q, rng,
                       [&](std::size_t i, const Vec3& noise) {
                         state.particles[i] += noise;
                       });
}

void update(KeypointFilterState& state, const Vec3& measurement,
            double confidence, double time, const PermanenceConfig& cfg,
            Rng& rng) {
  const double r = measurement_variance(confidence, cfg);
  state.degenerate_reinit = false;

  double sum = 0.0;
  for (std::size_t i = 0; i < state.particles.size(); ++i) {
    const double sq = (measurement - state.particles[i]).squaredNorm();
    state.weights[i] *= std::exp(-0.5 * sq / r);
    sum += state.weights[i];
  }

  Vec3 posterior;
  if (sum <= 0.0) {
    // Every likelihood underflowed: the cloud has diverged far from the
    // measurement. Restart around it with covariance R(c).
    const Eigen::Matrix3d sqrt_r =
        covariance_sqrt(measurement_covariance(confidence, cfg));
    state.particles.assign(state.particles.size(), measurement);
    add_antithetic_noise(state.particles.size(), sqrt_r, rng,
                         [&](std::size_t i, const Vec3& noise) {
                           state.particles[i] += noise;
                         });
    state.weights.assign(state.particles.size(),
                         1.0 / static_cast<double>(state.particles.size()));
    state.degenerate_reinit = true;
    posterior = state.weighted_mean();
  } else {
    for (auto& w : state.weights) w /= sum;
    posterior = state.weighted_mean();
    if (state.effective_sample_size() <
        cfg.resample_ess_fraction * static_cast<double>(state.particles.size())) {
      systematic_resample(state, rng);
    }
  }

  append_history(state, time, posterior, cfg.history_frames);
  state.last_output = posterior;
  state.last_time = time;
  state.occluded = false;
  state.frames_occluded = 0;
}

StepResult step_keypoint(KeypointFilterState& state,
                         const std::optional<Observation>& obs, double time,
                         const PermanenceConfig& cfg, Rng& rng) {
  const double dt = time - state.last_time;
  const bool usable =
      obs.has_value() && obs->confidence >= cfg.occlusion_threshold &&
      (!obs->assignment_cost || *obs->assignment_cost <= cfg.assignment_cost_gate);

  if (usable) {
    if (dt > 0.0) predict(state, dt, cfg, rng);
    update(state, obs->position, obs->confidence, time, cfg, rng);
    return {state.last_output, false};
  }

  // Occlusion path: the output advances along the first-order polynomial
  // fitted to the stored history, which stays frozen until the keypoint
  // reappears. Anchoring at the previous output keeps the stream continuous
  // across the transition.
  const Vec3 velocity = dynamics_fit(state.history);
  if (dt > 0.0) predict(state, dt, cfg, rng);
  state.last_output += velocity * std::max(dt, 0.0);
  state.last_time = time;
  state.occluded = true;
  state.frames_occluded += 1;
  return {state.last_output, true};
}

Skeleton SkeletonPermanenceFilter::filter_skeleton(
    const std::optional<Skeleton>& skeleton, double time,
    const PermanenceConfig& cfg, Rng& rng) {
  Skeleton refined;
  if (skeleton) {
    refined.track_id = skeleton->track_id;
    refined.assignment_cost = skeleton->assignment_cost;
    refined.estimated_height = skeleton->estimated_height;
  }

  for (Joint j : all_joints()) {
    auto& state = states_[static_cast<std::size_t>(j)];
    std::optional<Observation> obs;
    if (skeleton && skeleton->has(j)) {
      const Keypoint& kp = skeleton->at(j);
      obs = Observation{kp.position, kp.confidence, skeleton->assignment_cost};
    }

    if (!state) {
      // First confident sighting spawns the particle cloud.
      if (obs && obs->confidence >= cfg.occlusion_threshold &&
          (!obs->assignment_cost ||
           *obs->assignment_cost <= cfg.assignment_cost_gate)) {
        state = KeypointFilterState::initialize(obs->position, obs->confidence,
                                                time, cfg, rng);
        refined.set(j, Keypoint{state->last_output, obs->confidence});
      }
      continue;
    }

    const StepResult result = step_keypoint(*state, obs, time, cfg, rng);
    const double confidence = result.occluded ? 0.0 : obs->confidence;
    refined.set(j, Keypoint{result.position, confidence});
  }
  return refined;
}

}  // namespace skelpipe
