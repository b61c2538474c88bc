// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "skelpipe/skeleton.hpp"

namespace skelpipe {

/// Timestamped 3D point sequence with strictly increasing timestamps.
class Trajectory {
 public:
  struct Sample {
    double time;
    Vec3 position;
  };

  Trajectory() = default;
  explicit Trajectory(std::string label) : label_(std::move(label)) {}

  void append(double time, const Vec3& position);  // throws on t <= last t
  const std::vector<Sample>& samples() const { return samples_; }
  std::size_t size() const { return samples_.size(); }
  bool empty() const { return samples_.empty(); }
  const std::string& label() const { return label_; }
  void set_label(std::string label) { label_ = std::move(label); }

 private:
  std::vector<Sample> samples_;
  std::string label_;
};

struct PairedSample {
  double time_a;
  Vec3 a;
  double time_b;
  Vec3 b;
};

inline constexpr double kDefaultPairingGap = 1.0 / 60.0;  // seconds

/// Nearest-timestamp pairing: each sample of `a` is paired with the closest
/// sample of `b` within max_gap; samples without a close partner are
/// dropped. Throws NoOverlap when no pair survives.
std::vector<PairedSample> align_timestamps(const Trajectory& a,
                                           const Trajectory& b,
                                           double max_gap = kDefaultPairingGap);

/// Mean of per-pair Euclidean distances, millimeters.
double mae_mm(const Trajectory& a, const Trajectory& b,
              double max_gap = kDefaultPairingGap);

/// Population standard deviation of per-pair Euclidean distances, mm.
double std_mm(const Trajectory& a, const Trajectory& b,
              double max_gap = kDefaultPairingGap);

/// Second derivative of a trajectory via non-uniform central differences;
/// exact for quadratics. The result has n-2 samples on the interior times.
Trajectory second_derivative(const Trajectory& t);

/// Mean Euclidean distance between the two trajectories' second
/// derivatives, m/s^2. Requires at least 3 paired samples per side.
double acc_ms2(const Trajectory& a, const Trajectory& b,
               double max_gap = kDefaultPairingGap);

/// Population standard deviation of the wrist-to-end-effector distance, mm.
double safety_std_mm(const Trajectory& wrist, const Trajectory& ee,
                     double max_gap = kDefaultPairingGap);

struct MetricReport {
  std::string label;
  double mae_mm = 0.0;
  double std_mm = 0.0;
  double acc_ms2 = 0.0;
  std::optional<double> safety_std_mm;
  std::size_t sample_count = 0;
};

MetricReport evaluate_trajectories(const Trajectory& truth,
                                   const Trajectory& predicted,
                                   double max_gap = kDefaultPairingGap);

struct RigidTransform {
  Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();
  Vec3 translation = Vec3::Zero();

  Vec3 apply(const Vec3& p) const { return rotation * p + translation; }
};

/// Least-squares rigid registration (Kabsch): returns the proper rotation
/// (det = +1) and translation minimizing RMSD of R*source + t vs target.
/// Throws Degenerate for fewer than 3 points or collinear/coincident sets.
RigidTransform kabsch_align(const std::vector<Vec3>& source,
                            const std::vector<Vec3>& target);

}  // namespace skelpipe
