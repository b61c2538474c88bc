// SPDX-License-Identifier: Apache-2.0
#include "skelpipe/metrics.hpp"

#include <cmath>

#include <Eigen/SVD>
#include <Eigen/LU>

#include "skelpipe/errors.hpp"

namespace skelpipe {

void Trajectory::append(double time, const Vec3& position) {
  if (!samples_.empty() && time <= samples_.back().time) {
    throw NonMonotoneTimestamp("trajectory timestamps must strictly increase",
                               samples_.size() + 1);
  }
  samples_.push_back({time, position});
}

std::vector<PairedSample> align_timestamps(const Trajectory& a,
                                           const Trajectory& b,
                                           double max_gap) {
  if (a.empty() || b.empty()) throw NoOverlap("empty trajectory");

  std::vector<PairedSample> pairs;
  const auto& sa = a.samples();
  const auto& sb = b.samples();
  std::size_t j = 0;
  for (const auto& s : sa) {
    while (j + 1 < sb.size() &&
           std::abs(sb[j + 1].time - s.time) <= std::abs(sb[j].time - s.time)) {
      ++j;
    }
    if (std::abs(sb[j].time - s.time) <= max_gap) {
      pairs.push_back({s.time, s.position, sb[j].time, sb[j].position});
    }
  }
  if (pairs.empty()) throw NoOverlap("no samples pair within max_gap");
  return pairs;
}

namespace {

std::vector<double> paired_distances(const Trajectory& a, const Trajectory& b,
                                     double max_gap) {
  std::vector<double> out;
  for (const auto& p : align_timestamps(a, b, max_gap)) {
    out.push_back((p.a - p.b).norm());
  }
  return out;
}

double mean(const std::vector<double>& v) {
  double sum = 0.0;
  for (double x : v) sum += x;
  return sum / static_cast<double>(v.size());
}

double population_std(const std::vector<double>& v) {
  const double mu = mean(v);
  double sq = 0.0;
  for (double x : v) sq += (x - mu) * (x - mu);
  return std::sqrt(sq / static_cast<double>(v.size()));
}

}  // namespace

double mae_mm(const Trajectory& a, const Trajectory& b, double max_gap) {
  return 1000.0 * mean(paired_distances(a, b, max_gap));
}

double std_mm(const Trajectory& a, const Trajectory& b, double max_gap) {
  return 1000.0 * population_std(paired_distances(a, b, max_gap));
}

Trajectory second_derivative(const Trajectory& t) {
  if (t.size() < 3) throw TooShort("second derivative needs >= 3 samples");
  Trajectory out(t.label());
  const auto& s = t.samples();
  for (std::size_t i = 1; i + 1 < s.size(); ++i) {
    const double h0 = s[i].time - s[i - 1].time;
    const double h1 = s[i + 1].time - s[i].time;
    // Three-point second derivative on a non-uniform grid; exact for
    // quadratics.
    const Vec3 dd = 2.0 *
                    (h1 * s[i - 1].position - (h0 + h1) * s[i].position +
                     h0 * s[i + 1].position) /
                    (h0 * h1 * (h0 + h1));
    out.append(s[i].time, dd);
  }
  return out;
}

double acc_ms2(const Trajectory& a, const Trajectory& b, double max_gap) {
  if (a.size() < 3 || b.size() < 3) {
    throw TooShort("acc needs >= 3 samples per trajectory");
  }
  const Trajectory da = second_derivative(a);
  const Trajectory db = second_derivative(b);
  std::vector<double> dists;
  for (const auto& p : align_timestamps(da, db, max_gap)) {
    dists.push_back((p.a - p.b).norm());
  }
  return mean(dists);
}

double safety_std_mm(const Trajectory& wrist, const Trajectory& ee,
                     double max_gap) {
  return 1000.0 * population_std(paired_distances(wrist, ee, max_gap));
}

MetricReport evaluate_trajectories(const Trajectory& truth,
                                   const Trajectory& predicted,
                                   double max_gap) {
  MetricReport report;
  report.label = predicted.label();
  report.mae_mm = mae_mm(truth, predicted, max_gap);
  report.std_mm = std_mm(truth, predicted, max_gap);
  report.acc_ms2 = acc_ms2(truth, predicted, max_gap);
  report.sample_count = align_timestamps(truth, predicted, max_gap).size();
  return report;
}

RigidTransform kabsch_align(const std::vector<Vec3>& source,
                            const std::vector<Vec3>& target) {
  if (source.size() != target.size()) {
    throw ShapeMismatch("kabsch_align: point counts differ");
  }
  const std::size_t n = source.size();
  if (n < 3) throw Degenerate("kabsch_align needs >= 3 correspondences");

  Vec3 src_mean = Vec3::Zero();
  Vec3 tgt_mean = Vec3::Zero();
  for (std::size_t i = 0; i < n; ++i) {
    src_mean += source[i];
    tgt_mean += target[i];
  }
  src_mean /= static_cast<double>(n);
  tgt_mean /= static_cast<double>(n);

  Eigen::Matrix3d cross = Eigen::Matrix3d::Zero();
  double scale = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec3 s = source[i] - src_mean;
    cross += (target[i] - tgt_mean) * s.transpose();
    scale += s.squaredNorm();
  }

  Eigen::JacobiSVD<Eigen::Matrix3d> svd(
      cross, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::Vector3d sv = svd.singularValues();
  // Collinear or coincident sources leave the rotation about the degenerate
  // axis unconstrained.
  if (scale <= 0.0 || sv(1) <= 1e-12 * std::max(sv(0), 1e-300)) {
    throw Degenerate("kabsch_align: degenerate point configuration");
  }

  Eigen::Matrix3d d = Eigen::Matrix3d::Identity();
  if ((svd.matrixU() * svd.matrixV().transpose()).determinant() < 0.0) {
    d(2, 2) = -1.0;  // reflection fix: flip the smallest singular direction
  }
  RigidTransform rt;
  rt.rotation = svd.matrixU() * d * svd.matrixV().transpose();
  rt.translation = tgt_mean - rt.rotation * src_mean;
  return rt;
}

}  // namespace skelpipe
