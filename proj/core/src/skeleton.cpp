// SPDX-License-Identifier: Apache-2.0
#include "skelpipe/skeleton.hpp"

#include <algorithm>

#include "skelpipe/anthropometry.hpp"

namespace skelpipe {

namespace {

constexpr std::array<std::string_view, kJointCount> kJointNames = {
    "nose",       "neck",        "left_shoulder", "right_shoulder",
    "left_elbow", "right_elbow", "left_wrist",    "right_wrist",
    "left_hip",   "right_hip",   "left_knee",     "right_knee",
    "left_ankle", "right_ankle", "root",
};

}  // namespace

std::string_view joint_name(Joint j) {
  return kJointNames[static_cast<std::size_t>(j)];
}

std::optional<Joint> joint_from_name(std::string_view name) {
  for (std::size_t i = 0; i < kJointCount; ++i) {
    if (kJointNames[i] == name) return static_cast<Joint>(i);
  }
  return std::nullopt;
}

const std::array<Joint, kJointCount>& all_joints() {
  static const std::array<Joint, kJointCount> joints = [] {
    std::array<Joint, kJointCount> a{};
    for (std::size_t i = 0; i < kJointCount; ++i) a[i] = static_cast<Joint>(i);
    return a;
  }();
  return joints;
}

double clamp_confidence(double c) { return std::clamp(c, 0.0, 1.0); }

void Skeleton::set(Joint j, Keypoint kp) {
  kp.confidence = clamp_confidence(kp.confidence);
  joints_[index(j)] = kp;
}

std::size_t Skeleton::size() const {
  std::size_t n = 0;
  for (const auto& kp : joints_) {
    if (kp) ++n;
  }
  return n;
}

std::vector<std::pair<Joint, Keypoint>> Skeleton::items() const {
  std::vector<std::pair<Joint, Keypoint>> out;
  out.reserve(size());
  for_each([&](Joint j, const Keypoint& kp) { out.emplace_back(j, kp); });
  return out;
}

std::vector<SkeletonGraph::Edge> SkeletonGraph::present_edges(
    const Skeleton& s) const {
  std::vector<Edge> out;
  for (const Edge& e : edges) {
    if (s.has(e.parent) && s.has(e.child)) out.push_back(e);
  }
  return out;
}

const SkeletonGraph& default_graph() {
  namespace ap = anthropometry;
  static const SkeletonGraph graph = {{
      {Joint::root, Joint::neck, ap::kRootToNeck},
      {Joint::root, Joint::left_hip, ap::kRootToHip},
      {Joint::root, Joint::right_hip, ap::kRootToHip},
      {Joint::neck, Joint::nose, ap::kNeckToNose},
      {Joint::neck, Joint::left_shoulder, ap::kHalfShoulderWidth},
      {Joint::neck, Joint::right_shoulder, ap::kHalfShoulderWidth},
      {Joint::left_shoulder, Joint::left_elbow, ap::kUpperArm},
      {Joint::right_shoulder, Joint::right_elbow, ap::kUpperArm},
      {Joint::left_elbow, Joint::left_wrist, ap::kForearm},
      {Joint::right_elbow, Joint::right_wrist, ap::kForearm},
      {Joint::left_hip, Joint::left_knee, ap::kThigh},
      {Joint::right_hip, Joint::right_knee, ap::kThigh},
      {Joint::left_knee, Joint::left_ankle, ap::kShank},
      {Joint::right_knee, Joint::right_ankle, ap::kShank},
  }};
  return graph;
}

namespace {

Skeleton synthesize_mean(Skeleton s, Joint target,
                         std::initializer_list<Joint> required_groups_a,
                         std::initializer_list<Joint> required_groups_b) {
  Vec3 sum = Vec3::Zero();
  double conf_sum = 0.0;
  int n = 0;
  bool have_a = false;
  bool have_b = false;
  auto accumulate = [&](std::initializer_list<Joint> group, bool& have) {
    for (Joint j : group) {
      if (!s.has(j)) continue;
      sum += s.at(j).position;
      conf_sum += s.at(j).confidence;
      ++n;
      have = true;
    }
  };
  accumulate(required_groups_a, have_a);
  accumulate(required_groups_b, have_b);
  if (!have_a || !have_b) return s;  // missing joints: unchanged
  s.set(target, Keypoint{sum / n, conf_sum / n});
  return s;
}

}  // namespace

Skeleton synthesize_root(Skeleton s) {
  return synthesize_mean(std::move(s), Joint::root,
                         {Joint::left_shoulder, Joint::right_shoulder},
                         {Joint::left_hip, Joint::right_hip});
}

Skeleton synthesize_neck(Skeleton s) {
  if (s.has(Joint::neck)) return s;
  return synthesize_mean(std::move(s), Joint::neck, {Joint::left_shoulder},
                         {Joint::right_shoulder});
}

}  // namespace skelpipe
