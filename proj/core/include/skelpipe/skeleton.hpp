// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include <Eigen/Core>

namespace skelpipe {

using Vec3 = Eigen::Vector3d;

/// Fixed internal joint vocabulary: 12 basic limb/torso joints plus nose,
/// neck, and the synthesized root. Backbone adapters map onto these names.
enum class Joint : std::uint8_t {
  nose,
  neck,
  left_shoulder,
  right_shoulder,
  left_elbow,
  right_elbow,
  left_wrist,
  right_wrist,
  left_hip,
  right_hip,
  left_knee,
  right_knee,
  left_ankle,
  right_ankle,
  root,
};

inline constexpr std::size_t kJointCount = 15;

std::string_view joint_name(Joint j);
std::optional<Joint> joint_from_name(std::string_view name);

/// All joints in enum order.
const std::array<Joint, kJointCount>& all_joints();

/// One named 3D joint measurement: position in meters (camera frame) and
/// detection confidence in [0,1].
struct Keypoint {
  Vec3 position{0.0, 0.0, 0.0};
  double confidence{0.0};
};

double clamp_confidence(double c);

/// Partial joint->keypoint map for one person in one frame. Missing joints
/// are represented by absence, never by sentinel coordinates.
class Skeleton {
 public:
  std::optional<std::int64_t> track_id;
  std::optional<double> assignment_cost;
  std::optional<double> estimated_height;

  bool has(Joint j) const { return joints_[index(j)].has_value(); }
  const Keypoint& at(Joint j) const { return *joints_[index(j)]; }
  std::optional<Keypoint> find(Joint j) const { return joints_[index(j)]; }

  void set(Joint j, Keypoint kp);
  void erase(Joint j) { joints_[index(j)].reset(); }

  std::size_t size() const;
  bool empty() const { return size() == 0; }

  /// Present joints in enum order.
  std::vector<std::pair<Joint, Keypoint>> items() const;

  template <typename F>
  void for_each(F&& f) const {
    for (std::size_t i = 0; i < kJointCount; ++i) {
      if (joints_[i]) f(static_cast<Joint>(i), *joints_[i]);
    }
  }

 private:
  static std::size_t index(Joint j) { return static_cast<std::size_t>(j); }
  std::array<std::optional<Keypoint>, kJointCount> joints_;
};

/// Timestamped collection of skeletons (one pose-estimation tick).
struct Frame {
  double timestamp{0.0};
  std::vector<Skeleton> skeletons;
};

/// Body-segment graph: a tree rooted at Joint::root. Each edge carries the
/// expected segment-length/stature ratio used for height estimation.
struct SkeletonGraph {
  struct Edge {
    Joint parent;
    Joint child;
    double proportion;  // segment length / body height, in (0, 0.5)
  };
  std::vector<Edge> edges;

  /// Edges whose both endpoints are present in the skeleton.
  std::vector<Edge> present_edges(const Skeleton& s) const;
};

/// Fixed topology with anthropometric segment/stature ratios derived from
/// the Drillis-Contini landmark tables (see anthropometry.hpp).
const SkeletonGraph& default_graph();

/// Adds a root keypoint at the mean of all present shoulder and hip
/// positions; confidence is the mean of the contributors. Returns the
/// skeleton unchanged when no shoulder or no hip is present.
Skeleton synthesize_root(Skeleton s);

/// Adds a neck keypoint at the shoulder midpoint when absent.
Skeleton synthesize_neck(Skeleton s);

}  // namespace skelpipe
