// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>

#include "skelpipe/skeleton.hpp"

namespace skelpipe {

struct SpatialConfig {
  double distance_threshold = 3.0;  // camera-to-root gate, meters (inclusive)
  double reward = 0.10;
  double penalty = 0.10;
  double proportion_tolerance = 0.20;  // valid-bone band around ratio*height
  double height_min = 1.0;             // plausible stature bounds, meters
  double height_max = 2.2;
  Vec3 camera_origin{0.0, 0.0, 0.0};
};

/// Keep iff the root lies within distance_threshold of the camera origin.
/// A skeleton without a root is discarded.
bool gate_by_distance(const Skeleton& s, const SpatialConfig& cfg);

/// Mean of per-edge stature hypotheses (segment length / proportion) that
/// fall inside [height_min, height_max]. Absent when no hypothesis survives.
std::optional<double> estimate_height(const Skeleton& s,
                                      const SkeletonGraph& graph,
                                      const SpatialConfig& cfg);

/// Bone-length plausibility check against an estimated stature.
bool edge_valid(const Skeleton& s, const SkeletonGraph::Edge& edge,
                double height, const SpatialConfig& cfg);

/// Reward/penalize keypoint confidences by bone-length plausibility:
/// every incident bone valid -> x(1+2r); two or more invalid -> x(1-2p);
/// otherwise each valid bone contributes x(1+r) and each invalid x(1-p).
/// Confidences are clamped to [0,1]; positions never change.
Skeleton adjust_confidences(const Skeleton& s, const SkeletonGraph& graph,
                            double height, const SpatialConfig& cfg);

/// Full node: synthesize root/neck, gate by distance, estimate height, and
/// adjust confidences. Empty result means the skeleton was discarded.
/// Without a height estimate the confidences pass through unchanged.
std::optional<Skeleton> evaluate_skeleton(Skeleton s,
                                          const SkeletonGraph& graph,
                                          const SpatialConfig& cfg);

/// Applies evaluate_skeleton to every skeleton, keeping the survivors.
Frame evaluate_frame(const Frame& frame, const SkeletonGraph& graph,
                     const SpatialConfig& cfg);

}  // namespace skelpipe
