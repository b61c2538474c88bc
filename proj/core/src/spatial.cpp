// SPDX-License-Identifier: Apache-2.0
#include "skelpipe/spatial.hpp"

namespace skelpipe {

bool gate_by_distance(const Skeleton& s, const SpatialConfig& cfg) {
  if (!s.has(Joint::root)) return false;
  double dist = (s.at(Joint::root).position - cfg.camera_origin).norm();
  return dist <= cfg.distance_threshold;
}

std::optional<double> estimate_height(const Skeleton& s,
                                      const SkeletonGraph& graph,
                                      const SpatialConfig& cfg) {
  double sum = 0.0;
  int n = 0;
  for (const auto& e : graph.present_edges(s)) {
    double len = (s.at(e.parent).position - s.at(e.child).position).norm();
    double hypothesis = len / e.proportion;
    if (hypothesis < cfg.height_min || hypothesis > cfg.height_max) continue;
    sum += hypothesis;
    ++n;
  }
  if (n == 0) return std::nullopt;
  return sum / n;
}

bool edge_valid(const Skeleton& s, const SkeletonGraph::Edge& edge,
                double height, const SpatialConfig& cfg) {
  double len = (s.at(edge.parent).position - s.at(edge.child).position).norm();
  double expected = edge.proportion * height;
  return len >= (1.0 - cfg.proportion_tolerance) * expected &&
         len <= (1.0 + cfg.proportion_tolerance) * expected;
}

Skeleton adjust_confidences(const Skeleton& s, const SkeletonGraph& graph,
                            double height, const SpatialConfig& cfg) {
  std::array<int, kJointCount> valid_count{};
  std::array<int, kJointCount> invalid_count{};
  for (const auto& e : graph.present_edges(s)) {
    bool ok = edge_valid(s, e, height, cfg);
    auto& counter = ok ? valid_count : invalid_count;
    ++counter[static_cast<std::size_t>(e.parent)];
    ++counter[static_cast<std::size_t>(e.child)];
  }

  Skeleton out = s;
  s.for_each([&](Joint j, const Keypoint& kp) {
    int valid = valid_count[static_cast<std::size_t>(j)];
    int invalid = invalid_count[static_cast<std::size_t>(j)];
    double factor = 1.0;
    if (invalid == 0 && valid >= 1) {
      factor = 1.0 + 2.0 * cfg.reward;
    } else if (invalid >= 2) {
      factor = 1.0 - 2.0 * cfg.penalty;
    } else {
      for (int k = 0; k < valid; ++k) factor *= 1.0 + cfg.reward;
      for (int k = 0; k < invalid; ++k) factor *= 1.0 - cfg.penalty;
    }
    Keypoint adjusted = kp;
    adjusted.confidence = clamp_confidence(kp.confidence * factor);
    out.set(j, adjusted);
  });
  return out;
}

std::optional<Skeleton> evaluate_skeleton(Skeleton s,
                                          const SkeletonGraph& graph,
                                          const SpatialConfig& cfg) {
  s = synthesize_neck(std::move(s));
  s = synthesize_root(std::move(s));
  if (!gate_by_distance(s, cfg)) return std::nullopt;
  s.estimated_height = estimate_height(s, graph, cfg);
  if (s.estimated_height) {
    s = adjust_confidences(s, graph, *s.estimated_height, cfg);
  }
  return s;
}

Frame evaluate_frame(const Frame& frame, const SkeletonGraph& graph,
                     const SpatialConfig& cfg) {
  Frame out;
  out.timestamp = frame.timestamp;
  for (const Skeleton& s : frame.skeletons) {
    if (auto kept = evaluate_skeleton(s, graph, cfg)) {
      out.skeletons.push_back(std::move(*kept));
    }
  }
  return out;
}

}  // namespace skelpipe
