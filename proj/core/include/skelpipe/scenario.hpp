// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "skelpipe/metrics.hpp"
#include "skelpipe/skeleton.hpp"

namespace skelpipe {

enum class Task {
  t0_sinusoid,         // operator wrist sweeps right-to-left over obstacles
  t1_interaction,      // two people alternate reaches to a shared build point
  t2_handover_close,   // wrists converge below 10 cm repeatedly
  t3_heavy_occlusion,  // box handover with scripted total occlusions
  custom,
};

std::string_view task_name(Task task);
std::optional<Task> task_from_name(std::string_view name);

struct NoiseSpec {
  double gaussian_sigma = 0.02;    // meters, per axis
  double outlier_rate = 0.05;      // per keypoint per frame
  double outlier_magnitude = 0.5;  // meters, displacement of an outlier
  double dropout_rate = 0.02;      // per keypoint per frame
  // Confidence model per corruption kind: clean U(0.7,1.0), outliers
  // U(0.3,0.7), hallucinations during occlusion U(0.05,0.35).
};

struct OcclusionWindow {
  int person = 0;
  std::vector<Joint> joints;  // empty means the whole skeleton
  double start = 0.0;         // seconds, inclusive
  double end = 0.0;           // seconds, exclusive
};

struct ScenarioSpec {
  Task task = Task::t0_sinusoid;
  double duration = 20.0;  // seconds
  double rate = 30.0;      // Hz
  int persons = 2;
  NoiseSpec noise;
  std::vector<OcclusionWindow> occlusions;  // t3 scripts defaults when empty
  std::uint64_t seed = 0;
};

struct ScenarioData {
  // truth[person][joint]: noise-free complete trajectories.
  std::vector<std::map<Joint, Trajectory>> truth;
  std::vector<Frame> truth_frames;        // same data as frames, ids = person
  std::vector<Frame> measurement_frames;  // corrupted streams, no ids
};

/// Deterministic per seed. Throws InvalidSpec on invalid parameters.
ScenarioData generate(const ScenarioSpec& spec);

/// Standing skeleton whose every graph edge has length proportion * height
/// exactly; root/neck placed consistently with their synthesis rules.
/// The body faces the camera at `root_xz` offset (x lateral, z depth) with
/// feet at floor_y.
Skeleton body_from_height(double height, double x = 0.0, double z = 2.0,
                          double floor_y = -1.2);

}  // namespace skelpipe
