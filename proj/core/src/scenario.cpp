// SPDX-License-Identifier: Apache-2.0
#include "skelpipe/scenario.hpp"

#include <cmath>
#include <random>

#include "skelpipe/anthropometry.hpp"
#include "skelpipe/errors.hpp"

namespace skelpipe {

namespace {

constexpr double kPi = 3.14159265358979323846;

// The 13 joints an HPE-style backbone emits (neck and root are synthesized
// downstream by the spatial node).
constexpr std::array<Joint, 13> kBackboneJoints = {
    Joint::nose,        Joint::left_shoulder, Joint::right_shoulder,
    Joint::left_elbow,  Joint::right_elbow,   Joint::left_wrist,
    Joint::right_wrist, Joint::left_hip,      Joint::right_hip,
    Joint::left_knee,   Joint::right_knee,    Joint::left_ankle,
    Joint::right_ankle,
};

struct PersonSetup {
  double height;
  double x;
  double z;
  double sway_phase;
};

std::vector<PersonSetup> person_setups(const ScenarioSpec& spec) {
  std::vector<PersonSetup> out;
  out.push_back({1.75, -0.45, 2.0, 0.0});  // operator
  if (spec.persons > 1) out.push_back({1.68, 0.55, 2.1, 1.7});
  for (int k = 2; k < spec.persons; ++k) {
    const double side = (k % 2 == 0) ? 0.9 : -0.9;
    out.push_back({1.60 + 0.05 * (k % 3), side, 2.4 + 0.1 * k, 0.9 * k});
  }
  return out;
}

// Two-link arm IK: pin the wrist (clamped into reach) and place the elbow
// in the plane spanned by the shoulder-wrist axis and gravity, sagging
// down. Segment lengths stay exact by construction.
void pose_arm(Skeleton& body, bool left, Vec3 wrist_target, double height) {
  const Joint shoulder = left ? Joint::left_shoulder : Joint::right_shoulder;
  const Joint elbow = left ? Joint::left_elbow : Joint::right_elbow;
  const Joint wrist = left ? Joint::left_wrist : Joint::right_wrist;
  const double l1 = anthropometry::kUpperArm * height;
  const double l2 = anthropometry::kForearm * height;
  const Vec3 s = body.at(shoulder).position;

  Vec3 to_wrist = wrist_target - s;
  double d = to_wrist.norm();
  const double d_max = 0.9995 * (l1 + l2);
  const double d_min = std::max(1.02 * std::abs(l1 - l2), 0.05);
  if (d < 1e-9) {
    to_wrist = Vec3(0.0, -d_min, 0.0);
    d = d_min;
  } else if (d > d_max) {
    to_wrist *= d_max / d;
    d = d_max;
  } else if (d < d_min) {
    to_wrist *= d_min / d;
    d = d_min;
  }

  const Vec3 u = to_wrist / d;
  const double a = (l1 * l1 - l2 * l2 + d * d) / (2.0 * d);
  const double h = std::sqrt(std::max(l1 * l1 - a * a, 0.0));
  Vec3 n = Vec3(0.0, -1.0, 0.0) - Vec3(0.0, -1.0, 0.0).dot(u) * u;
  if (n.norm() < 1e-9) n = Vec3(0.0, 0.0, -1.0) - Vec3(0.0, 0.0, -1.0).dot(u) * u;
  n.normalize();

  body.set(elbow, Keypoint{s + a * u + h * n, 1.0});
  body.set(wrist, Keypoint{s + to_wrist, 1.0});
}

double ease_cycle(double t, double freq) {
  return 0.5 * (1.0 - std::cos(2.0 * kPi * freq * t));
}

Skeleton person_truth(const ScenarioSpec& spec,
                      const std::vector<PersonSetup>& setups, int person,
                      double t) {
  const PersonSetup& p = setups[person];
  const double sway_x = 0.02 * std::sin(2.0 * kPi * 0.1 * t + p.sway_phase);
  const double sway_z = 0.01 * std::sin(2.0 * kPi * 0.13 * t + p.sway_phase);
  Skeleton body =
      body_from_height(p.height, p.x + sway_x, p.z + sway_z, -1.2);

  const Vec3 left_shoulder = body.at(Joint::left_shoulder).position;
  const Vec3 right_shoulder = body.at(Joint::right_shoulder).position;
  const double floor_y = -1.2;

  switch (spec.task) {
    case Task::t0_sinusoid: {
      if (person != 0) break;  // the collaborator only watches
      // Lateral sweep with a vertical sinusoid, as if carrying a small
      // object over obstacles at tabletop pace.
      const Vec3 target =
          left_shoulder +
          Vec3(0.26 * std::sin(2.0 * kPi * t / 10.0),
               -0.32 + 0.06 * (1.0 - std::cos(2.0 * kPi * 0.2 * t)),
               -0.26);
      pose_arm(body, true, target, p.height);
      break;
    }
    case Task::t1_interaction: {
      if (person > 1) break;
      const Vec3 build_point(0.05, floor_y + 1.05, 1.80);
      const double phase = person == 0 ? 0.0 : kPi;
      const double blend =
          0.5 * (1.0 + std::sin(2.0 * kPi * 0.1 * t + phase));
      const bool left = person == 0;
      const Vec3 shoulder = left ? left_shoulder : right_shoulder;
      const Vec3 rest = shoulder + Vec3(0.0, -0.30, -0.18);
      pose_arm(body, left, rest + blend * (build_point - rest), p.height);
      break;
    }
    case Task::t2_handover_close: {
      if (person > 1) break;
      const Vec3 handover(0.05, floor_y + 1.05, 1.85);
      const double blend = ease_cycle(t, 0.1);
      const bool left = person == 0;
      const Vec3 shoulder = left ? left_shoulder : right_shoulder;
      const Vec3 rest = shoulder + Vec3(0.0, -0.30, -0.18);
      const Vec3 grip = handover + Vec3(left ? -0.04 : 0.04, 0.0, 0.0);
      pose_arm(body, left, rest + blend * (grip - rest), p.height);
      break;
    }
    case Task::t3_heavy_occlusion: {
      if (person > 1) break;
      // A box carried with both hands travels between the two people.
      const Vec3 box_near(-0.35, floor_y + 1.0, 1.75);
      const Vec3 box_far(0.30, floor_y + 1.0, 1.80);
      const double blend = ease_cycle(t, 2.0 / spec.duration);
      const Vec3 box = box_near + blend * (box_far - box_near);
      if (person == 0) {
        pose_arm(body, true, box + Vec3(0.10, 0.0, 0.0), p.height);
        pose_arm(body, false, box + Vec3(-0.10, 0.0, 0.0), p.height);
      } else {
        const Vec3 rest = right_shoulder + Vec3(0.0, -0.30, -0.18);
        pose_arm(body, false, rest + 0.6 * blend * (box - rest), p.height);
      }
      break;
    }
    case Task::custom:
      if (person == 0) {
        const Vec3 target = left_shoulder +
                            Vec3(0.22 * std::sin(2.0 * kPi * t / 9.0),
                                 -0.30 + 0.05 * std::sin(2.0 * kPi * 0.15 * t),
                                 -0.24);
        pose_arm(body, true, target, p.height);
      }
      break;
  }
  return body;
}

std::vector<OcclusionWindow> default_t3_occlusions(const ScenarioSpec& spec) {
  const double d = spec.duration;
  return {
      {0, {Joint::left_wrist, Joint::left_elbow}, 0.25 * d, 0.25 * d + 1.0},
      {0, {}, 0.45 * d, 0.45 * d + 1.0},
      {0,
       {Joint::left_wrist, Joint::left_elbow, Joint::left_shoulder},
       0.70 * d,
       0.70 * d + 1.5},
  };
}

bool joint_occluded(const std::vector<OcclusionWindow>& windows, int person,
                    Joint j, double t) {
  for (const auto& w : windows) {
    if (w.person != person || t < w.start || t >= w.end) continue;
    if (w.joints.empty()) return true;
    for (Joint wj : w.joints) {
      if (wj == j) return true;
    }
  }
  return false;
}

Vec3 random_unit(std::mt19937_64& rng) {
  std::normal_distribution<double> unit;
  for (;;) {
    const Vec3 v(unit(rng), unit(rng), unit(rng));
    const double n = v.norm();
    if (n > 1e-9) return v / n;
  }
}

void validate(const ScenarioSpec& spec) {
  if (spec.rate <= 0.0) throw InvalidSpec("rate must be positive");
  if (spec.duration <= 0.0) throw InvalidSpec("duration must be positive");
  if (spec.persons < 1) throw InvalidSpec("persons must be >= 1");
  const NoiseSpec& n = spec.noise;
  if (n.gaussian_sigma < 0.0) throw InvalidSpec("gaussian_sigma must be >= 0");
  for (double p : {n.outlier_rate, n.dropout_rate}) {
    if (p < 0.0 || p > 1.0) throw InvalidSpec("rates must lie in [0,1]");
  }
  if (n.outlier_magnitude < 0.0) {
    throw InvalidSpec("outlier_magnitude must be >= 0");
  }
  for (const auto& w : spec.occlusions) {
    if (w.person < 0 || w.person >= spec.persons) {
      throw InvalidSpec("occlusion window person out of range");
    }
    if (w.start < 0.0 || w.end > spec.duration || w.end < w.start) {
      throw InvalidSpec("occlusion window outside scenario duration");
    }
  }
}

}  // namespace

std::string_view task_name(Task task) {
  switch (task) {
    case Task::t0_sinusoid: return "t0";
    case Task::t1_interaction: return "t1";
    case Task::t2_handover_close: return "t2";
    case Task::t3_heavy_occlusion: return "t3";
    case Task::custom: return "custom";
  }
  return "custom";
}

std::optional<Task> task_from_name(std::string_view name) {
  if (name == "t0") return Task::t0_sinusoid;
  if (name == "t1") return Task::t1_interaction;
  if (name == "t2") return Task::t2_handover_close;
  if (name == "t3") return Task::t3_heavy_occlusion;
  if (name == "custom") return Task::custom;
  return std::nullopt;
}

Skeleton body_from_height(double height, double x, double z, double floor_y) {
  namespace ap = anthropometry;
  const double h = height;
  Skeleton s;
  auto put = [&](Joint j, double px, double py, double pz) {
    s.set(j, Keypoint{Vec3(x + px, floor_y + py, z + pz), 1.0});
  };

  put(Joint::nose, 0.0, ap::kNoseHeight * h, 0.0);
  put(Joint::left_shoulder, ap::kHalfShoulderWidth * h, ap::kShoulderHeight * h, 0.0);
  put(Joint::right_shoulder, -ap::kHalfShoulderWidth * h, ap::kShoulderHeight * h, 0.0);
  put(Joint::left_hip, ap::kHalfHipWidth * h, ap::kHipHeight * h, 0.0);
  put(Joint::right_hip, -ap::kHalfHipWidth * h, ap::kHipHeight * h, 0.0);
  put(Joint::left_knee, ap::kHalfHipWidth * h, ap::kKneeHeight * h, 0.0);
  put(Joint::right_knee, -ap::kHalfHipWidth * h, ap::kKneeHeight * h, 0.0);
  put(Joint::left_ankle, ap::kHalfHipWidth * h, ap::kAnkleHeight * h, 0.0);
  put(Joint::right_ankle, -ap::kHalfHipWidth * h, ap::kAnkleHeight * h, 0.0);
  // Arms hang straight down at rest.
  put(Joint::left_elbow, ap::kHalfShoulderWidth * h,
      (ap::kShoulderHeight - ap::kUpperArm) * h, 0.0);
  put(Joint::right_elbow, -ap::kHalfShoulderWidth * h,
      (ap::kShoulderHeight - ap::kUpperArm) * h, 0.0);
  put(Joint::left_wrist, ap::kHalfShoulderWidth * h,
      (ap::kShoulderHeight - ap::kUpperArm - ap::kForearm) * h, 0.0);
  put(Joint::right_wrist, -ap::kHalfShoulderWidth * h,
      (ap::kShoulderHeight - ap::kUpperArm - ap::kForearm) * h, 0.0);

  Skeleton with_neck = synthesize_neck(std::move(s));
  return synthesize_root(std::move(with_neck));
}

ScenarioData generate(const ScenarioSpec& spec) {
  validate(spec);

  ScenarioSpec effective = spec;
  if (spec.task == Task::t3_heavy_occlusion && spec.occlusions.empty()) {
    effective.occlusions = default_t3_occlusions(spec);
  }

  const auto setups = person_setups(effective);
  const int frames = static_cast<int>(std::floor(effective.duration * effective.rate));
  const bool zero_noise = effective.noise.gaussian_sigma == 0.0 &&
                          effective.noise.outlier_rate == 0.0 &&
                          effective.noise.dropout_rate == 0.0;

  ScenarioData data;
  data.truth.resize(effective.persons);
  for (int person = 0; person < effective.persons; ++person) {
    for (Joint j : all_joints()) {
      data.truth[person].emplace(
          j, Trajectory("p" + std::to_string(person) + "." +
                        std::string(joint_name(j))));
    }
  }

  std::mt19937_64 rng(effective.seed);
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> u01(0.0, 1.0);

  for (int k = 0; k < frames; ++k) {
    const double t = static_cast<double>(k) / effective.rate;

    Frame truth_frame;
    truth_frame.timestamp = t;
    Frame meas_frame;
    meas_frame.timestamp = t;

    std::vector<Skeleton> truths;
    for (int person = 0; person < effective.persons; ++person) {
      Skeleton body = person_truth(effective, setups, person, t);
      for (const auto& [j, kp] : body.items()) {
        data.truth[person].at(j).append(t, kp.position);
      }
      Skeleton labeled = body;
      labeled.track_id = person;
      truth_frame.skeletons.push_back(std::move(labeled));
      truths.push_back(std::move(body));
    }

    for (int slot = 0; slot < effective.persons; ++slot) {
      // Rotate detection order across frames so identity must come from
      // the tracker, not from list position.
      const int person = (slot + k) % effective.persons;
      const Skeleton& body = truths[person];
      Skeleton detection;
      for (Joint j : kBackboneJoints) {
        const Vec3 truth_pos = body.at(j).position;
        if (joint_occluded(effective.occlusions, person, j, t)) {
          // Total occlusion: mostly no detection, sometimes a low-confidence
          // hallucination.
          if (u01(rng) < 0.7) continue;
          const double s = 4.0 * std::max(effective.noise.gaussian_sigma, 0.01);
          const Vec3 pos =
              truth_pos + Vec3(gauss(rng), gauss(rng), gauss(rng)) * s;
          const double c = 0.05 + 0.30 * u01(rng);
          detection.set(j, Keypoint{pos, c});
          continue;
        }
        if (u01(rng) < effective.noise.dropout_rate) continue;
        if (u01(rng) < effective.noise.outlier_rate) {
          const Vec3 pos =
              truth_pos + effective.noise.outlier_magnitude * random_unit(rng);
          const double c = 0.3 + 0.4 * u01(rng);
          detection.set(j, Keypoint{pos, c});
          continue;
        }
        if (zero_noise) {
          detection.set(j, Keypoint{truth_pos, 1.0});
        } else {
          const Vec3 pos = truth_pos + Vec3(gauss(rng), gauss(rng), gauss(rng)) *
                                           effective.noise.gaussian_sigma;
          const double c = 0.7 + 0.3 * u01(rng);
          detection.set(j, Keypoint{pos, c});
        }
      }
      if (!detection.empty()) meas_frame.skeletons.push_back(std::move(detection));
    }

    data.truth_frames.push_back(std::move(truth_frame));
    data.measurement_frames.push_back(std::move(meas_frame));
  }
  return data;
}

}  // namespace skelpipe
