// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <sstream>

#include "skelpipe/errors.hpp"
#include "skelpipe/scenario.hpp"
#include "skelpipe/spatial.hpp"
#include "skelpipe/stream_io.hpp"

using namespace skelpipe;

namespace {

// Identifies a person's detection by mean distance over common joints;
// robust to single-joint outliers and dropouts.
const Skeleton* find_person(const Frame& meas, const Skeleton& truth) {
  const Skeleton* best = nullptr;
  double best_mean = 0.3;  // persons sit ~1 m apart; outliers average out
  for (const Skeleton& s : meas.skeletons) {
    double sum = 0.0;
    int common = 0;
    s.for_each([&](Joint j, const Keypoint& kp) {
      if (!truth.has(j)) return;
      sum += (kp.position - truth.at(j).position).norm();
      ++common;
    });
    if (common == 0) continue;
    const double mean = sum / common;
    if (mean < best_mean) {
      best_mean = mean;
      best = &s;
    }
  }
  return best;
}

}  // namespace

TEST_CASE("body_from_height reproduces the forearm worked example") {
  const Skeleton body = body_from_height(1.712);
  const double forearm = (body.at(Joint::left_elbow).position -
                          body.at(Joint::left_wrist).position)
                             .norm();
  CHECK(forearm == doctest::Approx(0.250).epsilon(1e-3));

  // Every graph edge matches its proportion exactly.
  for (const auto& e : default_graph().edges) {
    const double len =
        (body.at(e.parent).position - body.at(e.child).position).norm();
    CHECK(len == doctest::Approx(e.proportion * 1.712).epsilon(1e-12));
  }
}

TEST_CASE("body_from_height closes the loop with height estimation") {
  const auto h =
      estimate_height(body_from_height(1.80), default_graph(), SpatialConfig{});
  REQUIRE(h.has_value());
  CHECK(*h == doctest::Approx(1.80).epsilon(1e-9));
}

TEST_CASE("bodies scale linearly with height") {
  const Skeleton small = body_from_height(1.0);
  const Skeleton tall = body_from_height(2.0);
  for (const auto& e : default_graph().edges) {
    const double ls =
        (small.at(e.parent).position - small.at(e.child).position).norm();
    const double lt =
        (tall.at(e.parent).position - tall.at(e.child).position).norm();
    CHECK(lt == doctest::Approx(2.0 * ls).epsilon(1e-12));
  }
}

TEST_CASE("zero noise reproduces the truth with full confidence") {
  ScenarioSpec spec;
  spec.task = Task::t0_sinusoid;
  spec.duration = 2.0;
  spec.noise = NoiseSpec{0.0, 0.0, 0.0, 0.0};
  const ScenarioData data = generate(spec);

  REQUIRE(data.measurement_frames.size() == 60);
  for (std::size_t k = 0; k < data.measurement_frames.size(); ++k) {
    const Frame& meas = data.measurement_frames[k];
    const Frame& truth = data.truth_frames[k];
    REQUIRE(meas.skeletons.size() == truth.skeletons.size());
    for (const Skeleton& m : meas.skeletons) {
      // Find the matching truth person by nearest root-less comparison.
      bool matched = false;
      for (const Skeleton& t : truth.skeletons) {
        bool all_equal = true;
        m.for_each([&](Joint j, const Keypoint& kp) {
          if (!t.has(j) || t.at(j).position != kp.position) all_equal = false;
        });
        if (all_equal) matched = true;
      }
      CHECK(matched);
      m.for_each([&](Joint, const Keypoint& kp) {
        CHECK(kp.confidence == 1.0);
      });
    }
  }
}

TEST_CASE("ground truth is complete: every joint in every frame") {
  ScenarioSpec spec;
  spec.task = Task::t3_heavy_occlusion;  // occlusions corrupt measurements only
  spec.duration = 3.0;
  const ScenarioData data = generate(spec);
  for (const Frame& f : data.truth_frames) {
    REQUIRE(f.skeletons.size() == 2);
    for (const Skeleton& s : f.skeletons) CHECK(s.size() == kJointCount);
  }
  for (const auto& joints : data.truth) {
    for (const auto& [j, traj] : joints) {
      CHECK(traj.size() == data.truth_frames.size());
    }
  }
}

TEST_CASE("scripted occlusion windows suppress or degrade measurements") {
  ScenarioSpec spec;
  spec.task = Task::custom;
  spec.duration = 6.0;
  spec.noise = NoiseSpec{0.0, 0.0, 0.0, 0.0};
  spec.occlusions = {{0, {Joint::left_wrist}, 100.0 / 30.0, 131.0 / 30.0}};
  const ScenarioData data = generate(spec);

  int absent = 0, degraded = 0;
  for (int k = 100; k <= 130; ++k) {
    const Frame& f = data.measurement_frames[k];
    const Skeleton* operator_meas =
        find_person(f, data.truth_frames[k].skeletons[0]);
    REQUIRE(operator_meas != nullptr);
    if (!operator_meas->has(Joint::left_wrist)) {
      ++absent;
    } else {
      CHECK(operator_meas->at(Joint::left_wrist).confidence < 0.4);
      ++degraded;
    }
  }
  CHECK(absent + degraded == 31);
  CHECK(absent > 0);
}

TEST_CASE("corruption statistics match the noise spec") {
  ScenarioSpec spec;
  spec.task = Task::t0_sinusoid;
  spec.duration = 30.0;  // 900 frames x 2 people x 13 joints ~ 23k samples
  spec.seed = 42;
  const ScenarioData data = generate(spec);

  int clean = 0, outliers = 0, dropouts = 0, total = 0;
  double clean_sq_sum = 0.0;
  int clean_axes = 0;
  for (std::size_t k = 0; k < data.measurement_frames.size(); ++k) {
    const Frame& meas = data.measurement_frames[k];
    for (int person = 0; person < 2; ++person) {
      const Skeleton& truth = data.truth_frames[k].skeletons[person];
      const Skeleton* det = find_person(meas, truth);
      if (det == nullptr) continue;
      for (Joint j : {Joint::nose, Joint::left_shoulder, Joint::right_shoulder,
                      Joint::left_elbow, Joint::right_elbow, Joint::left_wrist,
                      Joint::right_wrist, Joint::left_hip, Joint::right_hip,
                      Joint::left_knee, Joint::right_knee, Joint::left_ankle,
                      Joint::right_ankle}) {
        ++total;
        if (!det->has(j)) {
          ++dropouts;
          continue;
        }
        const Vec3 err = det->at(j).position - truth.at(j).position;
        if (std::abs(err.norm() - spec.noise.outlier_magnitude) < 1e-9) {
          ++outliers;
          CHECK(det->at(j).confidence >= 0.3);
          CHECK(det->at(j).confidence <= 0.7);
        } else {
          ++clean;
          for (int axis = 0; axis < 3; ++axis) {
            clean_sq_sum += err[axis] * err[axis];
            ++clean_axes;
          }
          CHECK(det->at(j).confidence >= 0.7);
        }
      }
    }
  }

  REQUIRE(total > 10000);
  const double sigma_hat = std::sqrt(clean_sq_sum / clean_axes);
  CHECK(sigma_hat ==
        doctest::Approx(spec.noise.gaussian_sigma).epsilon(0.05));
  CHECK(static_cast<double>(dropouts) / total ==
        doctest::Approx(spec.noise.dropout_rate).epsilon(0.05));
  // Outliers are drawn after the dropout gate.
  const double outlier_base = total - dropouts;
  CHECK(static_cast<double>(outliers) / outlier_base ==
        doctest::Approx(spec.noise.outlier_rate).epsilon(0.05));
}

TEST_CASE("t2 wrists approach within ten centimeters") {
  ScenarioSpec spec;
  spec.task = Task::t2_handover_close;
  spec.duration = 10.0;
  const ScenarioData data = generate(spec);
  double min_dist = 1e9;
  for (const Frame& f : data.truth_frames) {
    const Vec3 a = f.skeletons[0].at(Joint::left_wrist).position;
    const Vec3 b = f.skeletons[1].at(Joint::right_wrist).position;
    min_dist = std::min(min_dist, (a - b).norm());
  }
  CHECK(min_dist < 0.10);
}

TEST_CASE("generation is bit-deterministic per seed") {
  ScenarioSpec spec;
  spec.task = Task::t3_heavy_occlusion;
  spec.duration = 4.0;
  spec.seed = 7;

  auto dump = [](const ScenarioData& d) {
    std::ostringstream out;
    write_stream(out, d.measurement_frames);
    write_stream(out, d.truth_frames);
    return out.str();
  };
  const std::string a = dump(generate(spec));
  const std::string b = dump(generate(spec));
  CHECK(a == b);

  spec.seed = 8;
  CHECK(dump(generate(spec)) != a);
}

TEST_CASE("invalid specs are rejected") {
  ScenarioSpec spec;
  spec.rate = 0.0;
  CHECK_THROWS_AS(generate(spec), InvalidSpec);

  spec = ScenarioSpec{};
  spec.noise.outlier_rate = 1.5;
  CHECK_THROWS_AS(generate(spec), InvalidSpec);

  spec = ScenarioSpec{};
  spec.occlusions = {{0, {}, 5.0, 30.0}};  // beyond the 20 s default duration
  CHECK_THROWS_AS(generate(spec), InvalidSpec);

  spec = ScenarioSpec{};
  spec.occlusions = {{5, {}, 1.0, 2.0}};  // person out of range
  CHECK_THROWS_AS(generate(spec), InvalidSpec);
}

TEST_CASE("truth skeletons stay within the camera gate") {
  for (Task task : {Task::t0_sinusoid, Task::t1_interaction,
                    Task::t2_handover_close, Task::t3_heavy_occlusion}) {
    ScenarioSpec spec;
    spec.task = task;
    spec.duration = 5.0;
    const ScenarioData data = generate(spec);
    const SpatialConfig cfg;
    for (const Frame& f : data.truth_frames) {
      for (const Skeleton& s : f.skeletons) {
        CHECK(gate_by_distance(s, cfg));
      }
    }
  }
}
