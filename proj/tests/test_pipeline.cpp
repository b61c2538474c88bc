// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <random>
#include <tuple>

#include "skelpipe/errors.hpp"
#include "skelpipe/pipeline.hpp"
#include "skelpipe/scenario.hpp"

using namespace skelpipe;

namespace {

ScenarioData clean_single_person(double duration = 4.0) {
  ScenarioSpec spec;
  spec.task = Task::t0_sinusoid;
  spec.duration = duration;
  spec.persons = 1;
  spec.noise = NoiseSpec{0.0, 0.0, 0.0, 0.0};
  return generate(spec);
}

}  // namespace

TEST_CASE("follow: fixed point, exact jump, geometric decay, contraction") {
  FollowerState s;
  s.ee_position = Vec3(1, 2, 3);
  s.gain = 5.0;
  s.initialized = true;

  const FollowerState at_target = follow(s, Vec3(1, 2, 3), 0.02);
  CHECK(at_target.ee_position == Vec3(1, 2, 3));

  FollowerState jump;
  jump.gain = 5.0;
  jump.ee_position = Vec3(0, 0, 0);
  const FollowerState jumped = follow(jump, Vec3(1, 1, 1), 0.2);  // gain*dt = 1
  CHECK(jumped.ee_position.isApprox(Vec3(1, 1, 1), 1e-12));

  // Error shrinks by exactly (1 - gain*dt) per step toward a fixed target.
  FollowerState decay;
  decay.gain = 5.0;
  decay.ee_position = Vec3(1, 0, 0);
  const Vec3 target(0, 0, 0);
  const double dt = 1.0 / 30.0;
  double expected = 1.0;
  for (int k = 0; k < 50; ++k) {
    decay = follow(decay, target, dt);
    expected *= 1.0 - decay.gain * dt;
    CHECK(decay.ee_position.x() == doctest::Approx(expected).epsilon(1e-12));
  }

  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> gain_dt(0.05, 1.95);
  for (int trial = 0; trial < 50; ++trial) {
    FollowerState c;
    c.gain = 1.0;
    c.ee_position = Vec3(0.5, -0.3, 0.8);
    const double step = gain_dt(rng);
    const double before = (c.ee_position - target).norm();
    c = follow(c, target, step);
    CHECK((c.ee_position - target).norm() < before);
  }
}

TEST_CASE("frames must arrive in strictly increasing time order") {
  PipelineConfig cfg;
  Pipeline pipeline(cfg);
  Frame f;
  f.timestamp = 0.0;
  pipeline.process_frame(f);
  CHECK_THROWS_AS(pipeline.process_frame(f), OutOfOrderFrame);
  f.timestamp = -1.0;
  CHECK_THROWS_AS(pipeline.process_frame(f), OutOfOrderFrame);
  f.timestamp = 0.1;  // the failed calls left the stream state unchanged
  CHECK_NOTHROW(pipeline.process_frame(f));
}

TEST_CASE("single clean person: the target is the wrist plus safety offset") {
  const ScenarioData data = clean_single_person();
  PipelineConfig cfg;
  cfg.filter = FilterKind::permanence;
  Pipeline pipeline(cfg);

  for (std::size_t k = 0; k < data.measurement_frames.size(); ++k) {
    const auto result = pipeline.process_frame(data.measurement_frames[k]);
    if (k < 30) continue;  // allow the cloud and velocity fit to settle
    REQUIRE(result.target.has_value());

    // Offset identity holds exactly against the refined wrist.
    REQUIRE(result.refined.skeletons.size() == 1);
    const Skeleton& refined = result.refined.skeletons[0];
    REQUIRE(refined.has(Joint::left_wrist));
    CHECK((*result.target - refined.at(Joint::left_wrist).position -
           cfg.safety_offset)
              .norm() < 1e-12);

    // The refined wrist tracks the truth at the filter's smoothing scale.
    const Vec3 truth =
        data.truth_frames[k].skeletons[0].at(Joint::left_wrist).position;
    CHECK((*result.target - cfg.safety_offset - truth).norm() < 0.1);
  }
}

TEST_CASE("filter=none passes confident measurements through untouched") {
  const ScenarioData data = clean_single_person();
  PipelineConfig cfg;
  cfg.filter = FilterKind::none;
  Pipeline pipeline(cfg);

  for (std::size_t k = 0; k < data.measurement_frames.size(); ++k) {
    const auto result = pipeline.process_frame(data.measurement_frames[k]);
    REQUIRE(result.refined.skeletons.size() == 1);
    const Skeleton& refined = result.refined.skeletons[0];
    const Skeleton& meas = data.measurement_frames[k].skeletons[0];
    meas.for_each([&](Joint j, const Keypoint& kp) {
      REQUIRE(refined.has(j));
      CHECK(refined.at(j).position == kp.position);  // positions untouched
    });
    CHECK(refined.track_id == 0);
  }
}

TEST_CASE("identity stages are filter independent") {
  ScenarioSpec spec;
  spec.task = Task::t1_interaction;
  spec.duration = 5.0;
  spec.seed = 3;
  const ScenarioData data = generate(spec);

  auto id_costs = [&](FilterKind kind) {
    PipelineConfig cfg;
    cfg.filter = kind;
    Pipeline pipeline(cfg);
    std::vector<std::tuple<double, std::int64_t, double>> out;
    for (const Frame& f : data.measurement_frames) {
      const auto result = pipeline.process_frame(f);
      for (const Skeleton& s : result.refined.skeletons) {
        out.emplace_back(f.timestamp, s.track_id.value_or(-1),
                         s.assignment_cost.value_or(-1.0));
      }
    }
    return out;
  };
  const auto none = id_costs(FilterKind::none);
  CHECK(none == id_costs(FilterKind::permanence));
  CHECK(none == id_costs(FilterKind::kalman1));
  CHECK(none == id_costs(FilterKind::kalman2));
}

TEST_CASE("empty frames leave the refined stream empty but keep the target") {
  const ScenarioData data = clean_single_person(2.0);
  PipelineConfig cfg;
  cfg.filter = FilterKind::permanence;
  Pipeline pipeline(cfg);
  double t = 0.0;
  for (const Frame& f : data.measurement_frames) {
    pipeline.process_frame(f);
    t = f.timestamp;
  }
  Frame empty;
  empty.timestamp = t + 1.0 / 30.0;
  const auto result = pipeline.process_frame(empty);
  CHECK(result.refined.skeletons.empty());
  CHECK(result.target.has_value());  // extrapolated through the miss

  PipelineConfig raw_cfg;
  raw_cfg.filter = FilterKind::none;
  Pipeline raw(raw_cfg);
  for (const Frame& f : data.measurement_frames) raw.process_frame(f);
  Frame empty2;
  empty2.timestamp = t + 1.0 / 30.0;
  const auto raw_result = raw.process_frame(empty2);
  CHECK(raw_result.refined.skeletons.empty());
  CHECK(!raw_result.target.has_value());  // no filter, no extrapolation
}

TEST_CASE("the target stream has no gaps across scripted occlusions") {
  ScenarioSpec spec;
  spec.task = Task::t3_heavy_occlusion;
  spec.duration = 10.0;
  spec.seed = 11;
  const ScenarioData data = generate(spec);

  PipelineConfig cfg;
  cfg.filter = FilterKind::permanence;
  cfg.operator_track = 0;  // the operator enters first
  Pipeline pipeline(cfg);

  bool seen = false;
  for (const Frame& f : data.measurement_frames) {
    const auto result = pipeline.process_frame(f);
    if (result.target) seen = true;
    if (seen) CHECK(result.target.has_value());
  }
  CHECK(seen);
}

TEST_CASE("the warmup rule locks onto the person nearest the camera") {
  ScenarioSpec spec;
  spec.task = Task::t1_interaction;
  spec.duration = 3.0;
  spec.seed = 19;
  const ScenarioData data = generate(spec);

  PipelineConfig cfg;
  cfg.filter = FilterKind::permanence;
  Pipeline pipeline(cfg);
  for (const Frame& f : data.measurement_frames) pipeline.process_frame(f);

  REQUIRE(pipeline.operator_id().has_value());
  // The operator stands at 2.0 m, the collaborator at 2.1 m; detection order
  // rotates every frame, so only distance can explain the lock.
  const auto op = *pipeline.operator_id();

  double op_sum = 0.0, other_sum = 0.0;
  int op_n = 0, other_n = 0;
  PipelineConfig probe_cfg;
  probe_cfg.filter = FilterKind::none;
  Pipeline probe(probe_cfg);
  for (const Frame& f : data.measurement_frames) {
    const auto result = probe.process_frame(f);
    for (const Skeleton& s : result.refined.skeletons) {
      if (!s.has(Joint::root)) continue;
      const double d = s.at(Joint::root).position.norm();
      if (s.track_id == op) {
        op_sum += d;
        ++op_n;
      } else {
        other_sum += d;
        ++other_n;
      }
    }
  }
  REQUIRE(op_n > 0);
  REQUIRE(other_n > 0);
  CHECK(op_sum / op_n < other_sum / other_n);
}
