// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "skelpipe/scenario.hpp"
#include "skelpipe/spatial.hpp"

using namespace skelpipe;

namespace {

Skeleton with_root(const Vec3& p) {
  Skeleton s;
  s.set(Joint::root, Keypoint{p, 1.0});
  return s;
}

// Elbow+wrist only, a given distance apart.
Skeleton forearm_skeleton(double length, double confidence = 0.5) {
  Skeleton s;
  s.set(Joint::left_elbow, {{0.0, 0.0, 2.0}, confidence});
  s.set(Joint::left_wrist, {{length, 0.0, 2.0}, confidence});
  return s;
}

}  // namespace

TEST_CASE("distance gate keeps near skeletons and drops far ones") {
  const SpatialConfig cfg;
  CHECK(gate_by_distance(with_root({0.0, 0.0, 2.5}), cfg));
  CHECK(!gate_by_distance(with_root({0.0, 0.0, 3.001}), cfg));
  // 3-4-5 triangle lands exactly on the threshold; the gate is inclusive.
  CHECK(std::hypot(1.8, 2.4) == 3.0);
  CHECK(gate_by_distance(with_root({1.8, 0.0, 2.4}), cfg));
  CHECK(!gate_by_distance(Skeleton{}, cfg));  // no root: discard
}

TEST_CASE("distance gate is monotone in the threshold") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    const Skeleton s = with_root(testing::random_point(rng, 4.0));
    SpatialConfig narrow, wide;
    narrow.distance_threshold = 2.0;
    wide.distance_threshold = 3.5;
    if (gate_by_distance(s, narrow)) CHECK(gate_by_distance(s, wide));
  }
}

TEST_CASE("height estimation reproduces the forearm worked example") {
  const SpatialConfig cfg;
  const auto h = estimate_height(forearm_skeleton(0.25), default_graph(), cfg);
  REQUIRE(h.has_value());
  CHECK(*h == doctest::Approx(1.712).epsilon(0.003));  // 0.25 / 0.146
}

TEST_CASE("height estimation is absent without edges or survivors") {
  const SpatialConfig cfg;
  Skeleton lonely;
  lonely.set(Joint::nose, {{0.0, 0.0, 2.0}, 1.0});
  CHECK(!estimate_height(lonely, default_graph(), cfg).has_value());
  // A 3 m "forearm" implies a 20 m giant: filtered by the stature bounds.
  CHECK(!estimate_height(forearm_skeleton(3.0), default_graph(), cfg).has_value());
}

TEST_CASE("height estimation closes the loop on a proportional body") {
  const SpatialConfig cfg;
  const Skeleton body = body_from_height(1.80);
  const auto h = estimate_height(body, default_graph(), cfg);
  REQUIRE(h.has_value());
  CHECK(*h == doctest::Approx(1.80).epsilon(1e-9));
}

TEST_CASE("height estimation scales with the skeleton") {
  const SpatialConfig cfg;
  const Skeleton body = body_from_height(1.60);
  const double scale = 1.05;
  Skeleton scaled;
  body.for_each([&](Joint j, const Keypoint& kp) {
    scaled.set(j, Keypoint{kp.position * scale, kp.confidence});
  });
  const auto h0 = estimate_height(body, default_graph(), cfg);
  const auto h1 = estimate_height(scaled, default_graph(), cfg);
  REQUIRE(h0.has_value());
  REQUIRE(h1.has_value());
  CHECK(*h1 == doctest::Approx(*h0 * scale).epsilon(1e-9));
}

TEST_CASE("confidence adjustment rewards an all-valid keypoint by 2r") {
  const SpatialConfig cfg;
  const double height = 0.25 / 0.146;
  const Skeleton out =
      adjust_confidences(forearm_skeleton(0.25), default_graph(), height, cfg);
  CHECK(out.at(Joint::left_wrist).confidence == doctest::Approx(0.6));
}

TEST_CASE("confidence adjustment penalizes two invalid bones by 2p") {
  const SpatialConfig cfg;
  const double height = 1.70;
  Skeleton s;  // both arm bones at twice their plausible length
  s.set(Joint::left_shoulder, {{0.0, 0.0, 2.0}, 0.5});
  s.set(Joint::left_elbow, {{2.0 * 0.186 * height, 0.0, 2.0}, 0.5});
  s.set(Joint::left_wrist,
        {{2.0 * 0.186 * height + 2.0 * 0.146 * height, 0.0, 2.0}, 0.5});
  const Skeleton out = adjust_confidences(s, default_graph(), height, cfg);
  CHECK(out.at(Joint::left_elbow).confidence == doctest::Approx(0.4));
  // The wrist touches a single invalid bone: one per-edge penalty.
  CHECK(out.at(Joint::left_wrist).confidence == doctest::Approx(0.45));
}

TEST_CASE("confidence adjustment mixes per-edge rewards and penalties") {
  const SpatialConfig cfg;
  const double height = 1.70;
  Skeleton s;  // valid shoulder-elbow, invalid elbow-wrist
  s.set(Joint::left_shoulder, {{0.0, 0.0, 2.0}, 0.5});
  s.set(Joint::left_elbow, {{0.186 * height, 0.0, 2.0}, 0.5});
  s.set(Joint::left_wrist, {{0.186 * height + 2.0 * 0.146 * height, 0.0, 2.0},
                            0.5});
  const Skeleton out = adjust_confidences(s, default_graph(), height, cfg);
  CHECK(out.at(Joint::left_elbow).confidence ==
        doctest::Approx(0.5 * 1.1 * 0.9));
}

TEST_CASE("a proportional body earns 2r on every keypoint") {
  const SpatialConfig cfg;
  Skeleton body = body_from_height(1.75);
  Skeleton half;
  body.for_each([&](Joint j, const Keypoint& kp) {
    half.set(j, Keypoint{kp.position, 0.5});
  });
  const Skeleton out = adjust_confidences(half, default_graph(), 1.75, cfg);
  out.for_each([&](Joint, const Keypoint& kp) {
    CHECK(kp.confidence == doctest::Approx(0.6));
  });
}

TEST_CASE("confidence adjustment never moves positions and stays in [0,1]") {
  std::mt19937_64 rng(17);
  const SpatialConfig cfg;
  for (int trial = 0; trial < 100; ++trial) {
    const Skeleton s = testing::random_skeleton(rng);
    const Skeleton out = adjust_confidences(s, default_graph(), 1.7, cfg);
    s.for_each([&](Joint j, const Keypoint& kp) {
      REQUIRE(out.has(j));
      CHECK(out.at(j).position == kp.position);
      CHECK(out.at(j).confidence >= 0.0);
      CHECK(out.at(j).confidence <= 1.0);
    });
  }
}

TEST_CASE("edge classification is stable across re-runs") {
  std::mt19937_64 rng(23);
  const SpatialConfig cfg;
  const Skeleton s = testing::random_skeleton(rng, 1.0);
  const Skeleton once = adjust_confidences(s, default_graph(), 1.7, cfg);
  for (const auto& e : default_graph().present_edges(s)) {
    CHECK(edge_valid(s, e, 1.7, cfg) == edge_valid(once, e, 1.7, cfg));
  }
}

TEST_CASE("skeletons without a height estimate pass through unchanged") {
  const SpatialConfig cfg;
  Skeleton s;  // close enough to keep, but every hypothesis is toy-sized
  s.set(Joint::left_shoulder, {{-0.05, 0.05, 1.0}, 0.7});
  s.set(Joint::right_shoulder, {{0.05, 0.05, 1.0}, 0.7});
  s.set(Joint::left_hip, {{-0.05, -0.05, 1.0}, 0.7});
  s.set(Joint::right_hip, {{0.05, -0.05, 1.0}, 0.7});
  const auto out = evaluate_skeleton(s, default_graph(), cfg);
  REQUIRE(out.has_value());
  CHECK(!out->estimated_height.has_value());
  for (Joint j : {Joint::left_shoulder, Joint::right_shoulder}) {
    CHECK(out->at(j).confidence == doctest::Approx(0.7));
  }
}

TEST_CASE("evaluate_frame keeps only gated survivors") {
  const SpatialConfig cfg;
  Frame frame;
  frame.timestamp = 0.0;
  frame.skeletons.push_back(body_from_height(1.7, 0.0, 2.0));  // near
  frame.skeletons.push_back(body_from_height(1.7, 0.0, 4.0));  // beyond gate
  const Frame out = evaluate_frame(frame, default_graph(), cfg);
  CHECK(out.skeletons.size() == 1);
}
