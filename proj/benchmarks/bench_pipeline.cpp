// SPDX-License-Identifier: Apache-2.0
#include <benchmark/benchmark.h>

#include <random>

#include "skelpipe/assignment.hpp"
#include "skelpipe/permanence.hpp"
#include "skelpipe/pipeline.hpp"
#include "skelpipe/scenario.hpp"

using namespace skelpipe;

static void AssignmentSolve(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 10.0);
  Eigen::MatrixXd cost(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) cost(i, j) = u(rng);
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_assignment(cost));
  }
}
BENCHMARK(AssignmentSolve)->Arg(2)->Arg(6)->Arg(16)->Arg(64);

static void PermanenceStep(benchmark::State& state) {
  PermanenceConfig cfg;
  cfg.particle_count = static_cast<int>(state.range(0));
  Rng rng(2);
  auto filter_state =
      KeypointFilterState::initialize({0, 0, 2}, 0.9, 0.0, cfg, rng);
  std::normal_distribution<double> noise(0.0, 0.02);
  double t = 0.0;
  for (auto _ : state) {
    t += 1.0 / 30.0;
    const Observation obs{Vec3(noise(rng), noise(rng), 2.0 + noise(rng)), 0.9,
                          std::nullopt};
    benchmark::DoNotOptimize(step_keypoint(filter_state, obs, t, cfg, rng));
  }
}
BENCHMARK(PermanenceStep)->Arg(100)->Arg(200)->Arg(500);

static void PipelineFrame(benchmark::State& state) {
  ScenarioSpec spec;
  spec.task = Task::t1_interaction;
  spec.duration = 30.0;
  spec.seed = 3;
  const ScenarioData data = generate(spec);

  PipelineConfig cfg;
  cfg.filter = FilterKind::permanence;
  Pipeline pipeline(cfg);
  std::size_t k = 0;
  double epoch = 0.0;
  for (auto _ : state) {
    if (k == data.measurement_frames.size()) {
      k = 0;
      epoch += 100.0;  // keep timestamps strictly increasing across laps
    }
    Frame f = data.measurement_frames[k++];
    f.timestamp += epoch;
    benchmark::DoNotOptimize(pipeline.process_frame(f));
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(PipelineFrame);

BENCHMARK_MAIN();
