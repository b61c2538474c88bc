// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace skelpipe::cli {

struct SimArgs {
  std::string task = "t0";
  double duration = 20.0;
  double rate = 30.0;
  int persons = 2;
  std::uint64_t seed = 0;
  std::string out_dir;
  std::optional<std::string> config;  // noise/occlusion overrides
};

/// Writes <out>/truth.jsonl and <out>/measurements.jsonl.
int cmd_sim(const SimArgs& args);

struct RunArgs {
  std::string input;
  std::optional<std::string> filter;  // overrides the config file
  std::optional<std::string> config;
  std::string out_dir;
};

/// Writes <out>/refined.jsonl, <out>/target.jsonl (tracked joint plus the
/// safety offset), <out>/wrist.jsonl (tracked joint as estimated), and
/// <out>/ee.jsonl (simulated end-effector).
int cmd_run(const RunArgs& args);

struct EvalArgs {
  std::string truth;
  std::vector<std::string> preds;
  std::vector<std::string> ee;  // end-effector files for safety compliance
  std::int64_t track = 0;       // track id used when extracting from streams
  std::string joint = "left_wrist";
  std::string report;
  std::optional<std::string> csv;
  double max_gap = 1.0 / 60.0;
};

/// Writes a MetricReport JSON (and optional per-frame distance CSV)
/// comparing every prediction against the truth trajectory.
int cmd_eval(const EvalArgs& args);

}  // namespace skelpipe::cli
