// SPDX-License-Identifier: Apache-2.0
//
// skelpipe CLI: synthetic scenario generation, the filtering pipeline, and
// trajectory evaluation.
//
//   skelpipe sim  --task t0 --duration 20 --rate 30 --persons 2 --seed 1 --out data/
//   skelpipe run  --input data/measurements.jsonl --filter perm --out out/
//   skelpipe eval --truth data/truth.jsonl --pred out/wrist.jsonl --report report.json
//   skelpipe config-dump > skelpipe.cfg

#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"
#include "skelpipe/config.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Multi-person 3D skeleton filtering pipeline"};
  app.require_subcommand(1);

  skelpipe::cli::SimArgs sim_args;
  auto* sim = app.add_subcommand("sim", "Generate a synthetic scenario");
  sim->add_option("--task", sim_args.task, "t0|t1|t2|t3|custom")
      ->default_val("t0");
  sim->add_option("--duration", sim_args.duration, "Seconds")->default_val(20.0);
  sim->add_option("--rate", sim_args.rate, "Frames per second")->default_val(30.0);
  sim->add_option("--persons", sim_args.persons, "People in the scene")
      ->default_val(2);
  sim->add_option("--seed", sim_args.seed, "RNG seed")->default_val(0);
  sim->add_option("--out", sim_args.out_dir, "Output directory")->required();
  sim->add_option("--config", sim_args.config,
                  "Config file for noise/occlusion settings");

  skelpipe::cli::RunArgs run_args;
  auto* run = app.add_subcommand("run", "Filter a measurement stream");
  run->add_option("--input", run_args.input, "Measurement stream (JSONL)")
      ->required();
  run->add_option("--filter", run_args.filter, "none|kf1|kf2|perm");
  run->add_option("--config", run_args.config, "Config file");
  run->add_option("--out", run_args.out_dir, "Output directory")->required();

  skelpipe::cli::EvalArgs eval_args;
  auto* eval = app.add_subcommand("eval", "Compare streams against truth");
  eval->add_option("--truth", eval_args.truth, "Truth stream or trajectory")
      ->required();
  eval->add_option("--pred", eval_args.preds, "Prediction files")
      ->required()
      ->expected(-1);
  eval->add_option("--ee", eval_args.ee, "End-effector trajectories");
  eval->add_option("--track", eval_args.track, "Track id for stream inputs")
      ->default_val(0);
  eval->add_option("--joint", eval_args.joint, "Joint for stream inputs")
      ->default_val("left_wrist");
  eval->add_option("--report", eval_args.report, "Report JSON path")->required();
  eval->add_option("--csv", eval_args.csv, "Per-frame distance CSV path");
  eval->add_option("--max-gap", eval_args.max_gap,
                   "Pairing gap in seconds")
      ->default_val(1.0 / 60.0);

  auto* dump = app.add_subcommand("config-dump",
                                  "Print the default configuration");

  CLI11_PARSE(app, argc, argv);

  if (sim->parsed()) return skelpipe::cli::cmd_sim(sim_args);
  if (run->parsed()) return skelpipe::cli::cmd_run(run_args);
  if (eval->parsed()) return skelpipe::cli::cmd_eval(eval_args);
  if (dump->parsed()) {
    std::cout << skelpipe::default_config_text();
    return 0;
  }
  return 1;
}
