// SPDX-License-Identifier: Apache-2.0
#include "commands.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>

#include <json.hpp>

#include "skelpipe/config.hpp"
#include "skelpipe/errors.hpp"
#include "skelpipe/metrics.hpp"
#include "skelpipe/pipeline.hpp"
#include "skelpipe/scenario.hpp"
#include "skelpipe/stream_io.hpp"

namespace skelpipe::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

ConfigMap load_optional_config(const std::optional<std::string>& path) {
  if (path) return load_config_file(*path);
  ConfigMap map;
  apply_env_overrides(map);
  return map;
}

std::string joined(const fs::path& dir, const char* name) {
  return (dir / name).string();
}

// Label: file stem, prefixed with the parent directory to tell apart
// same-named outputs from different runs.
std::string label_for(const std::string& path) {
  const fs::path p(path);
  const std::string parent = p.parent_path().filename().string();
  const std::string stem = p.stem().string();
  return parent.empty() ? stem : parent + "/" + stem;
}

Trajectory trajectory_from_file(const std::string& path, std::int64_t track,
                                Joint joint) {
  if (detect_file_kind(path) == StreamFileKind::trajectory) {
    Trajectory t = read_trajectory(path);
    t.set_label(label_for(path));
    return t;
  }
  return extract_joint_trajectory(read_stream(path), track, joint,
                                  label_for(path));
}

}  // namespace

int cmd_sim(const SimArgs& args) {
  try {
    ScenarioSpec spec;
    if (args.config) spec = scenario_spec_from(load_optional_config(args.config));
    const auto task = task_from_name(args.task);
    if (!task) {
      std::cerr << "sim: unknown task '" << args.task << "'\n";
      return 1;
    }
    spec.task = *task;
    spec.duration = args.duration;
    spec.rate = args.rate;
    spec.persons = args.persons;
    spec.seed = args.seed;

    const ScenarioData data = generate(spec);
    fs::create_directories(args.out_dir);
    write_stream(joined(args.out_dir, "truth.jsonl"), data.truth_frames);
    write_stream(joined(args.out_dir, "measurements.jsonl"),
                 data.measurement_frames);
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "sim: " << e.what() << '\n';
    return 1;
  }
}

int cmd_run(const RunArgs& args) {
  try {
    PipelineConfig cfg = pipeline_config_from(load_optional_config(args.config));
    if (args.filter) {
      const auto kind = filter_kind_from_name(*args.filter);
      if (!kind) {
        std::cerr << "run: unknown filter '" << *args.filter << "'\n";
        return 1;
      }
      cfg.filter = *kind;
    }

    const std::vector<Frame> frames = read_stream(args.input);
    Pipeline pipeline(cfg);
    FollowerState follower;
    follower.gain = cfg.follower.gain;

    std::vector<Frame> refined;
    Trajectory target("target"), wrist("wrist"), ee("ee");
    double last_t = 0.0;

    for (const Frame& frame : frames) {
      auto result = pipeline.process_frame(frame);
      refined.push_back(std::move(result.refined));
      if (result.target) {
        target.append(frame.timestamp, *result.target);
        wrist.append(frame.timestamp, *result.target - cfg.safety_offset);
        if (!follower.initialized) {
          follower.ee_position = *result.target;
          follower.initialized = true;
        } else {
          follower = follow(follower, *result.target,
                            frame.timestamp - last_t);
        }
      }
      if (follower.initialized) ee.append(frame.timestamp, follower.ee_position);
      last_t = frame.timestamp;
    }

    fs::create_directories(args.out_dir);
    write_stream(joined(args.out_dir, "refined.jsonl"), refined);
    write_trajectory(joined(args.out_dir, "target.jsonl"), target);
    write_trajectory(joined(args.out_dir, "wrist.jsonl"), wrist);
    write_trajectory(joined(args.out_dir, "ee.jsonl"), ee);
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "run: " << e.what() << '\n';
    return 1;
  }
}

int cmd_eval(const EvalArgs& args) {
  try {
    const auto joint = joint_from_name(args.joint);
    if (!joint) {
      std::cerr << "eval: unknown joint '" << args.joint << "'\n";
      return 1;
    }
    const Trajectory truth =
        trajectory_from_file(args.truth, args.track, *joint);

    json report;
    report["joint"] = args.joint;
    report["track"] = args.track;
    report["truth"] = args.truth;
    report["methods"] = json::array();
    report["safety"] = json::array();

    std::ofstream csv;
    if (args.csv) {
      csv.open(*args.csv);
      if (!csv) {
        std::cerr << "eval: cannot open " << *args.csv << '\n';
        return 1;
      }
      csv << "method,time,distance_mm\n";
    }

    for (const std::string& path : args.preds) {
      const Trajectory pred = trajectory_from_file(path, args.track, *joint);
      const MetricReport m = evaluate_trajectories(truth, pred, args.max_gap);
      report["methods"].push_back({{"label", pred.label()},
                                   {"mae_mm", m.mae_mm},
                                   {"std_mm", m.std_mm},
                                   {"acc_ms2", m.acc_ms2},
                                   {"samples", m.sample_count}});
      if (csv.is_open()) {
        for (const auto& p : align_timestamps(truth, pred, args.max_gap)) {
          csv << pred.label() << ',' << p.time_a << ','
              << 1000.0 * (p.a - p.b).norm() << '\n';
        }
      }
    }

    for (const std::string& path : args.ee) {
      const Trajectory ee_traj = trajectory_from_file(path, args.track, *joint);
      report["safety"].push_back(
          {{"label", ee_traj.label()},
           {"safety_std_mm", safety_std_mm(truth, ee_traj, args.max_gap)}});
    }

    std::ofstream out(args.report);
    if (!out) {
      std::cerr << "eval: cannot open " << args.report << '\n';
      return 1;
    }
    out << report.dump(2) << '\n';
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "eval: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace skelpipe::cli
