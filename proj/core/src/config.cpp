// SPDX-License-Identifier: Apache-2.0
#include "skelpipe/config.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "skelpipe/errors.hpp"

namespace skelpipe {

namespace {

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys = {
      "spatial.distance_threshold",
      "spatial.reward",
      "spatial.penalty",
      "spatial.proportion_tolerance",
      "spatial.height_min",
      "spatial.height_max",
      "spatial.camera_origin",
      "tracker.step_constant",
      "tracker.max_track_age",
      "permanence.alpha",
      "permanence.beta",
      "permanence.occlusion_threshold",
      "permanence.history_frames",
      "permanence.particle_count",
      "permanence.process_noise",
      "permanence.resample_ess_fraction",
      "kalman1.measurement_sigma",
      "kalman1.process_sigma",
      "kalman2.measurement_sigma",
      "kalman2.process_sigma",
      "pipeline.filter",
      "pipeline.target_joint",
      "pipeline.operator_track",
      "pipeline.warmup_frames",
      "pipeline.safety_offset",
      "pipeline.seed",
      "follower.gain",
      "scenario.task",
      "scenario.duration",
      "scenario.rate",
      "scenario.persons",
      "scenario.seed",
      "scenario.noise.gaussian_sigma",
      "scenario.noise.outlier_rate",
      "scenario.noise.outlier_magnitude",
      "scenario.noise.dropout_rate",
  };
  return keys;
}

bool is_occlusion_key(const std::string& key) {
  return key.rfind("scenario.occlusion.", 0) == 0;
}

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const double x = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("bad number for " + key + ": '" + value + "'");
  }
}

std::int64_t parse_int(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const std::int64_t x = std::stoll(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("bad integer for " + key + ": '" + value + "'");
  }
}

Vec3 parse_vec3(const std::string& key, const std::string& value) {
  std::stringstream ss(value);
  std::string part;
  Vec3 out;
  int i = 0;
  while (std::getline(ss, part, ',')) {
    if (i >= 3) throw ConfigError("expected 3 components for " + key);
    out[i++] = parse_double(key, trim(part));
  }
  if (i != 3) throw ConfigError("expected 3 components for " + key);
  return out;
}

template <typename T, typename Parse>
void maybe(const ConfigMap& map, const std::string& key, T& field,
           Parse&& parse) {
  const auto it = map.find(key);
  if (it != map.end()) field = parse(key, it->second);
}

void maybe_double(const ConfigMap& map, const std::string& key, double& f) {
  maybe(map, key, f, parse_double);
}

std::vector<Joint> parse_joint_list(const std::string& key,
                                    const std::string& value) {
  if (value == "all") return {};
  std::vector<Joint> joints;
  std::stringstream ss(value);
  std::string part;
  while (std::getline(ss, part, '+')) {
    const auto j = joint_from_name(trim(part));
    if (!j) throw ConfigError("unknown joint in " + key + ": '" + part + "'");
    joints.push_back(*j);
  }
  return joints;
}

// person;joints('+'-separated or 'all');start;end
OcclusionWindow parse_occlusion(const std::string& key,
                                const std::string& value) {
  std::stringstream ss(value);
  std::string part;
  std::vector<std::string> parts;
  while (std::getline(ss, part, ';')) parts.push_back(trim(part));
  if (parts.size() != 4) {
    throw ConfigError(key + " must be person;joints;start;end");
  }
  OcclusionWindow w;
  w.person = static_cast<int>(parse_int(key, parts[0]));
  w.joints = parse_joint_list(key, parts[1]);
  w.start = parse_double(key, parts[2]);
  w.end = parse_double(key, parts[3]);
  return w;
}

}  // namespace

ConfigMap parse_config_text(const std::string& text) {
  ConfigMap map;
  std::stringstream ss(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    const auto comment = line.find('#');
    if (comment != std::string::npos) line = line.substr(0, comment);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(lineno) +
                        ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (!known_keys().count(key) && !is_occlusion_key(key)) {
      throw ConfigError("unknown config key '" + key + "'");
    }
    map[key] = value;
  }
  return map;
}

ConfigMap load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  ConfigMap map = parse_config_text(buffer.str());
  apply_env_overrides(map);
  return map;
}

std::string env_var_for_key(const std::string& key) {
  std::string var = "SKELPIPE_";
  for (char c : key) {
    var += c == '.' ? '_' : static_cast<char>(std::toupper(c));
  }
  return var;
}

void apply_env_overrides(ConfigMap& map) {
  for (const std::string& key : known_keys()) {
    const char* value = std::getenv(env_var_for_key(key).c_str());
    if (value != nullptr) map[key] = value;
  }
}

PipelineConfig pipeline_config_from(const ConfigMap& map) {
  PipelineConfig cfg;
  maybe_double(map, "spatial.distance_threshold", cfg.spatial.distance_threshold);
  maybe_double(map, "spatial.reward", cfg.spatial.reward);
  maybe_double(map, "spatial.penalty", cfg.spatial.penalty);
  maybe_double(map, "spatial.proportion_tolerance",
               cfg.spatial.proportion_tolerance);
  maybe_double(map, "spatial.height_min", cfg.spatial.height_min);
  maybe_double(map, "spatial.height_max", cfg.spatial.height_max);
  maybe(map, "spatial.camera_origin", cfg.spatial.camera_origin, parse_vec3);

  maybe_double(map, "tracker.step_constant", cfg.tracker.step_constant);
  maybe(map, "tracker.max_track_age", cfg.tracker.max_track_age,
        [](const std::string& k, const std::string& v) {
          return static_cast<int>(parse_int(k, v));
        });

  maybe_double(map, "permanence.alpha", cfg.permanence.alpha);
  maybe_double(map, "permanence.beta", cfg.permanence.beta);
  maybe_double(map, "permanence.occlusion_threshold",
               cfg.permanence.occlusion_threshold);
  maybe(map, "permanence.history_frames", cfg.permanence.history_frames,
        [](const std::string& k, const std::string& v) {
          return static_cast<int>(parse_int(k, v));
        });
  maybe(map, "permanence.particle_count", cfg.permanence.particle_count,
        [](const std::string& k, const std::string& v) {
          return static_cast<int>(parse_int(k, v));
        });
  if (const auto it = map.find("permanence.process_noise"); it != map.end()) {
    cfg.permanence.process_noise =
        Eigen::Matrix3d::Identity() *
        parse_double("permanence.process_noise", it->second);
  }
  maybe_double(map, "permanence.resample_ess_fraction",
               cfg.permanence.resample_ess_fraction);

  maybe_double(map, "kalman1.measurement_sigma", cfg.kalman1.measurement_sigma);
  maybe_double(map, "kalman1.process_sigma", cfg.kalman1.process_sigma);
  maybe_double(map, "kalman2.measurement_sigma", cfg.kalman2.measurement_sigma);
  maybe_double(map, "kalman2.process_sigma", cfg.kalman2.process_sigma);

  if (const auto it = map.find("pipeline.filter"); it != map.end()) {
    const auto kind = filter_kind_from_name(it->second);
    if (!kind) throw ConfigError("unknown filter '" + it->second + "'");
    cfg.filter = *kind;
  }
  if (const auto it = map.find("pipeline.target_joint"); it != map.end()) {
    const auto joint = joint_from_name(it->second);
    if (!joint) throw ConfigError("unknown joint '" + it->second + "'");
    cfg.target_joint = *joint;
  }
  if (const auto it = map.find("pipeline.operator_track"); it != map.end()) {
    if (it->second == "auto") {
      cfg.operator_track.reset();
    } else {
      cfg.operator_track = parse_int("pipeline.operator_track", it->second);
    }
  }
  maybe(map, "pipeline.warmup_frames", cfg.warmup_frames,
        [](const std::string& k, const std::string& v) {
          return static_cast<int>(parse_int(k, v));
        });
  maybe(map, "pipeline.safety_offset", cfg.safety_offset, parse_vec3);
  maybe(map, "pipeline.seed", cfg.seed,
        [](const std::string& k, const std::string& v) {
          return static_cast<std::uint64_t>(parse_int(k, v));
        });
  maybe_double(map, "follower.gain", cfg.follower.gain);
  return cfg;
}

ScenarioSpec scenario_spec_from(const ConfigMap& map) {
  ScenarioSpec spec;
  if (const auto it = map.find("scenario.task"); it != map.end()) {
    const auto task = task_from_name(it->second);
    if (!task) throw ConfigError("unknown task '" + it->second + "'");
    spec.task = *task;
  }
  maybe_double(map, "scenario.duration", spec.duration);
  maybe_double(map, "scenario.rate", spec.rate);
  maybe(map, "scenario.persons", spec.persons,
        [](const std::string& k, const std::string& v) {
          return static_cast<int>(parse_int(k, v));
        });
  maybe(map, "scenario.seed", spec.seed,
        [](const std::string& k, const std::string& v) {
          return static_cast<std::uint64_t>(parse_int(k, v));
        });
  maybe_double(map, "scenario.noise.gaussian_sigma", spec.noise.gaussian_sigma);
  maybe_double(map, "scenario.noise.outlier_rate", spec.noise.outlier_rate);
  maybe_double(map, "scenario.noise.outlier_magnitude",
               spec.noise.outlier_magnitude);
  maybe_double(map, "scenario.noise.dropout_rate", spec.noise.dropout_rate);
  for (const auto& [key, value] : map) {
    if (is_occlusion_key(key)) {
      spec.occlusions.push_back(parse_occlusion(key, value));
    }
  }
  return spec;
}

std::string default_config_text() {
  return R"(# skelpipe configuration (reference defaults)

# Spatial evaluation node
spatial.distance_threshold = 3.0
spatial.reward = 0.10
spatial.penalty = 0.10
spatial.proportion_tolerance = 0.20
spatial.height_min = 1.0
spatial.height_max = 2.2
spatial.camera_origin = 0, 0, 0

# Temporal tracking node
tracker.step_constant = 0.5
tracker.max_track_age = 90

# Permanence filter node
permanence.alpha = 0.01
permanence.beta = 0.2
permanence.occlusion_threshold = 0.4
permanence.history_frames = 50
permanence.particle_count = 200
permanence.process_noise = 1e-3
permanence.resample_ess_fraction = 0.5

# Kalman baselines
kalman1.measurement_sigma = 0.05
kalman1.process_sigma = 4.0
kalman2.measurement_sigma = 0.05
kalman2.process_sigma = 30.0

# Pipeline and tracking target
pipeline.filter = perm
pipeline.target_joint = left_wrist
pipeline.operator_track = auto
pipeline.warmup_frames = 30
pipeline.safety_offset = 0.150, 0, 0.150
pipeline.seed = 0
follower.gain = 5.0

# Scenario generator
scenario.task = t0
scenario.duration = 20
scenario.rate = 30
scenario.persons = 2
scenario.seed = 0
scenario.noise.gaussian_sigma = 0.02
scenario.noise.outlier_rate = 0.05
scenario.noise.outlier_magnitude = 0.5
scenario.noise.dropout_rate = 0.02
# Scripted occlusions (custom tasks):
# scenario.occlusion.1 = 0; left_wrist+left_elbow; 5.0; 6.0
)";
}

}  // namespace skelpipe
