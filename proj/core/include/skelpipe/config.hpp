// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <string>

#include "skelpipe/pipeline.hpp"
#include "skelpipe/scenario.hpp"

namespace skelpipe {

// Flat `key = value` configuration document ('#' starts a comment). Every
// key can also be set from the environment as SKELPIPE_<KEY> with dots
// replaced by underscores, uppercased (environment wins over the file).
using ConfigMap = std::map<std::string, std::string>;

ConfigMap parse_config_text(const std::string& text);
ConfigMap load_config_file(const std::string& path);  // env applied on top

/// Environment variable spelling for a config key.
std::string env_var_for_key(const std::string& key);
void apply_env_overrides(ConfigMap& map);

/// Throws ConfigError on unknown keys or malformed values.
PipelineConfig pipeline_config_from(const ConfigMap& map);
ScenarioSpec scenario_spec_from(const ConfigMap& map);

/// The full key/value document with every default spelled out.
std::string default_config_text();

}  // namespace skelpipe
