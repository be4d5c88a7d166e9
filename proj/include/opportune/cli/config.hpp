// Copyright 2026 The Opportune Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef OPPORTUNE__CLI__CONFIG_HPP_
#define OPPORTUNE__CLI__CONFIG_HPP_

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "json.hpp"
#include "opportune/integration/integration.hpp"
#include "opportune/matching/matching.hpp"
#include "opportune/planner/planner.hpp"

namespace opportune::cli
{

class ConfigError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

struct Config
{
  matching::MatchConfig match;

  std::filesystem::path store_path;
  std::string knowledge_endpoint = "https://api.conceptnet.io";
  bool knowledge_online = false;

  planner::PlannerConfig planner;
  /// External planner command; empty selects the built-in search.
  std::string planner_command;

  std::filesystem::path provider_path;
  std::string provider_endpoint;
  integration::Bindings bindings;

  std::filesystem::path repository;
  bool squared_sv = true;

  bool charge_planning_time = false;
  bool report_only = false;

  integration::PipelineConfig pipeline() const;
};

using ConfigValue = std::variant<bool, long long, double, std::string>;

/// Parses one value: a basic or literal string, true/false, an integer or
/// a float.
ConfigValue parse_value(std::string_view text);

/// Sets `key` (e.g. "planner.node_budget"). Relative paths are taken from
/// `base`. Throws ConfigError on an unknown key or a value of the wrong type.
void set_key(Config & config, const std::string & key, const ConfigValue & value,
  const std::filesystem::path & base = {});

/// `key=value` as given to --set. Bare words are accepted as strings.
void apply_override(Config & config, std::string_view assignment);

/// Reads the TOML subset used by config files: [tables], key = value
/// pairs, dotted keys and '#' comments.
Config parse_config(std::string_view text, const std::filesystem::path & base = {});
Config load_config(const std::filesystem::path & path);

/// All keys with their current values.
nlohmann::json to_json(const Config & config);

/// Every accepted key.
const std::vector<std::string> & config_keys();

}  // namespace opportune::cli

#endif  // OPPORTUNE__CLI__CONFIG_HPP_
