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

#include "opportune/cli/config.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

namespace opportune::cli
{

namespace
{

std::string_view trim(std::string_view s)
{
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
    s.remove_prefix(1);
  }
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
    s.remove_suffix(1);
  }
  return s;
}

bool bare_key_char(char c)
{
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.';
}

void check_key(std::string_view key)
{
  if (key.empty() || key.front() == '.' || key.back() == '.' ||
    key.find("..") != std::string_view::npos)
  {
    throw ConfigError("malformed key '" + std::string(key) + "'");
  }
  for (char c : key) {
    if (!bare_key_char(c)) {
      throw ConfigError("malformed key '" + std::string(key) + "'");
    }
  }
}

/// The line without its trailing comment.
std::string_view strip_comment(std::string_view s)
{
  char quote = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const char c = s[i];
    if (quote != 0) {
      if (quote == '"' && c == '\\') {
        ++i;
      } else if (c == quote) {
        quote = 0;
      }
    } else if (c == '"' || c == '\'') {
      quote = c;
    } else if (c == '#') {
      return s.substr(0, i);
    }
  }
  return s;
}

const char * type_name(const ConfigValue & v)
{
  switch (v.index()) {
    case 0: return "a boolean";
    case 1: return "an integer";
    case 2: return "a number";
    default: return "a string";
  }
}

double as_number(const std::string & key, const ConfigValue & v)
{
  if (const auto * i = std::get_if<long long>(&v)) {
    return static_cast<double>(*i);
  }
  if (const auto * d = std::get_if<double>(&v)) {
    return *d;
  }
  throw ConfigError(key + " must be a number, got " + type_name(v));
}

double as_unit(const std::string & key, const ConfigValue & v)
{
  const double d = as_number(key, v);
  if (d < 0.0 || d > 1.0) {
    throw ConfigError(key + " must lie in [0, 1]");
  }
  return d;
}

long long as_positive(const std::string & key, const ConfigValue & v)
{
  const auto * i = std::get_if<long long>(&v);
  if (i == nullptr) {
    throw ConfigError(key + " must be an integer, got " + type_name(v));
  }
  if (*i <= 0) {
    throw ConfigError(key + " must be positive");
  }
  return *i;
}

bool as_bool(const std::string & key, const ConfigValue & v)
{
  const auto * b = std::get_if<bool>(&v);
  if (b == nullptr) {
    throw ConfigError(key + " must be true or false, got " + type_name(v));
  }
  return *b;
}

std::string as_string(const std::string & key, const ConfigValue & v)
{
  const auto * s = std::get_if<std::string>(&v);
  if (s == nullptr) {
    throw ConfigError(key + " must be a string, got " + type_name(v));
  }
  return *s;
}

std::filesystem::path as_path(
  const std::string & key, const ConfigValue & v, const std::filesystem::path & base)
{
  std::filesystem::path p = as_string(key, v);
  if (!p.empty() && p.is_relative() && !base.empty()) {
    p = base / p;
  }
  return p;
}

}  // namespace

integration::PipelineConfig Config::pipeline() const
{
  integration::PipelineConfig p;
  p.match = match;
  p.planner = planner;
  p.bindings = bindings;
  p.squared_sv = squared_sv;
  p.charge_planning_time = charge_planning_time;
  return p;
}

const std::vector<std::string> & config_keys()
{
  static const std::vector<std::string> keys = {
    "match.filter_threshold", "match.class_threshold", "match.sibling_threshold",
    "match.inner_theta",
    "knowledge.store_path", "knowledge.endpoint", "knowledge.online",
    "planner.node_budget", "planner.time_budget_ms", "planner.strategy", "planner.command",
    "provider.path", "provider.endpoint", "provider.window_predicate",
    "provider.movement_function", "provider.walking_speed_kmh",
    "ontology.repository", "ontology.squared_sv",
    "execution.charge_planning_time", "execution.report_only",
  };
  return keys;
}

ConfigValue parse_value(std::string_view text)
{
  const auto s = trim(text);
  if (s.empty()) {
    throw ConfigError("missing value");
  }
  if (s.front() == '"') {
    std::string out;
    std::size_t i = 1;
    for (; i < s.size() && s[i] != '"'; ++i) {
      if (s[i] != '\\') {
        out += s[i];
        continue;
      }
      if (++i == s.size()) {
        break;
      }
      switch (s[i]) {
        case 'n': out += '\n'; break;
        case 't': out += '\t'; break;
        case '"': out += '"'; break;
        case '\\': out += '\\'; break;
        default: throw ConfigError("unsupported escape \\" + std::string(1, s[i]));
      }
    }
    if (i != s.size() - 1) {
      throw ConfigError("malformed string " + std::string(s));
    }
    return out;
  }
  if (s.front() == '\'') {
    if (s.size() < 2 || s.back() != '\'' || s.substr(1, s.size() - 2).find('\'') != s.npos) {
      throw ConfigError("malformed string " + std::string(s));
    }
    return std::string(s.substr(1, s.size() - 2));
  }
  if (s == "true") {
    return true;
  }
  if (s == "false") {
    return false;
  }
  std::string digits;
  for (char c : s) {
    if (c != '_') {
      digits += c;
    }
  }
  long long i = 0;
  auto [p, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), i);
  if (ec == std::errc() && p == digits.data() + digits.size()) {
    return i;
  }
  double d = 0.0;
  auto [q, ec2] = std::from_chars(digits.data(), digits.data() + digits.size(), d);
  if (ec2 == std::errc() && q == digits.data() + digits.size()) {
    return d;
  }
  throw ConfigError("cannot read value " + std::string(s));
}

void set_key(
  Config & c, const std::string & key, const ConfigValue & v, const std::filesystem::path & base)
{
  if (key == "match.filter_threshold") {
    c.match.filter_threshold = as_unit(key, v);
  } else if (key == "match.class_threshold") {
    c.match.class_threshold = as_unit(key, v);
  } else if (key == "match.sibling_threshold") {
    c.match.sibling_threshold = as_unit(key, v);
  } else if (key == "match.inner_theta") {
    c.match.inner_theta = as_unit(key, v);
  } else if (key == "knowledge.store_path") {
    c.store_path = as_path(key, v, base);
  } else if (key == "knowledge.endpoint") {
    c.knowledge_endpoint = as_string(key, v);
  } else if (key == "knowledge.online") {
    c.knowledge_online = as_bool(key, v);
  } else if (key == "planner.node_budget") {
    c.planner.node_budget = static_cast<std::size_t>(as_positive(key, v));
  } else if (key == "planner.time_budget_ms") {
    c.planner.time_budget_ms = as_positive(key, v);
  } else if (key == "planner.strategy") {
    try {
      c.planner.strategy = planner::parse_strategy(as_string(key, v));
    } catch (const std::invalid_argument & e) {
      throw ConfigError(key + ": " + e.what());
    }
  } else if (key == "planner.command") {
    c.planner_command = as_string(key, v);
  } else if (key == "provider.path") {
    c.provider_path = as_path(key, v, base);
  } else if (key == "provider.endpoint") {
    c.provider_endpoint = as_string(key, v);
  } else if (key == "provider.window_predicate") {
    c.bindings.window_predicate = as_string(key, v);
  } else if (key == "provider.movement_function") {
    c.bindings.movement_function = as_string(key, v);
  } else if (key == "provider.walking_speed_kmh") {
    const double speed = as_number(key, v);
    if (speed <= 0.0) {
      throw ConfigError(key + " must be positive");
    }
    c.bindings.walking_speed_kmh = speed;
  } else if (key == "ontology.repository") {
    c.repository = as_path(key, v, base);
  } else if (key == "ontology.squared_sv") {
    c.squared_sv = as_bool(key, v);
  } else if (key == "execution.charge_planning_time") {
    c.charge_planning_time = as_bool(key, v);
  } else if (key == "execution.report_only") {
    c.report_only = as_bool(key, v);
  } else {
    throw ConfigError("unknown configuration key '" + key + "'");
  }
}

void apply_override(Config & config, std::string_view assignment)
{
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos) {
    throw ConfigError("expected key=value, got '" + std::string(assignment) + "'");
  }
  const std::string key(trim(assignment.substr(0, eq)));
  check_key(key);
  const auto raw = trim(assignment.substr(eq + 1));
  ConfigValue value;
  try {
    value = parse_value(raw);
  } catch (const ConfigError &) {
    value = std::string(raw);
  }
  try {
    set_key(config, key, value);
  } catch (const ConfigError &) {
    // Retry bare words such as a strategy name or a predicate called "true".
    if (std::holds_alternative<std::string>(value) || raw.front() == '"' || raw.front() == '\'') {
      throw;
    }
    try {
      set_key(config, key, std::string(raw));
    } catch (const ConfigError &) {
      set_key(config, key, value);
    }
  }
}

Config parse_config(std::string_view text, const std::filesystem::path & base)
{
  Config c;
  std::string table;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto where = "line " + std::to_string(lineno) + ": ";
    try {
      const auto s = trim(strip_comment(line));
      if (s.empty()) {
        continue;
      }
      if (s.front() == '[') {
        if (s.back() != ']' || s.size() < 3 || s[1] == '[') {
          throw ConfigError("malformed table header");
        }
        table = std::string(trim(s.substr(1, s.size() - 2)));
        check_key(table);
        continue;
      }
      const auto eq = s.find('=');
      if (eq == std::string_view::npos) {
        throw ConfigError("expected key = value");
      }
      const std::string key(trim(s.substr(0, eq)));
      check_key(key);
      const auto full = table.empty() ? key : table + "." + key;
      set_key(c, full, parse_value(s.substr(eq + 1)), base);
    } catch (const ConfigError & e) {
      throw ConfigError(where + e.what());
    }
  }
  return c;
}

Config load_config(const std::filesystem::path & path)
{
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot read configuration " + path.string());
  }
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return parse_config(ss.str(), path.parent_path());
  } catch (const ConfigError & e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

nlohmann::json to_json(const Config & c)
{
  return nlohmann::json{
    {"match.filter_threshold", c.match.filter_threshold},
    {"match.class_threshold", c.match.class_threshold},
    {"match.sibling_threshold", c.match.sibling_threshold},
    {"match.inner_theta", c.match.inner_theta},
    {"knowledge.store_path", c.store_path.string()},
    {"knowledge.endpoint", c.knowledge_endpoint},
    {"knowledge.online", c.knowledge_online},
    {"planner.node_budget", c.planner.node_budget},
    {"planner.time_budget_ms", c.planner.time_budget_ms},
    {"planner.strategy", planner::strategy_str(c.planner.strategy)},
    {"planner.command", c.planner_command},
    {"provider.path", c.provider_path.string()},
    {"provider.endpoint", c.provider_endpoint},
    {"provider.window_predicate", c.bindings.window_predicate},
    {"provider.movement_function", c.bindings.movement_function},
    {"provider.walking_speed_kmh", c.bindings.walking_speed_kmh},
    {"ontology.repository", c.repository.string()},
    {"ontology.squared_sv", c.squared_sv},
    {"execution.charge_planning_time", c.charge_planning_time},
    {"execution.report_only", c.report_only},
  };
}

}  // namespace opportune::cli
