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

#include "opportune/task/plan.hpp"

#include <algorithm>
#include <regex>
#include <sstream>

namespace opportune::task
{

std::string PlanStep::action_str() const
{
  std::string out = "(" + action;
  for (const auto & a : args) {
    out += " " + a;
  }
  return out + ")";
}

std::string PlanStep::str() const
{
  return std::to_string(start) + ": " + action_str() + " [" + std::to_string(duration) + "]";
}

Minutes Plan::end(Minutes origin) const
{
  Minutes out = origin;
  for (const auto & s : steps) {
    out = std::max(out, s.end());
  }
  return out;
}

std::size_t Plan::count(std::string_view action) const
{
  return static_cast<std::size_t>(
    std::count_if(
      steps.begin(), steps.end(),
      [&](const PlanStep & s) {return s.action == action;}));
}

std::string write_plan(const Plan & plan)
{
  std::string out;
  for (const auto & s : plan.steps) {
    out += s.str();
    out += "\n";
  }
  return out;
}

Plan parse_plan(std::string_view text)
{
  static const std::regex line_re(
    R"(^\s*(-?\d+)(?:\.0+)?\s*:\s*\(\s*([^()\s]+)((?:\s+[^()\s]+)*)\s*\)\s*\[\s*(\d+)(?:\.0+)?\s*\]\s*$)");
  Plan plan;
  std::istringstream in{std::string(text)};
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (auto c = line.find(';'); c != std::string::npos) {
      line.erase(c);
    }
    if (line.find_first_not_of(" \t\r") == std::string::npos) {
      continue;
    }
    if (!line.empty() && line.back() == '\r') {
      line.pop_back();
    }
    std::smatch m;
    if (!std::regex_match(line, m, line_re)) {
      throw TaskError("plan line " + std::to_string(number) + " is malformed: '" + line + "'");
    }
    PlanStep step;
    step.start = std::stoll(m[1].str());
    step.action = m[2].str();
    std::istringstream args(m[3].str());
    for (std::string a; args >> a; ) {
      step.args.push_back(a);
    }
    step.duration = std::stoll(m[4].str());
    plan.steps.push_back(std::move(step));
  }
  std::stable_sort(
    plan.steps.begin(), plan.steps.end(),
    [](const PlanStep & a, const PlanStep & b) {return a.start < b.start;});
  return plan;
}

}  // namespace opportune::task
