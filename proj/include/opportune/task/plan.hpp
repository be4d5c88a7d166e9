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

#ifndef OPPORTUNE__TASK__PLAN_HPP_
#define OPPORTUNE__TASK__PLAN_HPP_

#include <string>
#include <string_view>
#include <vector>

#include "opportune/task/task.hpp"

namespace opportune::task
{

struct PlanStep
{
  Minutes start = 0;
  std::string action;
  std::vector<std::string> args;
  Minutes duration = 0;

  Minutes end() const {return start + duration;}
  /// "(move tourist a b)"
  std::string action_str() const;
  /// "600: (move tourist a b) [12]"
  std::string str() const;

  bool operator==(const PlanStep &) const = default;
};

struct Plan
{
  std::vector<PlanStep> steps;

  bool empty() const {return steps.empty();}
  std::size_t size() const {return steps.size();}
  /// End of the last step, or `origin` for an empty plan.
  Minutes end(Minutes origin) const;
  std::size_t count(std::string_view action) const;

  bool operator==(const Plan &) const = default;
};

/// One step per line, `<start>: (<action> <args>) [<duration>]`.
std::string write_plan(const Plan & plan);

/// Parses the plan text format. Blank lines and ';' comments are skipped.
/// Steps are sorted by start time; a line that does not match the format
/// raises TaskError naming the line.
Plan parse_plan(std::string_view text);

}  // namespace opportune::task

#endif  // OPPORTUNE__TASK__PLAN_HPP_
