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

#ifndef OPPORTUNE__TASK__PDDL_HPP_
#define OPPORTUNE__TASK__PDDL_HPP_

#include <filesystem>
#include <string>
#include <string_view>

#include "opportune/task/task.hpp"

namespace opportune::task
{

class ParseError : public TaskError
{
public:
  ParseError(const std::string & what, int line, int column);

  int line() const {return line_;}
  /// The message without the position suffix.
  const std::string & message() const {return message_;}
  int column() const {return column_;}

private:
  std::string message_;
  int line_;
  int column_;
};

// Supported subset:
//
//   domain:  :requirements :types :predicates (with either) :functions
//            :durative-action with :parameters, :duration (= ?duration e),
//            :condition (at start / over all), :effect (at start / at end),
//            numeric effects increase / decrease / assign
//   problem: :objects :init (atoms, (= (f ..) n), (at t literal)) :goal
//            (positive atoms only) :metric, and (:horizon <start> <end>)
//
// Anything outside the subset is a ParseError, never skipped.

Domain parse_domain(std::string_view text);
Problem parse_problem(std::string_view text, const Domain & domain);

std::string write_domain(const Domain & domain);
std::string write_problem(const Problem & problem);

std::string read_file(const std::filesystem::path & path);
PlanningTask load_task(
  const std::filesystem::path & domain_path,
  const std::filesystem::path & problem_path);

}  // namespace opportune::task

#endif  // OPPORTUNE__TASK__PDDL_HPP_
