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

#ifndef OPPORTUNE__PLANNER__PLANNER_HPP_
#define OPPORTUNE__PLANNER__PLANNER_HPP_

#include <cstdint>
#include <optional>
#include <string>

#include "opportune/task/plan.hpp"
#include "opportune/task/task.hpp"

namespace opportune::planner
{

enum class Strategy { Optimal, Greedy };

const char * strategy_str(Strategy s);
/// Throws std::invalid_argument for anything but "optimal" or "greedy".
Strategy parse_strategy(const std::string & text);

struct PlannerConfig
{
  std::uint64_t node_budget = 2000000;
  std::int64_t time_budget_ms = 20000;
  Strategy strategy = Strategy::Optimal;
};

enum class SolveStatus { Solved, Unsolvable, BudgetExhausted };

const char * status_str(SolveStatus s);

struct SearchStats
{
  std::uint64_t nodes = 0;
  std::uint64_t pruned_bound = 0;
  std::uint64_t pruned_dominated = 0;
  double elapsed_ms = 0.0;
  bool dominance_enabled = false;
};

struct SolveResult
{
  SolveStatus status = SolveStatus::Unsolvable;
  /// The plan for Solved; the best plan found so far (possibly empty) for
  /// BudgetExhausted.
  task::Plan plan;
  bool has_plan = false;
  double metric = 0.0;
  SearchStats stats;
  std::string message;
};

/// Sequential temporal planning. Every action starts at the earliest time
/// at or after the end of its predecessor at which its start conditions
/// hold and its invariant holds over the whole execution, given the timed
/// initial literals. Optimal search is a depth-first branch and bound on
/// the task metric (ties: fewer steps, then first in action/argument
/// order); greedy search is best-first on the number of unmet goals.
SolveResult solve(const task::PlanningTask & task, const PlannerConfig & config);

struct Violation
{
  /// Index of the offending step, or -1 for plan-level problems (goals,
  /// horizon).
  int step = -1;
  task::Minutes time = 0;
  std::string what;
};

struct ValidationResult
{
  bool valid = false;
  std::optional<Violation> violation;
  task::AtomSet final_atoms;
  task::FluentMap final_fluents;
  task::Minutes end_time = 0;
};

/// Replays a plan against the task and reports the first violation.
ValidationResult validate(const task::Plan & plan, const task::PlanningTask & task);

/// Metric value at the end of a valid plan. Throws task::TaskError when
/// the plan does not validate or the metric is undefined.
double metric_value(const task::Plan & plan, const task::PlanningTask & task);

/// True when `a` is strictly better than `b` under `metric`.
bool better(double a, double b, const task::Metric & metric);

/// Planner interface so that an external PDDL planner can stand in for
/// the built-in search.
class Planner
{
public:
  virtual ~Planner() = default;
  virtual SolveResult solve(const task::PlanningTask & task, const PlannerConfig & config) = 0;
};

class BuiltinPlanner : public Planner
{
public:
  SolveResult solve(const task::PlanningTask & task, const PlannerConfig & config) override;
};

/// Runs `<command> <domain file> <problem file>` and reads plan lines of
/// the form `<start>: (<action> <args>) [<duration>]` from its standard
/// output. The plan is validated before it is returned.
class ExternalPlanner : public Planner
{
public:
  explicit ExternalPlanner(std::string command);
  SolveResult solve(const task::PlanningTask & task, const PlannerConfig & config) override;

private:
  std::string command_;
};

}  // namespace opportune::planner

#endif  // OPPORTUNE__PLANNER__PLANNER_HPP_
