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

#ifndef OPPORTUNE__EXECUTION__EXECUTION_HPP_
#define OPPORTUNE__EXECUTION__EXECUTION_HPP_

#include <cstddef>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "opportune/integration/provider.hpp"
#include "opportune/task/plan.hpp"
#include "opportune/task/task.hpp"

namespace opportune::execution
{

/// Declaration order is the processing order at equal times.
enum class EventKind { TimedLiteral, Exogenous, ActionEnd, ActionStart, GoalCheck };

const char * kind_str(EventKind kind);

struct TimedEvent
{
  task::Minutes time = 0;
  EventKind kind = EventKind::GoalCheck;
  /// Plan step for action events.
  std::size_t step = 0;
  /// Literal for timed initial literals.
  task::Literal literal;
  /// Position in insertion order; last key of the sort.
  std::size_t seq = 0;
};

bool event_before(const TimedEvent & a, const TimedEvent & b);

struct Timeline
{
  std::vector<TimedEvent> events;
  std::size_t cursor = 0;
};

/// Throws task::TaskError when the plan does not validate against the task.
Timeline build_timeline(const task::PlanningTask & task, const task::Plan & plan);

struct ReplayState
{
  task::AtomSet atoms;
  task::FluentMap fluents;
};

/// Applies every event of the timeline to the initial state.
ReplayState replay(const task::PlanningTask & task, const task::Plan & plan, const Timeline & timeline);

struct DiscrepancySet
{
  task::AtomSet observed_not_expected;
  task::AtomSet expected_not_observed;

  bool empty() const {return observed_not_expected.empty() && expected_not_observed.empty();}
  bool operator==(const DiscrepancySet &) const = default;
};

DiscrepancySet discrepancies(const task::AtomSet & expected, const task::AtomSet & observed);

enum class Tag { Confirmation, Failure, OpportunityKnownObject, OpportunityNewObject };

const char * tag_str(Tag tag);

struct TaggedAtom
{
  task::Atom atom;
  /// True for observed-not-expected, false for expected-not-observed.
  bool added = true;
  Tag tag = Tag::Confirmation;

  bool operator==(const TaggedAtom &) const = default;
};

using Classification = std::vector<TaggedAtom>;

/// Predicates that can contribute to a goal: goal predicates and,
/// transitively, the positive conditions of actions that add them.
std::set<std::string> goal_relevant_predicates(const task::PlanningTask & task);

Classification classify(
  const DiscrepancySet & ds, const task::PlanningTask & task, const task::Plan & plan,
  task::Minutes now);

class ScenarioError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

struct ScenarioEvent
{
  task::Minutes time = 0;
  std::vector<task::Atom> assert_atoms;
  std::vector<task::Atom> retract_atoms;
  std::map<std::string, integration::ObjectFacts> facts;
};

struct Scenario
{
  std::vector<ScenarioEvent> events;
};

/// { "events": [{ "time": min, "assert": [atoms], "retract": [atoms],
///   "facts": { id: record } }] }, events sorted by time.
Scenario parse_scenario(const std::string & text);
Scenario load_scenario(const std::filesystem::path & path);

/// What the opportunity hook sees. The state is the observed state at
/// `now`, after the running action (if any) has finished.
struct Observation
{
  task::Minutes now = 0;
  const task::PlanningTask * task = nullptr;
  const task::Plan * plan = nullptr;
  std::string plan_id;
  const task::AtomSet * atoms = nullptr;
  const task::FluentMap * fluents = nullptr;
  const ScenarioEvent * event = nullptr;
  const DiscrepancySet * discrepancy = nullptr;
  const Classification * classification = nullptr;
};

/// A replacement task and plan. The task's horizon starts at the
/// observation time and its initial state is the state to continue from.
struct Swap
{
  task::PlanningTask task;
  task::Plan plan;
};

struct HookOutcome
{
  std::optional<Swap> swap;
  nlohmann::json record = nlohmann::json::object();
};

using OpportunityHook = std::function<HookOutcome(const Observation &)>;

struct RunConfig
{
  /// Keep executing after an action condition fails.
  bool report_only = false;
};

struct ExecutionReport
{
  /// One JSON document per processed event.
  std::vector<std::string> log;
  std::vector<std::string> plan_ids;
  std::vector<task::Plan> plans;
  /// Time each plan took over.
  std::vector<task::Minutes> adopted_at;
  std::vector<task::PlanStep> executed;
  std::vector<nlohmann::json> decisions;
  std::vector<nlohmann::json> failures;
  task::AtomSet final_atoms;
  task::FluentMap final_fluents;
  /// Time of the final goal check, or of the last processed event when the
  /// run stopped early.
  task::Minutes end_time = 0;
  bool goals_satisfied = false;
  bool stopped = false;
  /// The task in force at the end of the run, with every accepted change.
  task::PlanningTask final_task;

  std::size_t count(const std::string & action) const;
  std::string log_text() const;
};

/// Runs the plan against the scenario. Opportunity classifications reach
/// the hook at the end of the running action, or immediately when the
/// tourist is idle.
ExecutionReport run(
  const task::PlanningTask & task, const task::Plan & plan, const Scenario & scenario,
  const OpportunityHook & hook = {}, const RunConfig & config = {});

}  // namespace opportune::execution

#endif  // OPPORTUNE__EXECUTION__EXECUTION_HPP_
