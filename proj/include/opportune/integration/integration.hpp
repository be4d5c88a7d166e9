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

#ifndef OPPORTUNE__INTEGRATION__INTEGRATION_HPP_
#define OPPORTUNE__INTEGRATION__INTEGRATION_HPP_

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "opportune/enrichment/knowledge.hpp"
#include "opportune/execution/execution.hpp"
#include "opportune/integration/provider.hpp"
#include "opportune/matching/matching.hpp"
#include "opportune/ontology/ontology.hpp"
#include "opportune/planner/planner.hpp"
#include "opportune/task/task.hpp"

namespace opportune::integration
{

struct NoveltyReport
{
  task::Atom proposition;
  std::vector<std::string> unknown_objects;
  task::Minutes arrival_time = 0;
};

NoveltyReport novelty(const task::Atom & proposition, const task::Problem & problem, task::Minutes at);

/// Members of `filtered` with an individual named like `object` (compared
/// after name normalization), in the order of `filtered`.
ontology::Repository locate_object(const std::string & object, const ontology::Repository & filtered);

/// The member with the highest semantic variance; ties go to the smaller
/// id. Throws std::invalid_argument on an empty repository.
const ontology::Ontology & select_ontology(const ontology::Repository & located, bool squared = true);

/// The individual id in `onto` that names `object`, if any.
std::optional<std::string> find_individual(const ontology::Ontology & onto, const std::string & object);

struct IntegrationResult
{
  enum class Kind { ExistingType, Equivalent, NewType, Unplaced };

  Kind kind = Kind::Unplaced;
  std::string object;
  /// Concept of the object in the selected ontology.
  std::string source_type;
  /// Type the object received in the task; empty when unplaced.
  std::string type;
  /// Parent of a newly added type.
  std::string parent;
  std::optional<matching::Positioning> positioning;
  std::string reason;
};

const char * kind_str(IntegrationResult::Kind kind);

/// Adds `object` to the task (and to `n_phi`) using its concept in `n_o`.
/// Leaves both untouched when the type cannot be placed.
IntegrationResult integrate_object(
  task::PlanningTask & task, const std::string & object, ontology::Ontology & n_phi,
  const ontology::Ontology & n_o, const matching::MatchConfig & config);

struct Bindings
{
  std::string window_predicate = "open";
  std::string movement_function = "walk_time";
  double walking_speed_kmh = 5.0;
};

struct Instantiation
{
  std::vector<task::Atom> atoms;
  task::FluentMap fluents;
  std::vector<task::TimedLiteral> tils;
  /// Facts the provider could not supply. Non-empty means the object
  /// cannot be planned with.
  std::vector<std::string> missing;

  bool complete() const {return missing.empty();}
};

/// Works out which facts the task needs about `object` and fetches them.
/// Windows become timed literals relative to the task horizon start;
/// movement times to every other location come from coordinates unless
/// the provider lists them. On success the facts are added to the task.
Instantiation instantiate_variables(
  task::PlanningTask & task, const std::string & object, const DataProvider & provider,
  const Bindings & bindings);

struct CandidateGoal
{
  task::Atom atom;
  std::string provenance;

  bool operator==(const CandidateGoal &) const = default;
};

/// Goal atoms for `object` of type `type`, built from the existing goals
/// whose argument in some position has type `type` or a sibling of it.
std::vector<CandidateGoal> formulate_goals(
  const task::PlanningTask & task, const std::string & object, const std::string & type);

struct OpportunityDecision
{
  CandidateGoal candidate;
  task::PlanningTask variant;
  std::optional<task::Plan> plan;
  double metric = 0.0;
  bool accepted = false;
  std::string reason;
  double elapsed_ms = 0.0;
};

struct Evaluation
{
  std::vector<OpportunityDecision> decisions;
  std::optional<std::size_t> winner;
};

/// Plans every variant G + {g'} from the state captured in `snapshot`
/// and picks the accepted one with the best metric (ties: smaller atom).
Evaluation evaluate_opportunities(
  const task::PlanningTask & snapshot, const std::vector<CandidateGoal> & candidates,
  planner::Planner & planner, const planner::PlannerConfig & config);

/// A task whose initial state is the given state at `now`: remaining timed
/// literals only, horizon starting at `now`.
task::PlanningTask snapshot(
  const task::PlanningTask & task, const task::AtomSet & atoms, const task::FluentMap & fluents,
  task::Minutes now);

struct PipelineConfig
{
  matching::MatchConfig match;
  planner::PlannerConfig planner;
  Bindings bindings;
  bool squared_sv = true;
  bool charge_planning_time = false;
};

/// Trace of one object through the stages.
struct ObjectTrace
{
  std::string object;
  std::string route;  // "new" or "known"
  std::vector<matching::RankedOntology> ranking;
  std::vector<std::string> located;
  std::map<std::string, double> variance;
  std::string selected;
  std::optional<IntegrationResult> integration;
  std::vector<std::string> missing;
  std::vector<CandidateGoal> candidates;
  std::string stop;
};

struct PipelineResult
{
  std::vector<ObjectTrace> traces;
  std::vector<OpportunityDecision> decisions;
  std::optional<std::size_t> winner;
  std::optional<execution::Swap> swap;
  double elapsed_ms = 0.0;

  /// Decision report. Wall-clock figures appear only when `timings` is set.
  nlohmann::json report(bool timings) const;
};

class Pipeline
{
public:
  /// `repository` and the task ontology are enriched with `store` before
  /// use. `planner` defaults to the built-in search.
  Pipeline(
    ontology::Repository repository, enrichment::KnowledgeStore store,
    const DataProvider * provider, PipelineConfig config, planner::Planner * planner = nullptr);

  /// Handles the novel and known-object opportunities of one event.
  PipelineResult process(
    const task::PlanningTask & task, const task::AtomSet & atoms, const task::FluentMap & fluents,
    task::Minutes now, const execution::Classification & classification,
    const std::map<std::string, ObjectFacts> & inline_facts) const;

  /// The pipeline as an execution hook.
  execution::OpportunityHook hook() const;

  const ontology::Repository & repository() const {return repository_;}
  const enrichment::KnowledgeStore & store() const {return store_;}
  const PipelineConfig & config() const {return config_;}

private:
  ontology::Repository repository_;
  enrichment::KnowledgeStore store_;
  const DataProvider * provider_;
  PipelineConfig config_;
  planner::Planner * planner_;
  mutable planner::BuiltinPlanner builtin_;
};

}  // namespace opportune::integration

#endif  // OPPORTUNE__INTEGRATION__INTEGRATION_HPP_
