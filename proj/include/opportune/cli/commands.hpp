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

#ifndef OPPORTUNE__CLI__COMMANDS_HPP_
#define OPPORTUNE__CLI__COMMANDS_HPP_

#include <filesystem>
#include <optional>
#include <string>

#include "json.hpp"
#include "opportune/cli/config.hpp"
#include "opportune/execution/execution.hpp"

namespace opportune::cli
{

enum ExitCode : int { kOk = 0, kInputError = 1, kUnsolvable = 2, kBudgetExhausted = 3 };

/// What a command prints. `log` holds the execution log of `simulate`.
struct Output
{
  int code = kOk;
  std::string out;
  std::string err;
  std::string log;
};

struct Options
{
  Config config;
  bool pretty = false;
  /// Adds wall-clock figures to reports.
  bool timings = false;
};

using std::filesystem::path;

Output cmd_ontology_build(const path & domain, const path & problem, const std::string & id);
Output cmd_ontology_enrich(const Options & opt, const path & ontology);
Output cmd_ontology_sv(const Options & opt, const path & ontology);
Output cmd_ontology_similar(const Options & opt, const path & ontology, const path & repository);
Output cmd_align(
  const Options & opt, const path & domain, const path & problem, const std::string & object);
Output cmd_plan(const Options & opt, const path & domain, const path & problem);

struct SimulateArgs
{
  path domain;
  path problem;
  std::optional<path> plan;
  path scenario;
};

Output cmd_simulate(const Options & opt, const SimulateArgs & args);
Output cmd_pipeline_run(
  const Options & opt, const path & domain, const path & problem, const path & scenario,
  std::size_t event);

/// Summary of a run: plans adopted with their visit counts, actions
/// executed, where the tourist ended and every opportunity decision.
nlohmann::json simulation_report(
  const task::PlanningTask & initial, const execution::ExecutionReport & report);

/// One line per fact of a simulation report.
std::string render_simulation(const nlohmann::json & report);

}  // namespace opportune::cli

#endif  // OPPORTUNE__CLI__COMMANDS_HPP_
