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

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "opportune/cli/commands.hpp"
#include "opportune/cli/config.hpp"

namespace cli = opportune::cli;

namespace
{

bool write_text(const std::string & file, const std::string & text)
{
  std::ofstream out(file);
  out << text;
  if (!out) {
    std::cerr << "error: cannot write " << file << "\n";
    return false;
  }
  return true;
}

}  // namespace

int main(int argc, char ** argv)
{
  CLI::App app{"Opportunity detection and goal formulation for temporal planning tasks"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", "opportune 1.0.0");

  std::string config_file;
  std::vector<std::string> overrides;
  bool pretty = false;
  bool timings = false;
  std::string output;
  app.add_option("--config", config_file, "TOML configuration (default: $OPPORTUNE_CONFIG)");
  app.add_option("--set", overrides, "Override a configuration key, key=value")->take_all();
  app.add_flag("--pretty", pretty, "Human-readable output");
  app.add_flag("--timings", timings, "Include wall-clock timings in reports");
  app.add_option("-o,--output", output, "Write the main output to a file");

  std::string domain;
  std::string problem;
  auto task_options = [&](CLI::App * cmd) {
      cmd->add_option("--domain", domain, "PDDL domain")->required()->check(CLI::ExistingFile);
      cmd->add_option("--problem", problem, "PDDL problem")->required()->check(CLI::ExistingFile);
    };

  auto * onto = app.add_subcommand("ontology", "Task ontologies and repositories");
  onto->require_subcommand(1);
  std::string onto_id = "n_phi";
  auto * build = onto->add_subcommand("build", "Derive the ontology of a planning task");
  task_options(build);
  build->add_option("--id", onto_id, "Ontology id");

  std::string onto_file;
  auto * enrich = onto->add_subcommand("enrich", "Annotate an ontology from the knowledge store");
  enrich->add_option("ontology", onto_file)->required()->check(CLI::ExistingFile);
  auto * sv = onto->add_subcommand("sv", "Semantic variance of an ontology");
  sv->add_option("ontology", onto_file)->required()->check(CLI::ExistingFile);
  std::string repo_dir;
  auto * similar = onto->add_subcommand("similar", "Rank a repository against an ontology");
  similar->add_option("ontology", onto_file)->required()->check(CLI::ExistingFile);
  similar->add_option("--repo", repo_dir, "Repository directory (default: ontology.repository)");

  std::string object;
  auto * align = app.add_subcommand("align", "Place a new object in the task");
  task_options(align);
  align->add_option("--object", object, "Object name")->required();

  std::string strategy;
  auto * plan = app.add_subcommand("plan", "Solve a planning task");
  task_options(plan);
  plan->add_option("--strategy", strategy, "optimal or greedy");

  std::string plan_file;
  std::string scenario;
  std::string log_file;
  auto * simulate = app.add_subcommand("simulate", "Execute a plan against a scenario");
  task_options(simulate);
  simulate->add_option("--plan", plan_file, "Plan to execute (default: solve)")
  ->check(CLI::ExistingFile);
  simulate->add_option("--scenario", scenario, "Scenario JSON")->required()
  ->check(CLI::ExistingFile);
  simulate->add_option("--log", log_file, "Write the execution log (JSON lines)");

  std::size_t event = 0;
  auto * pipeline = app.add_subcommand("pipeline", "Opportunity pipeline");
  pipeline->require_subcommand(1);
  auto * run = pipeline->add_subcommand("run", "Process one scenario event from the initial state");
  task_options(run);
  run->add_option("--scenario", scenario, "Scenario JSON")->required()->check(CLI::ExistingFile);
  run->add_option("--event", event, "Event index");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError & e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : cli::kInputError;
  }

  cli::Options opt;
  opt.pretty = pretty;
  opt.timings = timings;
  try {
    if (config_file.empty()) {
      if (const char * env = std::getenv("OPPORTUNE_CONFIG"); env != nullptr && *env != '\0') {
        config_file = env;
      }
    }
    if (!config_file.empty()) {
      opt.config = cli::load_config(config_file);
    }
    for (const auto & o : overrides) {
      cli::apply_override(opt.config, o);
    }
    if (!strategy.empty()) {
      cli::apply_override(opt.config, "planner.strategy=" + strategy);
    }
  } catch (const cli::ConfigError & e) {
    std::cerr << "error: " << e.what() << "\n";
    return cli::kInputError;
  }

  cli::Output out;
  if (build->parsed()) {
    out = cli::cmd_ontology_build(domain, problem, onto_id);
  } else if (enrich->parsed()) {
    out = cli::cmd_ontology_enrich(opt, onto_file);
  } else if (sv->parsed()) {
    out = cli::cmd_ontology_sv(opt, onto_file);
  } else if (similar->parsed()) {
    out = cli::cmd_ontology_similar(opt, onto_file, repo_dir);
  } else if (align->parsed()) {
    out = cli::cmd_align(opt, domain, problem, object);
  } else if (plan->parsed()) {
    out = cli::cmd_plan(opt, domain, problem);
  } else if (simulate->parsed()) {
    cli::SimulateArgs args{domain, problem, std::nullopt, scenario};
    if (!plan_file.empty()) {
      args.plan = plan_file;
    }
    out = cli::cmd_simulate(opt, args);
  } else if (run->parsed()) {
    out = cli::cmd_pipeline_run(opt, domain, problem, scenario, event);
  }

  std::cerr << out.err;
  if (!log_file.empty() && !out.log.empty() && !write_text(log_file, out.log)) {
    return cli::kInputError;
  }
  if (!output.empty()) {
    if (!write_text(output, out.out)) {
      return cli::kInputError;
    }
  } else {
    std::cout << out.out;
  }
  return out.code;
}
