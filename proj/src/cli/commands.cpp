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

#include "opportune/cli/commands.hpp"

#include <chrono>
#include <cstdio>
#include <iomanip>
#include <memory>
#include <sstream>

#include "opportune/enrichment/knowledge.hpp"
#include "opportune/integration/integration.hpp"
#include "opportune/matching/matching.hpp"
#include "opportune/ontology/ontology.hpp"
#include "opportune/planner/planner.hpp"
#include "opportune/task/pddl.hpp"
#include "opportune/task/plan.hpp"

namespace opportune::cli
{

using nlohmann::json;

namespace
{

std::string dump(const json & j, bool pretty)
{
  return j.dump(pretty ? 2 : -1) + "\n";
}

Output failure(int code, const std::string & message)
{
  Output o;
  o.code = code;
  o.err = message + "\n";
  return o;
}

/// Runs `body`, turning the library's input errors into exit code 1.
template<typename F>
Output guarded(F && body)
{
  try {
    return body();
  } catch (const task::TaskError & e) {
    return failure(kInputError, std::string("error: ") + e.what());
  } catch (const ontology::OntologyError & e) {
    return failure(kInputError, std::string("error: ") + e.what());
  } catch (const enrichment::KnowledgeError & e) {
    return failure(kInputError, std::string("error: ") + e.what());
  } catch (const integration::ProviderError & e) {
    return failure(kInputError, std::string("error: ") + e.what());
  } catch (const execution::ScenarioError & e) {
    return failure(kInputError, std::string("error: ") + e.what());
  } catch (const ConfigError & e) {
    return failure(kInputError, std::string("error: ") + e.what());
  } catch (const std::invalid_argument & e) {
    return failure(kInputError, std::string("error: ") + e.what());
  }
}

/// The configured edge store, grown from the online service when enabled.
enrichment::KnowledgeStore knowledge(
  const Config & c, const std::vector<ontology::Ontology> & ontologies, std::string & warnings)
{
  enrichment::KnowledgeStore store;
  if (!c.store_path.empty()) {
    store = enrichment::load_edges(c.store_path);
    for (const auto & issue : store.issues()) {
      warnings += "warning: " + c.store_path.string() + ":" + std::to_string(issue.line) + ": " +
        issue.reason + "\n";
    }
  }
  if (c.knowledge_online) {
    enrichment::ConceptNetClient client(c.knowledge_endpoint, c.store_path);
    std::vector<std::string> notes;
    if (!enrichment::augment_online(ontologies, client, store, &notes)) {
      warnings += "warning: knowledge endpoint unreachable, using the local store\n";
    }
    for (const auto & n : notes) {
      warnings += "warning: " + n + "\n";
    }
  }
  return store;
}

std::unique_ptr<integration::DataProvider> make_provider(const Config & c)
{
  if (!c.provider_endpoint.empty()) {
    return std::make_unique<integration::HttpProvider>(c.provider_endpoint);
  }
  if (!c.provider_path.empty()) {
    return std::make_unique<integration::FileProvider>(
      integration::FileProvider::load(c.provider_path));
  }
  return std::make_unique<integration::FileProvider>(
    std::map<std::string, integration::ObjectFacts>{});
}

std::unique_ptr<planner::Planner> make_planner(const Config & c)
{
  if (!c.planner_command.empty()) {
    return std::make_unique<planner::ExternalPlanner>(c.planner_command);
  }
  return std::make_unique<planner::BuiltinPlanner>();
}

ontology::Repository repository(const Config & c)
{
  if (c.repository.empty()) {
    return {};
  }
  return ontology::load_repository(c.repository);
}

int exit_code(planner::SolveStatus s)
{
  switch (s) {
    case planner::SolveStatus::Solved: return kOk;
    case planner::SolveStatus::Unsolvable: return kUnsolvable;
    case planner::SolveStatus::BudgetExhausted: return kBudgetExhausted;
  }
  return kInputError;
}

std::string fixed4(double v)
{
  std::ostringstream ss;
  ss << std::fixed << std::setprecision(4) << v;
  return ss.str();
}

json plan_json(const task::Plan & plan)
{
  json steps = json::array();
  for (const auto & s : plan.steps) {
    steps.push_back(s.str());
  }
  return steps;
}

std::string times_word(std::size_t n)
{
  switch (n) {
    case 0: return "never";
    case 1: return "once";
    case 2: return "twice";
    default: return std::to_string(n) + " times";
  }
}

}  // namespace

Output cmd_ontology_build(const path & domain, const path & problem, const std::string & id)
{
  return guarded(
    [&] {
      Output o;
      o.out = ontology::to_json(ontology::from_task(task::load_task(domain, problem), id)) + "\n";
      return o;
    });
}

Output cmd_ontology_enrich(const Options & opt, const path & file)
{
  return guarded(
    [&] {
      Output o;
      const auto onto = ontology::load(file);
      if (opt.config.store_path.empty() && !opt.config.knowledge_online) {
        return failure(kInputError, "error: no knowledge store configured (knowledge.store_path)");
      }
      const auto store = knowledge(opt.config, {onto}, o.err);
      o.out = ontology::to_json(enrichment::annotate_ontology(onto, store)) + "\n";
      return o;
    });
}

Output cmd_ontology_sv(const Options & opt, const path & file)
{
  return guarded(
    [&] {
      Output o;
      o.out = fixed4(ontology::semantic_variance(ontology::load(file), opt.config.squared_sv)) + "\n";
      return o;
    });
}

Output cmd_ontology_similar(const Options & opt, const path & file, const path & repo_dir)
{
  return guarded(
    [&] {
      Output o;
      auto onto = ontology::load(file);
      auto repo = ontology::load_repository(repo_dir.empty() ? opt.config.repository : repo_dir);
      std::vector<ontology::Ontology> all = repo.members;
      all.push_back(onto);
      const auto store = knowledge(opt.config, all, o.err);
      if (!store.empty()) {
        onto = enrichment::annotate_ontology(onto, store);
        for (auto & m : repo.members) {
          m = enrichment::annotate_ontology(m, store);
        }
      }
      const auto ranked =
        matching::rank_similar(onto, repo, opt.config.match.filter_threshold);
      if (opt.pretty) {
        std::ostringstream ss;
        ss << std::left << std::setw(16) << "id" << std::setw(10) << "score" << "selected\n";
        for (const auto & r : ranked) {
          ss << std::setw(16) << r.id << std::setw(10) << fixed4(r.score)
             << (r.selected ? "yes" : "no") << "\n";
        }
        o.out = ss.str();
        return o;
      }
      json rows = json::array();
      for (const auto & r : ranked) {
        rows.push_back(json{{"id", r.id}, {"score", r.score}, {"selected", r.selected}});
      }
      o.out = dump(rows, false);
      return o;
    });
}

Output cmd_align(
  const Options & opt, const path & domain, const path & problem, const std::string & object)
{
  return guarded(
    [&] {
      Output o;
      auto t = task::load_task(domain, problem);
      auto repo = repository(opt.config);
      std::vector<ontology::Ontology> all = repo.members;
      auto n_phi = ontology::from_task(t, "n_phi");
      all.push_back(n_phi);
      const auto store = knowledge(opt.config, all, o.err);
      n_phi = enrichment::annotate_ontology(n_phi, store);
      for (auto & m : repo.members) {
        m = enrichment::annotate_ontology(m, store);
      }
      json r{{"object", object}};
      if (t.problem.type_of(object)) {
        r["stop"] = object + " is already an object of the task";
        o.out = dump(r, opt.pretty);
        return o;
      }
      const auto threshold = opt.config.match.filter_threshold;
      json ranking = json::array();
      for (const auto & x : matching::rank_similar(n_phi, repo, threshold)) {
        ranking.push_back(json{{"id", x.id}, {"score", x.score}, {"selected", x.selected}});
      }
      r["ranking"] = ranking;
      const auto located =
        integration::locate_object(object, matching::filter_similar(n_phi, repo, threshold));
      json variance = json::object();
      for (const auto & m : located.members) {
        variance[m.id()] = ontology::semantic_variance(m, opt.config.squared_sv);
      }
      r["variance"] = variance;
      if (located.members.empty()) {
        r["stop"] = "unknown object: " + object + " is in no similar ontology";
        o.out = dump(r, opt.pretty);
        return o;
      }
      const auto & n_o = integration::select_ontology(located, opt.config.squared_sv);
      r["selected"] = n_o.id();
      const auto res = integration::integrate_object(t, object, n_phi, n_o, opt.config.match);
      json ij{{"kind", integration::kind_str(res.kind)}, {"source_type", res.source_type},
        {"type", res.type}, {"reason", res.reason}};
      if (!res.parent.empty()) {
        ij["parent"] = res.parent;
        ij["types_entry"] = res.type + " - " + res.parent;
      }
      if (res.kind != integration::IntegrationResult::Kind::Unplaced) {
        ij["objects_entry"] = object + " - " + res.type;
      }
      if (res.positioning) {
        ij["positioning"] = json::parse(matching::alignment_report(n_phi, n_o, *res.positioning));
      }
      r["integration"] = ij;
      o.out = dump(r, opt.pretty);
      return o;
    });
}

Output cmd_plan(const Options & opt, const path & domain, const path & problem)
{
  return guarded(
    [&] {
      Output o;
      const auto t = task::load_task(domain, problem);
      auto p = make_planner(opt.config);
      const auto r = p->solve(t, opt.config.planner);
      o.code = exit_code(r.status);
      if (r.status == planner::SolveStatus::Solved) {
        o.out = task::write_plan(r.plan);
        std::ostringstream ss;
        ss << "; metric " << r.metric << "\n";
        o.out += ss.str();
      }
      o.err = std::string("status: ") + planner::status_str(r.status);
      if (!r.message.empty()) {
        o.err += " (" + r.message + ")";
      }
      o.err += "\nnodes: " + std::to_string(r.stats.nodes) + "\n";
      return o;
    });
}

json simulation_report(const task::PlanningTask & initial, const execution::ExecutionReport & rep)
{
  json plans = json::array();
  for (std::size_t i = 0; i < rep.plans.size(); ++i) {
    const auto at = rep.adopted_at[i];
    std::size_t done = 0;
    for (const auto & s : rep.executed) {
      done += s.action == "visit" && s.end() <= at;
    }
    plans.push_back(json{
        {"id", rep.plan_ids[i]}, {"adopted_at", at},
        {"visits", done + rep.plans[i].count("visit")}, {"steps", plan_json(rep.plans[i])}});
  }
  std::map<std::string, std::size_t> counts;
  for (const auto & s : rep.executed) {
    ++counts[s.action];
  }
  json out{
    {"plans", plans},
    {"executed", plan_json(task::Plan{rep.executed})},
    {"actions", counts},
    {"visits", rep.count("visit")},
    {"meals", rep.count("eat")},
    {"goals_satisfied", rep.goals_satisfied},
    {"end_time", rep.end_time},
    {"stopped", rep.stopped},
    {"failures", rep.failures},
    {"decisions", rep.decisions},
  };
  std::string summary = std::to_string(rep.count("visit")) + " attractions visited, ate " +
    times_word(rep.count("eat"));
  for (const auto & a : initial.problem.init) {
    if (a.predicate != "be" || a.args.size() != 2) {
      continue;
    }
    for (const auto & f : rep.final_atoms) {
      if (f.predicate == "be" && f.args.size() == 2 && f.args[0] == a.args[0]) {
        const auto type = rep.final_task.problem.type_of(f.args[1]);
        out["ends_at"] = f.args[1];
        out["returned_to_start"] = f.args[1] == a.args[1];
        summary += ", ends at " + type.value_or(f.args[1]);
      }
    }
    break;
  }
  out["summary"] = summary;
  return out;
}

std::string render_simulation(const json & r)
{
  std::ostringstream ss;
  for (const auto & p : r["plans"]) {
    ss << p["id"].get<std::string>() << " from " << p["adopted_at"] << ": " << p["visits"]
       << " visits\n";
  }
  for (const auto & d : r["decisions"]) {
    if (!d.contains("objects")) {
      continue;
    }
    for (const auto & o : d["objects"]) {
      ss << "  object " << o["object"].get<std::string>();
      if (o.contains("stop")) {
        ss << ": " << o["stop"].get<std::string>();
      }
      ss << "\n";
    }
    for (const auto & c : d["decisions"]) {
      ss << "  candidate " << c["candidate"].get<std::string>() << ": "
         << c["verdict"].get<std::string>() << "\n";
    }
  }
  for (const auto & f : r["failures"]) {
    ss << "failure at " << f["time"] << ": " << f["what"].get<std::string>() << "\n";
  }
  ss << r["summary"].get<std::string>() << "\n";
  ss << "goals " << (r["goals_satisfied"].get<bool>() ? "satisfied" : "not satisfied") << " at "
     << r["end_time"] << "\n";
  return ss.str();
}

Output cmd_simulate(const Options & opt, const SimulateArgs & args)
{
  return guarded(
    [&] {
      const auto t0 = std::chrono::steady_clock::now();
      Output o;
      const auto t = task::load_task(args.domain, args.problem);
      const auto scenario = execution::load_scenario(args.scenario);
      auto p = make_planner(opt.config);
      task::Plan plan;
      if (args.plan) {
        plan = task::parse_plan(task::read_file(*args.plan));
        const auto v = planner::validate(plan, t);
        if (!v.valid) {
          return failure(kInputError, "error: plan does not validate: " + v.violation->what);
        }
      } else {
        const auto r = p->solve(t, opt.config.planner);
        if (r.status != planner::SolveStatus::Solved) {
          return failure(
            exit_code(r.status),
            std::string("error: no initial plan: ") + planner::status_str(r.status));
        }
        plan = r.plan;
      }
      auto repo = repository(opt.config);
      std::vector<ontology::Ontology> all = repo.members;
      all.push_back(ontology::from_task(t, "n_phi"));
      auto store = knowledge(opt.config, all, o.err);
      const auto provider = make_provider(opt.config);
      const integration::Pipeline pipeline(
        std::move(repo), std::move(store), provider.get(), opt.config.pipeline(), p.get());
      const auto rep =
        execution::run(t, plan, scenario, pipeline.hook(), {opt.config.report_only});
      auto report = simulation_report(t, rep);
      if (opt.timings) {
        report["timings"] = json{
          {"total_ms",
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count()}};
      }
      o.out = opt.pretty ? render_simulation(report) : dump(report, false);
      o.log = rep.log_text();
      return o;
    });
}

Output cmd_pipeline_run(
  const Options & opt, const path & domain, const path & problem, const path & scenario_file,
  std::size_t index)
{
  return guarded(
    [&] {
      Output o;
      const auto t = task::load_task(domain, problem);
      const auto scenario = execution::load_scenario(scenario_file);
      if (index >= scenario.events.size()) {
        return failure(kInputError, "error: the scenario has no event " + std::to_string(index));
      }
      const auto & ev = scenario.events[index];
      const auto now = std::max(ev.time, t.problem.horizon.start);
      // The state at the event time when nothing has been done yet.
      task::AtomSet atoms = t.problem.init;
      for (const auto & til : t.problem.tils) {
        if (til.time <= now) {
          if (til.literal.positive) {
            atoms.insert(til.literal.atom);
          } else {
            atoms.erase(til.literal.atom);
          }
        }
      }
      task::AtomSet observed = atoms;
      for (const auto & a : ev.retract_atoms) {
        observed.erase(a);
      }
      observed.insert(ev.assert_atoms.begin(), ev.assert_atoms.end());
      const auto cls =
        execution::classify(execution::discrepancies(atoms, observed), t, task::Plan{}, now);

      auto repo = repository(opt.config);
      std::vector<ontology::Ontology> all = repo.members;
      all.push_back(ontology::from_task(t, "n_phi"));
      auto store = knowledge(opt.config, all, o.err);
      const auto provider = make_provider(opt.config);
      auto p = make_planner(opt.config);
      const integration::Pipeline pipeline(
        std::move(repo), std::move(store), provider.get(), opt.config.pipeline(), p.get());
      const auto r = pipeline.process(t, observed, t.problem.fluents, now, cls, ev.facts);
      auto report = r.report(opt.timings);
      report["time"] = now;
      json tags = json::array();
      for (const auto & c : cls) {
        tags.push_back(json{{"atom", c.atom.str()}, {"change", c.added ? "added" : "removed"},
            {"tag", execution::tag_str(c.tag)}});
      }
      report["classification"] = tags;
      o.out = dump(report, opt.pretty);
      return o;
    });
}

}  // namespace opportune::cli
