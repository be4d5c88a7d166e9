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

#include <random>

#include "doctest.h"
#include "fixtures.hpp"
#include "opportune/execution/execution.hpp"
#include "opportune/planner/planner.hpp"

using namespace opportune;
using execution::EventKind;
using execution::Tag;
using task::parse_atom;

namespace
{

struct Day
{
  task::PlanningTask task = fixtures::valencia_task();
  task::Plan plan;

  Day()
  {
    const auto r = planner::solve(task, {});
    REQUIRE(r.status == planner::SolveStatus::Solved);
    plan = r.plan;
  }
};

const Day & day()
{
  static const Day d;
  return d;
}

Tag tag_of(const execution::Classification & cls, const std::string & atom)
{
  for (const auto & c : cls) {
    if (c.atom.str() == atom) {
      return c.tag;
    }
  }
  FAIL("atom not classified: " << atom);
  return Tag::Confirmation;
}

execution::Classification classify_change(
  const std::vector<std::string> & add, const std::vector<std::string> & del, task::Minutes now)
{
  const auto & d = day();
  task::AtomSet expected = d.task.problem.init;
  expected.insert(parse_atom("(open Cathedral)"));
  expected.insert(parse_atom("(free_table La_Pepica)"));
  task::AtomSet observed = expected;
  for (const auto & a : add) {
    observed.insert(parse_atom(a));
  }
  for (const auto & a : del) {
    observed.erase(parse_atom(a));
  }
  return execution::classify(execution::discrepancies(expected, observed), d.task, d.plan, now);
}

task::AtomSet random_atoms(std::mt19937 & rng)
{
  static const std::vector<std::string> pool = {
    "(open Cathedral)", "(open Lonja)", "(be tourist Lonja)", "(eaten tourist)",
    "(active tourist)", "(visited tourist Lonja)", "(free_table La_Pepica)", "(open X)"};
  task::AtomSet s;
  for (const auto & a : pool) {
    if (rng() % 2 == 0) {
      s.insert(parse_atom(a));
    }
  }
  return s;
}

}  // namespace

TEST_CASE("empty plan timeline")
{
  auto t = fixtures::valencia_task();
  t.problem.goals = {parse_atom("(be tourist Caro_hotel)")};
  const auto tl = execution::build_timeline(t, task::Plan{});
  REQUIRE_FALSE(tl.events.empty());
  CHECK(tl.events.back().kind == EventKind::TimedLiteral);
  std::size_t goal_checks = 0;
  for (const auto & e : tl.events) {
    goal_checks += e.kind == EventKind::GoalCheck;
  }
  CHECK(goal_checks == 1);
  CHECK(tl.events.size() == t.problem.tils.size() + 1);
}

TEST_CASE("valencia timeline order")
{
  const auto & d = day();
  const auto tl = execution::build_timeline(d.task, d.plan);
  CHECK(tl.events.size() == d.task.problem.tils.size() + 2 * d.plan.steps.size() + 1);
  CHECK(std::is_sorted(tl.events.begin(), tl.events.end(), execution::event_before));
  // At 600 the tourist becomes active before the first move starts.
  const auto first_start = std::find_if(
    tl.events.begin(), tl.events.end(),
    [](const execution::TimedEvent & e) {return e.kind == EventKind::ActionStart;});
  REQUIRE(first_start != tl.events.end());
  CHECK(first_start->time == 600);
  CHECK(first_start->step == 0);
  CHECK(std::prev(first_start)->kind == EventKind::TimedLiteral);
  CHECK(std::prev(first_start)->time == 600);
  // Ends come before starts at the same minute.
  for (std::size_t i = 1; i < tl.events.size(); ++i) {
    const auto & a = tl.events[i - 1];
    const auto & b = tl.events[i];
    if (a.time == b.time) {
      CHECK(static_cast<int>(a.kind) <= static_cast<int>(b.kind));
    }
  }
}

TEST_CASE("timeline rejects an invalid plan")
{
  const auto & d = day();
  auto broken = d.plan;
  broken.steps.erase(broken.steps.begin());
  CHECK_THROWS_AS(execution::build_timeline(d.task, broken), task::TaskError);
}

TEST_CASE("replay agrees with validation")
{
  const auto & d = day();
  const auto tl = execution::build_timeline(d.task, d.plan);
  const auto s = execution::replay(d.task, d.plan, tl);
  const auto v = planner::validate(d.plan, d.task);
  REQUIRE(v.valid);
  CHECK(s.fluents.at({"visits_done", {"tourist"}}) == 5.0);
  for (const auto & g : d.task.problem.goals) {
    CHECK(s.atoms.count(g) == 1);
  }
  // Validation stops at the plan end; the replay also runs the later closings.
  for (const auto & a : v.final_atoms) {
    if (a.predicate != "open" && a.predicate != "active" && a.predicate != "time_for_eat") {
      CHECK(s.atoms.count(a) == 1);
    }
  }
  CHECK(s.fluents == v.final_fluents);
}

TEST_CASE("discrepancy properties")
{
  std::mt19937 rng(11);
  for (int i = 0; i < 200; ++i) {
    const auto a = random_atoms(rng);
    const auto b = random_atoms(rng);
    const auto ab = execution::discrepancies(a, b);
    const auto ba = execution::discrepancies(b, a);
    CHECK(ab.observed_not_expected == ba.expected_not_observed);
    CHECK(ab.expected_not_observed == ba.observed_not_expected);
    CHECK(execution::discrepancies(a, a).empty());
    // Rebuilding the observation from the expectation and the deltas.
    task::AtomSet rebuilt = a;
    for (const auto & x : ab.expected_not_observed) {
      rebuilt.erase(x);
    }
    rebuilt.insert(ab.observed_not_expected.begin(), ab.observed_not_expected.end());
    CHECK(rebuilt == b);
  }
}

TEST_CASE("goal relevant predicates")
{
  const auto rel = execution::goal_relevant_predicates(day().task);
  for (const char * p : {"visited", "eaten", "be", "open", "active", "free_table", "time_for_eat"}) {
    CHECK(rel.count(p) == 1);
  }
  auto t = day().task;
  t.problem.goals = {parse_atom("(eaten tourist)")};
  const auto eat_only = execution::goal_relevant_predicates(t);
  CHECK(eat_only.count("visited") == 0);
  CHECK(eat_only.count("free_table") == 1);
}

TEST_CASE("classification of single changes")
{
  auto cls = classify_change({"(open PicassoExhibition)"}, {}, 650);
  CHECK(tag_of(cls, "(open PicassoExhibition)") == Tag::OpportunityNewObject);

  cls = classify_change({}, {"(open Cathedral)"}, 700);
  CHECK(tag_of(cls, "(open Cathedral)") == Tag::Failure);

  // Once the cathedral visit is over its opening hours no longer matter.
  cls = classify_change({}, {"(open Cathedral)"}, 800);
  CHECK(tag_of(cls, "(open Cathedral)") == Tag::Confirmation);

  cls = classify_change({"(visited tourist Cathedral)"}, {}, 650);
  CHECK(tag_of(cls, "(visited tourist Cathedral)") == Tag::Failure);

  cls = classify_change({}, {"(free_table La_Pepica)"}, 650);
  CHECK(tag_of(cls, "(free_table La_Pepica)") == Tag::Confirmation);

  cls = classify_change({"(open La_Pepica)"}, {}, 650);
  CHECK(tag_of(cls, "(open La_Pepica)") == Tag::OpportunityKnownObject);
}

TEST_CASE("scenario parsing")
{
  const auto s = execution::parse_scenario(
    R"j({"events": [{"time": 5, "assert": ["(open A)"]},
                   {"time": 5, "retract": ["(open B)"],
                    "facts": {"A": {"lat": 1, "lon": 2, "open": [[1, 2]]}}}]})j");
  REQUIRE(s.events.size() == 2);
  CHECK(s.events[0].assert_atoms.front().str() == "(open A)");
  CHECK(s.events[1].retract_atoms.front().str() == "(open B)");
  CHECK(s.events[1].facts.at("A").lat == 1.0);
  CHECK(execution::parse_scenario(R"j({"events": []})j").events.empty());
  CHECK(execution::load_scenario(fixtures::valencia("scenario.json")).events.size() == 2);

  for (const char * bad : {
      "not json",
      R"j([])",
      R"j({"events": [], "extra": 1})j",
      R"j({"events": [{"assert": ["(a)"]}]})j",
      R"j({"events": [{"time": 1.5}]})j",
      R"j({"events": [{"time": 1, "assert": "(a)"}]})j",
      R"j({"events": [{"time": 1, "assert": ["(a"]}]})j",
      R"j({"events": [{"time": 1, "when": 2}]})j",
      R"j({"events": [{"time": 1, "facts": {"A": {"open": [[5, 2]]}}}]})j",
      R"j({"events": [{"time": 9}, {"time": 3}]})j"})
  {
    CHECK_THROWS_AS(execution::parse_scenario(bad), execution::ScenarioError);
  }
  CHECK_THROWS_AS(execution::load_scenario("/nonexistent/scenario.json"), execution::ScenarioError);
}

TEST_CASE("no exogenous events runs the plan as written")
{
  const auto & d = day();
  const auto rep = execution::run(d.task, d.plan, {});
  CHECK(rep.plan_ids == std::vector<std::string>{"PLAN1"});
  CHECK(rep.executed == d.plan.steps);
  CHECK(rep.count("visit") == 5);
  CHECK(rep.count("eat") == 1);
  CHECK(rep.goals_satisfied);
  CHECK(rep.failures.empty());
  CHECK(rep.end_time == 974);
  for (const auto & line : rep.log) {
    const auto j = nlohmann::json::parse(line);
    CHECK(j["expected"] == j["observed"]);
    CHECK_FALSE(j.contains("discrepancy"));
  }
}

TEST_CASE("opportunities wait for the running action")
{
  const auto & d = day();
  const auto s = execution::parse_scenario(
    R"j({"events": [{"time": 650, "assert": ["(open Virgen_plaza)"]},
                   {"time": 1000, "assert": ["(open Oceanografic)"]}]})j");
  std::vector<task::Minutes> seen;
  const auto hook = [&](const execution::Observation & obs) {
      seen.push_back(obs.now);
      CHECK(obs.classification->front().tag == Tag::OpportunityNewObject);
      return execution::HookOutcome{};
    };
  const auto rep = execution::run(d.task, d.plan, s, hook);
  // The viveros visit ends at 698; at 1000 the tour is already over.
  CHECK(seen == std::vector<task::Minutes>{698, 1000});
  CHECK(rep.executed == d.plan.steps);
  CHECK(rep.decisions.size() == 2);
  CHECK(rep.final_atoms.count(parse_atom("(open Virgen_plaza)")) == 1);
}

TEST_CASE("a failure stops the run unless only reporting")
{
  const auto & d = day();
  const auto s = execution::parse_scenario(
    R"j({"events": [{"time": 725, "retract": ["(open Cathedral)"]}]})j");
  const auto stopped = execution::run(d.task, d.plan, s);
  CHECK(stopped.stopped);
  REQUIRE(stopped.failures.size() == 1);
  CHECK(stopped.count("visit") == 1);
  CHECK(stopped.end_time == 725);
  CHECK_FALSE(stopped.goals_satisfied);

  const auto reported = execution::run(d.task, d.plan, s, {}, {true});
  CHECK_FALSE(reported.stopped);
  CHECK(reported.failures.size() >= 1);
  CHECK(reported.executed.size() == d.plan.steps.size());
}

TEST_CASE("swaps adopt the new plan")
{
  const auto & d = day();
  const auto s = execution::parse_scenario(
    R"j({"events": [{"time": 650, "assert": ["(open Virgen_plaza)"]}]})j");
  const auto hook = [&](const execution::Observation & obs) {
      // Drop the cathedral and replan from here.
      execution::Swap sw;
      sw.task = *obs.task;
      sw.task.problem.init = *obs.atoms;
      sw.task.problem.fluents = *obs.fluents;
      sw.task.problem.horizon.start = obs.now;
      std::erase_if(
        sw.task.problem.tils, [&](const task::TimedLiteral & l) {return l.time <= obs.now;});
      std::erase(sw.task.problem.goals, parse_atom("(visited tourist Cathedral)"));
      const auto r = planner::solve(sw.task, {});
      REQUIRE(r.status == planner::SolveStatus::Solved);
      sw.plan = r.plan;
      return execution::HookOutcome{sw, nlohmann::json{{"note", "skip cathedral"}}};
    };
  const auto rep = execution::run(d.task, d.plan, s, hook);
  CHECK(rep.plan_ids == std::vector<std::string>{"PLAN1", "PLAN2"});
  CHECK(rep.count("visit") == 4);
  CHECK(rep.goals_satisfied);
  CHECK(rep.final_atoms.count(parse_atom("(visited tourist Cathedral)")) == 0);
}

TEST_CASE("execution logs are deterministic")
{
  const auto & d = day();
  const auto s = execution::parse_scenario(
    R"j({"events": [{"time": 650, "assert": ["(open Virgen_plaza)"]},
                   {"time": 700, "retract": ["(free_table La_Pepica)"]}]})j");
  const auto hook = [](const execution::Observation &) {return execution::HookOutcome{};};
  const auto a = execution::run(d.task, d.plan, s, hook).log_text();
  const auto b = execution::run(d.task, d.plan, s, hook).log_text();
  CHECK(a == b);
  CHECK(a.find("elapsed") == std::string::npos);
}
