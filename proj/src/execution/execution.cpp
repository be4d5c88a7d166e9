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

#include "opportune/execution/execution.hpp"

#include <algorithm>
#include <deque>
#include <sstream>
#include <tuple>

#include "opportune/planner/planner.hpp"
#include "opportune/task/eval.hpp"
#include "opportune/task/pddl.hpp"

namespace opportune::execution
{

using nlohmann::json;
using task::Atom;
using task::AtomSet;
using task::Minutes;
using task::TimeSpec;

const char * kind_str(EventKind kind)
{
  switch (kind) {
    case EventKind::TimedLiteral: return "timed-literal";
    case EventKind::Exogenous: return "exogenous";
    case EventKind::ActionEnd: return "action-end";
    case EventKind::ActionStart: return "action-start";
    case EventKind::GoalCheck: return "goal-check";
  }
  return "?";
}

const char * tag_str(Tag tag)
{
  switch (tag) {
    case Tag::Confirmation: return "Confirmation";
    case Tag::Failure: return "Failure";
    case Tag::OpportunityKnownObject: return "OpportunityKnownObject";
    case Tag::OpportunityNewObject: return "OpportunityNewObject";
  }
  return "?";
}

bool event_before(const TimedEvent & a, const TimedEvent & b)
{
  return std::tuple(a.time, static_cast<int>(a.kind), a.seq) <
         std::tuple(b.time, static_cast<int>(b.kind), b.seq);
}

Timeline build_timeline(const task::PlanningTask & t, const task::Plan & plan)
{
  const auto v = planner::validate(plan, t);
  if (!v.valid) {
    throw task::TaskError("plan does not validate: " + v.violation->what);
  }
  Timeline tl;
  std::size_t seq = 0;
  for (const auto & til : t.problem.tils) {
    TimedEvent e;
    e.time = til.time;
    e.kind = EventKind::TimedLiteral;
    e.literal = til.literal;
    e.seq = seq++;
    tl.events.push_back(e);
  }
  for (std::size_t i = 0; i < plan.steps.size(); ++i) {
    TimedEvent s;
    s.time = plan.steps[i].start;
    s.kind = EventKind::ActionStart;
    s.step = i;
    s.seq = seq++;
    tl.events.push_back(s);
    TimedEvent e = s;
    e.time = plan.steps[i].end();
    e.kind = EventKind::ActionEnd;
    e.seq = seq++;
    tl.events.push_back(e);
  }
  TimedEvent g;
  g.time = plan.end(t.problem.horizon.start);
  g.kind = EventKind::GoalCheck;
  g.seq = seq++;
  tl.events.push_back(g);
  std::sort(tl.events.begin(), tl.events.end(), event_before);
  return tl;
}

namespace
{

void apply_literal(const task::Literal & lit, AtomSet & atoms)
{
  if (lit.positive) {
    atoms.insert(lit.atom);
  } else {
    atoms.erase(lit.atom);
  }
}

std::vector<task::GroundAction> ground_steps(const task::PlanningTask & t, const task::Plan & plan)
{
  std::vector<task::GroundAction> out;
  for (const auto & s : plan.steps) {
    out.push_back(task::ground(t.domain, s.action, s.args));
  }
  return out;
}

/// First failing condition of `g` for the given timing, if any.
std::optional<std::string> violated(
  const task::GroundAction & g, TimeSpec when, const AtomSet & atoms,
  const task::FluentMap & fluents)
{
  for (const auto & l : g.conditions(when)) {
    if (!task::holds(l, atoms)) {
      return l.str();
    }
  }
  task::EvalContext ctx;
  ctx.fluents = &fluents;
  ctx.binding = &g.binding;
  for (const auto & c : g.comparisons(when)) {
    const auto l = task::evaluate(c.lhs, ctx);
    const auto r = task::evaluate(c.rhs, ctx);
    if (!l || !r || !task::compare(c.op, *l, *r)) {
      return "(" + c.op + " " + c.lhs.str() + " " + c.rhs.str() + ")";
    }
  }
  return std::nullopt;
}

json atom_list(const AtomSet & atoms)
{
  json out = json::array();
  for (const auto & a : atoms) {
    out.push_back(a.str());
  }
  return out;
}

json delta(const AtomSet & before, const AtomSet & after)
{
  const auto d = discrepancies(before, after);
  return json{{"add", atom_list(d.observed_not_expected)}, {"del", atom_list(d.expected_not_observed)}};
}

bool mentions_unknown(const Atom & a, const task::Problem & p)
{
  return std::any_of(
    a.args.begin(), a.args.end(), [&](const std::string & o) {return !p.type_of(o);});
}

std::vector<Atom> parse_atoms(const json & j, const std::string & where)
{
  if (!j.is_array()) {
    throw ScenarioError(where + " must be a list of atoms");
  }
  std::vector<Atom> out;
  for (const auto & a : j) {
    if (!a.is_string()) {
      throw ScenarioError(where + " must be a list of atoms");
    }
    try {
      out.push_back(task::parse_atom(a.get<std::string>()));
    } catch (const task::TaskError & e) {
      throw ScenarioError(where + ": " + e.what());
    }
  }
  return out;
}

}  // namespace

ReplayState replay(const task::PlanningTask & t, const task::Plan & plan, const Timeline & timeline)
{
  const auto ground = ground_steps(t, plan);
  ReplayState s{t.problem.init, t.problem.fluents};
  for (const auto & e : timeline.events) {
    switch (e.kind) {
      case EventKind::TimedLiteral:
        apply_literal(e.literal, s.atoms);
        break;
      case EventKind::ActionStart:
        task::apply_effects(
          ground[e.step], TimeSpec::AtStart, s.atoms, s.fluents,
          static_cast<double>(plan.steps[e.step].duration));
        break;
      case EventKind::ActionEnd:
        task::apply_effects(
          ground[e.step], TimeSpec::AtEnd, s.atoms, s.fluents,
          static_cast<double>(plan.steps[e.step].duration));
        break;
      default:
        break;
    }
  }
  return s;
}

DiscrepancySet discrepancies(const AtomSet & expected, const AtomSet & observed)
{
  DiscrepancySet d;
  std::set_difference(
    observed.begin(), observed.end(), expected.begin(), expected.end(),
    std::inserter(d.observed_not_expected, d.observed_not_expected.end()));
  std::set_difference(
    expected.begin(), expected.end(), observed.begin(), observed.end(),
    std::inserter(d.expected_not_observed, d.expected_not_observed.end()));
  return d;
}

std::set<std::string> goal_relevant_predicates(const task::PlanningTask & t)
{
  std::set<std::string> relevant;
  for (const auto & g : t.problem.goals) {
    relevant.insert(g.predicate);
  }
  bool grew = true;
  while (grew) {
    grew = false;
    for (const auto & a : t.domain.actions) {
      const bool contributes = std::any_of(
        a.effects.begin(), a.effects.end(), [&](const task::Effect & e) {
          const auto * lit = std::get_if<task::Literal>(&e.body);
          return lit != nullptr && lit->positive && relevant.count(lit->atom.predicate) > 0;
        });
      if (!contributes) {
        continue;
      }
      for (const auto & c : a.conditions) {
        const auto * lit = std::get_if<task::Literal>(&c.body);
        if (lit != nullptr && lit->positive && relevant.insert(lit->atom.predicate).second) {
          grew = true;
        }
      }
    }
  }
  return relevant;
}

Classification classify(
  const DiscrepancySet & ds, const task::PlanningTask & t, const task::Plan & plan, Minutes now)
{
  std::set<task::Literal> required;
  for (const auto & s : plan.steps) {
    if (s.end() < now) {
      continue;
    }
    const auto g = task::ground(t.domain, s.action, s.args);
    std::vector<TimeSpec> whens{TimeSpec::OverAll, TimeSpec::AtEnd};
    if (s.start >= now) {
      whens.push_back(TimeSpec::AtStart);
    }
    for (auto when : whens) {
      for (const auto & l : g.conditions(when)) {
        required.insert(l);
      }
    }
  }
  const auto relevant = goal_relevant_predicates(t);

  Classification out;
  for (const auto & a : ds.observed_not_expected) {
    Tag tag = Tag::Confirmation;
    if (mentions_unknown(a, t.problem)) {
      tag = Tag::OpportunityNewObject;
    } else if (required.count(task::Literal{a, false}) > 0) {
      tag = Tag::Failure;
    } else if (relevant.count(a.predicate) > 0) {
      tag = Tag::OpportunityKnownObject;
    }
    out.push_back({a, true, tag});
  }
  for (const auto & a : ds.expected_not_observed) {
    Tag tag = Tag::Confirmation;
    if (mentions_unknown(a, t.problem)) {
      tag = Tag::OpportunityNewObject;
    } else if (required.count(task::Literal{a, true}) > 0) {
      tag = Tag::Failure;
    }
    out.push_back({a, false, tag});
  }
  return out;
}

Scenario parse_scenario(const std::string & text)
{
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error & e) {
    throw ScenarioError(std::string("scenario is not valid JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("events") || !j["events"].is_array()) {
    throw ScenarioError("scenario must be an object with an \"events\" list");
  }
  for (const auto & [key, value] : j.items()) {
    if (key != "events" && key != "description") {
      throw ScenarioError("unknown scenario field '" + key + "'");
    }
  }
  Scenario s;
  for (std::size_t i = 0; i < j["events"].size(); ++i) {
    const auto & ev = j["events"][i];
    const std::string where = "event " + std::to_string(i);
    if (!ev.is_object() || !ev.contains("time") || !ev["time"].is_number_integer()) {
      throw ScenarioError(where + " needs an integer \"time\"");
    }
    ScenarioEvent e;
    e.time = ev["time"].get<Minutes>();
    for (const auto & [key, value] : ev.items()) {
      if (key == "time") {
        continue;
      } else if (key == "assert") {
        e.assert_atoms = parse_atoms(value, where + " assert");
      } else if (key == "retract") {
        e.retract_atoms = parse_atoms(value, where + " retract");
      } else if (key == "facts") {
        try {
          e.facts = integration::parse_facts_map(value);
        } catch (const integration::ProviderError & err) {
          throw ScenarioError(where + " facts: " + err.what());
        }
      } else {
        throw ScenarioError(where + ": unknown field '" + key + "'");
      }
    }
    if (!s.events.empty() && e.time < s.events.back().time) {
      throw ScenarioError(where + " is earlier than the event before it");
    }
    s.events.push_back(std::move(e));
  }
  return s;
}

Scenario load_scenario(const std::filesystem::path & path)
{
  std::string text;
  try {
    text = task::read_file(path);
  } catch (const task::TaskError & e) {
    throw ScenarioError(e.what());
  }
  return parse_scenario(text);
}

std::size_t ExecutionReport::count(const std::string & action) const
{
  return static_cast<std::size_t>(std::count_if(
           executed.begin(), executed.end(),
           [&](const task::PlanStep & s) {return s.action == action;}));
}

std::string ExecutionReport::log_text() const
{
  std::string out;
  for (const auto & line : log) {
    out += line;
    out += '\n';
  }
  return out;
}

namespace
{

struct Pending
{
  std::size_t event;
  DiscrepancySet ds;
  Classification cls;
};

class Runner
{
public:
  Runner(
    const task::PlanningTask & t, const task::Plan & plan, const Scenario & scenario,
    const OpportunityHook & hook, const RunConfig & config)
  : scenario_(scenario), hook_(hook), config_(config)
  {
    adopt(t, plan);
    atoms_ = t.problem.init;
    fluents_ = t.problem.fluents;
  }

  ExecutionReport run()
  {
    while (!report_.stopped) {
      const bool have_tl = timeline_.cursor < timeline_.events.size();
      const bool have_sc = next_scenario_ < scenario_.events.size();
      if (!have_tl && !have_sc) {
        break;
      }
      bool take_scenario = have_sc;
      if (have_tl && have_sc) {
        const auto & e = timeline_.events[timeline_.cursor];
        const Minutes st = scenario_.events[next_scenario_].time;
        take_scenario = st < e.time || (st == e.time && e.kind != EventKind::TimedLiteral);
      }
      if (take_scenario) {
        exogenous(next_scenario_++);
      } else {
        const auto e = timeline_.events[timeline_.cursor++];
        planned(e);
      }
    }
    report_.final_atoms = atoms_;
    report_.final_fluents = fluents_;
    report_.end_time = goal_time_.value_or(now_);
    report_.final_task = task_;
    return std::move(report_);
  }

private:
  void adopt(const task::PlanningTask & t, const task::Plan & plan)
  {
    task_ = t;
    plan_ = plan;
    ground_ = ground_steps(task_, plan_);
    timeline_ = build_timeline(task_, plan_);
    plan_id_ = "PLAN" + std::to_string(report_.plan_ids.size() + 1);
    report_.plan_ids.push_back(plan_id_);
    report_.plans.push_back(plan_);
    report_.adopted_at.push_back(t.problem.horizon.start);
    running_.reset();
  }

  json record(Minutes time, EventKind kind)
  {
    now_ = std::max(now_, time);
    return json{{"seq", seq_++}, {"time", time}, {"kind", kind_str(kind)}, {"plan", plan_id_}};
  }

  void emit(const json & j)
  {
    report_.log.push_back(j.dump());
  }

  void fail(json & rec, const std::string & what)
  {
    rec["failure"] = what;
    report_.failures.push_back(json{{"time", now_}, {"plan", plan_id_}, {"what", what}});
    if (!config_.report_only) {
      report_.stopped = true;
      rec["stopped"] = true;
    }
  }

  void planned(const TimedEvent & e)
  {
    auto rec = record(e.time, e.kind);
    const AtomSet before = atoms_;
    switch (e.kind) {
      case EventKind::TimedLiteral:
        rec["event"] = e.literal.str();
        apply_literal(e.literal, atoms_);
        if (running_) {
          if (auto bad = violated(ground_[*running_], TimeSpec::OverAll, atoms_, fluents_)) {
            fail(rec, plan_.steps[*running_].action_str() + ": invariant " + *bad + " violated");
          }
        }
        break;
      case EventKind::ActionStart: {
          const auto & step = plan_.steps[e.step];
          rec["event"] = step.action_str();
          for (auto when : {TimeSpec::AtStart, TimeSpec::OverAll}) {
            if (auto bad = violated(ground_[e.step], when, atoms_, fluents_)) {
              fail(rec, step.action_str() + ": condition " + *bad + " does not hold at start");
              break;
            }
          }
          task::apply_effects(
            ground_[e.step], TimeSpec::AtStart, atoms_, fluents_, static_cast<double>(step.duration));
          running_ = e.step;
          break;
        }
      case EventKind::ActionEnd: {
          const auto & step = plan_.steps[e.step];
          rec["event"] = step.action_str();
          for (auto when : {TimeSpec::OverAll, TimeSpec::AtEnd}) {
            if (auto bad = violated(ground_[e.step], when, atoms_, fluents_)) {
              fail(rec, step.action_str() + ": condition " + *bad + " does not hold at end");
              break;
            }
          }
          task::apply_effects(
            ground_[e.step], TimeSpec::AtEnd, atoms_, fluents_, static_cast<double>(step.duration));
          running_.reset();
          report_.executed.push_back(step);
          break;
        }
      case EventKind::GoalCheck: {
          json unmet = json::array();
          for (const auto & g : task_.problem.goals) {
            if (atoms_.count(g) == 0) {
              unmet.push_back(g.str());
            }
          }
          report_.goals_satisfied = unmet.empty();
          goal_time_ = e.time;
          rec["event"] = "goals";
          rec["goals_satisfied"] = unmet.empty();
          rec["unmet"] = unmet;
          break;
        }
      case EventKind::Exogenous:
        break;
    }
    const auto d = delta(before, atoms_);
    rec["expected"] = d;
    rec["observed"] = d;
    emit(rec);
    if (e.kind == EventKind::ActionEnd && !report_.stopped) {
      drain();
    }
  }

  void exogenous(std::size_t index)
  {
    const auto & ev = scenario_.events[index];
    auto rec = record(ev.time, EventKind::Exogenous);
    json src = json::object();
    src["assert"] = json::array();
    src["retract"] = json::array();
    for (const auto & a : ev.assert_atoms) {
      src["assert"].push_back(a.str());
    }
    for (const auto & a : ev.retract_atoms) {
      src["retract"].push_back(a.str());
    }
    rec["event"] = src;
    AtomSet observed = atoms_;
    for (const auto & a : ev.retract_atoms) {
      observed.erase(a);
    }
    for (const auto & a : ev.assert_atoms) {
      observed.insert(a);
    }
    auto ds = discrepancies(atoms_, observed);
    auto cls = classify(ds, task_, plan_, ev.time);
    rec["expected"] = json{{"add", json::array()}, {"del", json::array()}};
    rec["observed"] = delta(atoms_, observed);
    rec["discrepancy"] = json{
      {"observed_not_expected", atom_list(ds.observed_not_expected)},
      {"expected_not_observed", atom_list(ds.expected_not_observed)}};
    json tags = json::array();
    bool opportunity = false;
    for (const auto & c : cls) {
      tags.push_back(json{{"atom", c.atom.str()}, {"change", c.added ? "added" : "removed"},
          {"tag", tag_str(c.tag)}});
      opportunity = opportunity || c.tag == Tag::OpportunityKnownObject ||
        c.tag == Tag::OpportunityNewObject;
    }
    rec["classification"] = tags;
    atoms_ = std::move(observed);
    if (running_) {
      if (auto bad = violated(ground_[*running_], TimeSpec::OverAll, atoms_, fluents_)) {
        fail(rec, plan_.steps[*running_].action_str() + ": invariant " + *bad + " violated");
      }
    }
    if (opportunity && hook_) {
      pending_.push_back({index, std::move(ds), std::move(cls)});
      rec["deferred"] = running_.has_value();
    }
    emit(rec);
    if (!running_) {
      drain();
    }
  }

  void drain()
  {
    while (!pending_.empty() && !report_.stopped) {
      const auto p = std::move(pending_.front());
      pending_.pop_front();
      Observation obs;
      obs.now = now_;
      obs.task = &task_;
      obs.plan = &plan_;
      obs.plan_id = plan_id_;
      obs.atoms = &atoms_;
      obs.fluents = &fluents_;
      obs.event = &scenario_.events[p.event];
      obs.discrepancy = &p.ds;
      obs.classification = &p.cls;
      auto outcome = hook_(obs);
      auto rec = record(now_, EventKind::Exogenous);
      rec["kind"] = "opportunity";
      rec["decision"] = outcome.record;
      rec["swapped"] = outcome.swap.has_value();
      const AtomSet before = atoms_;
      if (outcome.swap) {
        atoms_ = outcome.swap->task.problem.init;
        fluents_ = outcome.swap->task.problem.fluents;
        adopt(outcome.swap->task, outcome.swap->plan);
        rec["new_plan"] = plan_id_;
      }
      const auto d = delta(before, atoms_);
      rec["expected"] = d;
      rec["observed"] = d;
      report_.decisions.push_back(outcome.record);
      emit(rec);
    }
  }

  const Scenario & scenario_;
  const OpportunityHook & hook_;
  RunConfig config_;
  task::PlanningTask task_;
  task::Plan plan_;
  std::vector<task::GroundAction> ground_;
  Timeline timeline_;
  std::string plan_id_;
  std::optional<std::size_t> running_;
  std::deque<Pending> pending_;
  std::size_t next_scenario_ = 0;
  AtomSet atoms_;
  task::FluentMap fluents_;
  Minutes now_ = 0;
  std::optional<Minutes> goal_time_;
  std::size_t seq_ = 0;
  ExecutionReport report_;
};

}  // namespace

ExecutionReport run(
  const task::PlanningTask & t, const task::Plan & plan, const Scenario & scenario,
  const OpportunityHook & hook, const RunConfig & config)
{
  Runner runner(t, plan, scenario, hook, config);
  return runner.run();
}

}  // namespace opportune::execution
