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

#include "opportune/integration/integration.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <future>
#include <set>
#include <stdexcept>

#include "opportune/ontology/tokenize.hpp"

namespace opportune::integration
{

using nlohmann::json;
using task::Atom;
using task::Minutes;
using task::PlanningTask;

namespace
{

double ms_since(std::chrono::steady_clock::time_point t0)
{
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

bool accepts(const task::PlanningTask & t, const std::string & type, const task::TypeExpr & expr)
{
  return task::type_compatible(type, expr, t.domain.types);
}

void collect_functions(const task::NumExpr & e, std::set<std::string> & out)
{
  if (e.kind == task::NumExpr::Kind::Fluent) {
    out.insert(e.fluent.function);
  }
  for (const auto & op : e.operands) {
    collect_functions(op, out);
  }
}

void sort_tils(std::vector<task::TimedLiteral> & tils)
{
  std::stable_sort(
    tils.begin(), tils.end(),
    [](const task::TimedLiteral & a, const task::TimedLiteral & b) {return a.time < b.time;});
}

}  // namespace

NoveltyReport novelty(const Atom & proposition, const task::Problem & problem, Minutes at)
{
  NoveltyReport r{proposition, {}, at};
  for (const auto & arg : proposition.args) {
    if (!problem.type_of(arg) &&
      std::find(r.unknown_objects.begin(), r.unknown_objects.end(), arg) == r.unknown_objects.end())
    {
      r.unknown_objects.push_back(arg);
    }
  }
  return r;
}

std::optional<std::string> find_individual(const ontology::Ontology & onto, const std::string & object)
{
  if (onto.individuals().count(object) > 0) {
    return object;
  }
  const auto key = ontology::normalize_name(object);
  for (const auto & [id, c] : onto.individuals()) {
    if (ontology::normalize_name(id) == key) {
      return id;
    }
  }
  return std::nullopt;
}

ontology::Repository locate_object(const std::string & object, const ontology::Repository & filtered)
{
  ontology::Repository out;
  for (const auto & m : filtered.members) {
    if (find_individual(m, object)) {
      out.members.push_back(m);
    }
  }
  return out;
}

const ontology::Ontology & select_ontology(const ontology::Repository & located, bool squared)
{
  if (located.members.empty()) {
    throw std::invalid_argument("no ontology to select from");
  }
  const ontology::Ontology * best = nullptr;
  double best_sv = 0.0;
  for (const auto & m : located.members) {
    const double sv = ontology::semantic_variance(m, squared);
    if (best == nullptr || sv > best_sv || (sv == best_sv && m.id() < best->id())) {
      best = &m;
      best_sv = sv;
    }
  }
  return *best;
}

const char * kind_str(IntegrationResult::Kind kind)
{
  switch (kind) {
    case IntegrationResult::Kind::ExistingType: return "existing_type";
    case IntegrationResult::Kind::Equivalent: return "equivalent";
    case IntegrationResult::Kind::NewType: return "new_type";
    case IntegrationResult::Kind::Unplaced: return "unplaced";
  }
  return "?";
}

IntegrationResult integrate_object(
  PlanningTask & t, const std::string & object, ontology::Ontology & n_phi,
  const ontology::Ontology & n_o, const matching::MatchConfig & config)
{
  const auto individual = find_individual(n_o, object);
  if (!individual) {
    throw std::invalid_argument(object + " is not an individual of " + n_o.id());
  }
  IntegrationResult r;
  r.object = object;
  r.source_type = *n_o.concept_of(*individual);

  if (t.domain.types.contains(r.source_type)) {
    r.kind = IntegrationResult::Kind::ExistingType;
    r.type = r.source_type;
    r.reason = r.source_type + " is already a type of the task";
  } else {
    const auto pos = matching::position_type(n_phi, n_o, r.source_type, config);
    r.positioning = pos;
    r.reason = pos.outcome.reason;
    switch (pos.outcome.kind) {
      case matching::PositionOutcome::Kind::EquivalentTo:
        r.kind = IntegrationResult::Kind::Equivalent;
        r.type = pos.outcome.concept_id;
        break;
      case matching::PositionOutcome::Kind::NewChildOf:
        r.kind = IntegrationResult::Kind::NewType;
        r.type = r.source_type;
        r.parent = pos.outcome.concept_id;
        break;
      case matching::PositionOutcome::Kind::Unplaced:
        r.kind = IntegrationResult::Kind::Unplaced;
        return r;
    }
  }

  if (r.kind == IntegrationResult::Kind::NewType) {
    t.domain.add_type(r.type, r.parent);
    auto & c = n_phi.add_concept(r.type, r.parent);
    const auto & src = n_o.concept_at(r.source_type);
    c.labels = src.labels;
    c.annotations = src.annotations;
  }
  t.problem.add_object(object, r.type, t.domain);
  n_phi.add_individual(object, r.type);
  return r;
}

Instantiation instantiate_variables(
  PlanningTask & t, const std::string & object, const DataProvider & provider,
  const Bindings & bindings)
{
  Instantiation out;
  const auto type = t.problem.type_of(object);
  if (!type) {
    throw std::invalid_argument(object + " is not an object of the task");
  }
  const auto & d = t.domain;

  std::set<std::string> dynamic;
  for (const auto & a : d.actions) {
    for (const auto & e : a.effects) {
      if (const auto * lit = std::get_if<task::Literal>(&e.body)) {
        dynamic.insert(lit->atom.predicate);
      }
    }
  }
  for (const auto & til : t.problem.tils) {
    dynamic.insert(til.literal.atom.predicate);
  }

  // Which facts does the task need?
  const auto * window = d.find_predicate(bindings.window_predicate);
  bool needs_window = false;
  if (window != nullptr) {
    for (const auto & p : window->params) {
      needs_window = needs_window || accepts(t, *type, p.types);
    }
  }
  const auto * movement = d.find_function(bindings.movement_function);
  std::vector<std::size_t> move_positions;
  if (movement != nullptr && movement->params.size() == 2) {
    for (std::size_t i = 0; i < 2; ++i) {
      if (accepts(t, *type, movement->params[i].types)) {
        move_positions.push_back(i);
      }
    }
  }
  std::set<std::string> duration_functions;
  for (const auto & a : d.actions) {
    collect_functions(a.duration, duration_functions);
  }
  std::vector<std::string> stay_functions;
  for (const auto & f : d.functions) {
    if (f.params.size() == 1 && f.name != bindings.movement_function &&
      duration_functions.count(f.name) > 0 && accepts(t, *type, f.params[0].types))
    {
      stay_functions.push_back(f.name);
    }
  }
  // Static facts about the object that some action checks.
  std::set<std::pair<std::string, std::size_t>> statics;
  for (const auto & a : d.actions) {
    for (const auto & p : a.params) {
      if (!accepts(t, *type, p.types)) {
        continue;
      }
      for (const auto & c : a.conditions) {
        const auto * lit = std::get_if<task::Literal>(&c.body);
        if (lit == nullptr || !lit->positive || dynamic.count(lit->atom.predicate) > 0 ||
          lit->atom.predicate == bindings.window_predicate)
        {
          continue;
        }
        for (std::size_t k = 0; k < lit->atom.args.size(); ++k) {
          if (lit->atom.args[k] == p.name) {
            statics.emplace(lit->atom.predicate, k);
          }
        }
      }
    }
  }
  if (!needs_window && move_positions.empty() && stay_functions.empty() && statics.empty()) {
    return out;
  }

  std::optional<ObjectFacts> facts;
  try {
    facts = provider.lookup(object);
  } catch (const ProviderError & e) {
    out.missing.push_back(std::string("provider failed: ") + e.what());
    return out;
  }
  if (!facts) {
    out.missing.push_back("no provider record for " + object);
    return out;
  }

  const Minutes start = t.problem.horizon.start;
  const Minutes end = t.problem.horizon.end;
  if (needs_window) {
    if (facts->open.empty()) {
      out.missing.push_back("opening hours of " + object);
    }
    const Atom open_atom{bindings.window_predicate, {object}};
    for (const auto & [s, e] : facts->open) {
      if (e <= start) {
        continue;
      }
      if (s <= start) {
        out.atoms.push_back(open_atom);
      } else if (s <= end) {
        out.tils.push_back({s, {open_atom, true}});
      }
      if (e <= end) {
        out.tils.push_back({e, {open_atom, false}});
      }
    }
  }

  if (!move_positions.empty()) {
    for (const auto & [other, other_type] : t.problem.objects) {
      if (other == object) {
        continue;
      }
      for (std::size_t pos : move_positions) {
        const auto & other_param = movement->params[1 - pos];
        if (!accepts(t, other_type, other_param.types)) {
          continue;
        }
        std::optional<ObjectFacts> of;
        try {
          of = provider.lookup(other);
        } catch (const ProviderError & e) {
          out.missing.push_back(std::string("provider failed: ") + e.what());
          continue;
        }
        if (!of) {
          of = ObjectFacts{};
          of->id = other;
        }
        const auto & from = pos == 0 ? *facts : *of;
        const auto & to = pos == 0 ? *of : *facts;
        try {
          const auto m = walk_minutes(from, to, bindings.walking_speed_kmh);
          out.fluents[{bindings.movement_function, {from.id, to.id}}] = static_cast<double>(m);
        } catch (const ProviderError & e) {
          out.missing.push_back(e.what());
        }
      }
    }
  }

  for (const auto & f : stay_functions) {
    if (!facts->visit_duration) {
      out.missing.push_back("visit duration of " + object);
      break;
    }
    out.fluents[{f, {object}}] = static_cast<double>(*facts->visit_duration);
  }

  for (const auto & a : facts->extra) {
    try {
      task::check_atom(a, d, &t.problem, nullptr);
      out.atoms.push_back(a);
    } catch (const task::TaskError & e) {
      out.missing.push_back("unusable extra fact " + a.str() + ": " + e.what());
    }
  }
  for (const auto & [pred, k] : statics) {
    const bool found = std::any_of(
      facts->extra.begin(), facts->extra.end(), [&](const Atom & a) {
        return a.predicate == pred && k < a.args.size() && a.args[k] == object;
      });
    if (!found) {
      out.missing.push_back("fact (" + pred + " ...) about " + object);
    }
  }

  std::sort(out.missing.begin(), out.missing.end());
  out.missing.erase(std::unique(out.missing.begin(), out.missing.end()), out.missing.end());
  if (!out.complete()) {
    return out;
  }
  for (const auto & a : out.atoms) {
    t.problem.init.insert(a);
  }
  for (const auto & [f, v] : out.fluents) {
    t.problem.fluents[f] = v;
  }
  for (const auto & til : out.tils) {
    t.problem.tils.push_back(til);
  }
  sort_tils(t.problem.tils);
  return out;
}

std::vector<CandidateGoal> formulate_goals(
  const PlanningTask & t, const std::string & object, const std::string & type)
{
  const auto & types = t.domain.types;
  const auto parent = types.parent(type);
  auto related = [&](const std::string & u) -> std::optional<std::string> {
      if (u == type) {
        return "same type as";
      }
      const auto pu = types.parent(u);
      if (parent && pu && *parent == *pu) {
        return "sibling of";
      }
      return std::nullopt;
    };

  std::map<std::string, std::vector<const Atom *>> by_predicate;
  for (const auto & g : t.problem.goals) {
    by_predicate[g.predicate].push_back(&g);
  }
  const std::set<Atom> existing(t.problem.goals.begin(), t.problem.goals.end());
  std::vector<CandidateGoal> out;
  std::set<Atom> seen;
  for (const auto & [pred, goals] : by_predicate) {
    const auto * schema = t.domain.find_predicate(pred);
    if (schema == nullptr) {
      continue;
    }
    const std::size_t n = schema->params.size();
    std::vector<std::set<std::string>> occupants(n);
    for (const auto * g : goals) {
      for (std::size_t k = 0; k < n && k < g->args.size(); ++k) {
        occupants[k].insert(g->args[k]);
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (!accepts(t, type, schema->params[i].types)) {
        continue;
      }
      std::string provenance;
      for (const auto * g : goals) {
        const auto u = t.problem.type_of(g->args[i]);
        if (!u) {
          continue;
        }
        const auto how = related(*u);
        if (how && (provenance.empty() || *u == type)) {
          provenance = *how + " " + *u + " in " + g->str();
        }
        if (*u == type) {
          break;
        }
      }
      if (provenance.empty()) {
        continue;
      }
      std::vector<std::vector<std::string>> slots(n);
      bool empty_slot = false;
      for (std::size_t k = 0; k < n; ++k) {
        if (k == i) {
          slots[k] = {object};
        } else {
          slots[k].assign(occupants[k].begin(), occupants[k].end());
        }
        empty_slot = empty_slot || slots[k].empty();
      }
      if (empty_slot) {
        continue;
      }
      std::vector<std::size_t> idx(n, 0);
      bool done = false;
      while (!done) {
        Atom a{pred, {}};
        for (std::size_t k = 0; k < n; ++k) {
          a.args.push_back(slots[k][idx[k]]);
        }
        bool ok = existing.count(a) == 0 && seen.count(a) == 0;
        if (ok) {
          try {
            task::check_atom(a, t.domain, &t.problem, nullptr);
          } catch (const task::TaskError &) {
            ok = false;
          }
        }
        if (ok) {
          seen.insert(a);
          out.push_back({a, provenance});
        }
        done = true;
        for (std::size_t k = n; k-- > 0; ) {
          if (++idx[k] < slots[k].size()) {
            done = false;
            break;
          }
          idx[k] = 0;
        }
      }
    }
  }
  return out;
}

PlanningTask snapshot(
  const PlanningTask & t, const task::AtomSet & atoms, const task::FluentMap & fluents, Minutes now)
{
  PlanningTask s;
  s.domain = t.domain;
  s.problem.name = t.problem.name;
  s.problem.domain_name = t.problem.domain_name;
  s.problem.objects = t.problem.objects;
  s.problem.init = atoms;
  s.problem.fluents = fluents;
  for (const auto & til : t.problem.tils) {
    if (til.time > now) {
      s.problem.tils.push_back(til);
    }
  }
  s.problem.goals = t.problem.goals;
  s.problem.metric = t.problem.metric;
  s.problem.horizon = {now, t.problem.horizon.end};
  return s;
}

Evaluation evaluate_opportunities(
  const PlanningTask & snap, const std::vector<CandidateGoal> & candidates,
  planner::Planner & planner, const planner::PlannerConfig & config)
{
  Evaluation ev;
  std::vector<std::future<OpportunityDecision>> futures;
  for (const auto & c : candidates) {
    futures.push_back(
      std::async(
        std::launch::async, [&snap, &planner, &config, c]() {
          const auto t0 = std::chrono::steady_clock::now();
          OpportunityDecision d;
          d.candidate = c;
          d.variant = snap;
          d.variant.problem.goals.push_back(c.atom);
          const auto r = planner.solve(d.variant, config);
          switch (r.status) {
            case planner::SolveStatus::Solved:
              d.accepted = true;
              d.plan = r.plan;
              d.metric = r.metric;
              d.reason = "plan achieves every goal and the candidate";
              break;
            case planner::SolveStatus::Unsolvable:
              d.reason = "unsolvable: " + r.message;
              break;
            case planner::SolveStatus::BudgetExhausted:
              d.reason = "budget: " + r.message;
              break;
          }
          d.elapsed_ms = ms_since(t0);
          return d;
        }));
  }
  for (auto & f : futures) {
    ev.decisions.push_back(f.get());
  }
  const auto metric = snap.problem.effective_metric();
  for (std::size_t i = 0; i < ev.decisions.size(); ++i) {
    const auto & d = ev.decisions[i];
    if (!d.accepted) {
      continue;
    }
    if (!ev.winner) {
      ev.winner = i;
      continue;
    }
    const auto & w = ev.decisions[*ev.winner];
    if (planner::better(d.metric, w.metric, metric) ||
      (d.metric == w.metric && d.candidate.atom < w.candidate.atom))
    {
      ev.winner = i;
    }
  }
  return ev;
}

// ---------------------------------------------------------------------------
// Pipeline

Pipeline::Pipeline(
  ontology::Repository repository, enrichment::KnowledgeStore store, const DataProvider * provider,
  PipelineConfig config, planner::Planner * planner)
: store_(std::move(store)), provider_(provider), config_(config), planner_(planner)
{
  for (auto & m : repository.members) {
    repository_.members.push_back(enrichment::annotate_ontology(m, store_));
  }
  if (planner_ == nullptr) {
    planner_ = &builtin_;
  }
}

namespace
{

/// Idles the snapshot forward to `to`, applying the timed literals passed.
PlanningTask advance(const PlanningTask & s, Minutes to)
{
  PlanningTask out = s;
  out.problem.tils.clear();
  for (const auto & til : s.problem.tils) {
    if (til.time <= to) {
      if (til.literal.positive) {
        out.problem.init.insert(til.literal.atom);
      } else {
        out.problem.init.erase(til.literal.atom);
      }
    } else {
      out.problem.tils.push_back(til);
    }
  }
  out.problem.horizon.start = to;
  return out;
}

}  // namespace

PipelineResult Pipeline::process(
  const PlanningTask & t, const task::AtomSet & atoms, const task::FluentMap & fluents, Minutes now,
  const execution::Classification & classification,
  const std::map<std::string, ObjectFacts> & inline_facts) const
{
  const auto t0 = std::chrono::steady_clock::now();
  PipelineResult result;

  std::vector<std::string> novel;
  std::vector<std::string> known;
  auto push = [](std::vector<std::string> & v, const std::string & o) {
      if (std::find(v.begin(), v.end(), o) == v.end()) {
        v.push_back(o);
      }
    };
  for (const auto & c : classification) {
    if (!c.added) {
      continue;
    }
    for (const auto & arg : c.atom.args) {
      const bool is_known = t.problem.type_of(arg).has_value();
      if (c.tag == execution::Tag::OpportunityNewObject && !is_known) {
        push(novel, arg);
      } else if (c.tag == execution::Tag::OpportunityKnownObject && is_known) {
        push(known, arg);
      }
    }
  }

  const auto base = snapshot(t, atoms, fluents, now);
  const OverlayProvider provider(provider_, inline_facts);
  std::optional<ontology::Ontology> n_phi;
  std::vector<PlanningTask> scratch;

  auto evaluate = [&](ObjectTrace & trace, const PlanningTask & working) {
      auto ev = evaluate_opportunities(working, trace.candidates, *planner_, config_.planner);
      for (auto & d : ev.decisions) {
        result.decisions.push_back(std::move(d));
      }
      if (!ev.winner) {
        trace.stop = "no candidate goal can be achieved";
      }
    };

  for (const auto & o : novel) {
    ObjectTrace trace;
    trace.object = o;
    trace.route = "new";
    if (!n_phi) {
      n_phi = enrichment::annotate_ontology(ontology::from_task(base, "n_phi"), store_);
    }
    trace.ranking = matching::rank_similar(*n_phi, repository_, config_.match.filter_threshold);
    const auto filtered = matching::filter_similar(*n_phi, repository_, config_.match.filter_threshold);
    const auto located = locate_object(o, filtered);
    for (const auto & m : located.members) {
      trace.located.push_back(m.id());
      trace.variance[m.id()] = ontology::semantic_variance(m, config_.squared_sv);
    }
    if (located.members.empty()) {
      trace.stop = "unknown object: " + o + " is in no similar ontology";
      result.traces.push_back(std::move(trace));
      continue;
    }
    const auto & n_o = select_ontology(located, config_.squared_sv);
    trace.selected = n_o.id();

    PlanningTask working = base;
    ontology::Ontology n_phi_w = *n_phi;
    trace.integration = integrate_object(working, o, n_phi_w, n_o, config_.match);
    if (trace.integration->kind == IntegrationResult::Kind::Unplaced) {
      trace.stop = "type " + trace.integration->source_type + " could not be placed";
      result.traces.push_back(std::move(trace));
      continue;
    }
    const auto inst = instantiate_variables(working, o, provider, config_.bindings);
    trace.missing = inst.missing;
    if (!inst.complete()) {
      trace.stop = "insufficient data";
      result.traces.push_back(std::move(trace));
      continue;
    }
    trace.candidates = formulate_goals(working, o, trace.integration->type);
    if (trace.candidates.empty()) {
      trace.stop = "no candidate goals";
      result.traces.push_back(std::move(trace));
      continue;
    }
    evaluate(trace, working);
    result.traces.push_back(std::move(trace));
  }

  for (const auto & o : known) {
    ObjectTrace trace;
    trace.object = o;
    trace.route = "known";
    trace.candidates = formulate_goals(base, o, *base.problem.type_of(o));
    if (trace.candidates.empty()) {
      trace.stop = "no candidate goals";
    } else {
      evaluate(trace, base);
    }
    result.traces.push_back(std::move(trace));
  }

  const auto metric = base.problem.effective_metric();
  for (std::size_t i = 0; i < result.decisions.size(); ++i) {
    const auto & d = result.decisions[i];
    if (!d.accepted) {
      continue;
    }
    if (!result.winner) {
      result.winner = i;
      continue;
    }
    const auto & w = result.decisions[*result.winner];
    if (planner::better(d.metric, w.metric, metric) ||
      (d.metric == w.metric && d.candidate.atom < w.candidate.atom))
    {
      result.winner = i;
    }
  }

  if (result.winner && config_.charge_planning_time) {
    const auto shift = static_cast<Minutes>(std::ceil(ms_since(t0) / 60000.0));
    if (shift > 0) {
      auto & w = result.decisions[*result.winner];
      w.variant = advance(w.variant, now + shift);
      const auto r = planner_->solve(w.variant, config_.planner);
      if (r.status == planner::SolveStatus::Solved) {
        w.plan = r.plan;
        w.metric = r.metric;
      } else {
        w.accepted = false;
        w.plan.reset();
        w.reason = "no plan once planning time is charged";
        result.winner.reset();
      }
    }
  }

  if (result.winner) {
    const auto & w = result.decisions[*result.winner];
    result.swap = execution::Swap{w.variant, *w.plan};
  }
  result.elapsed_ms = ms_since(t0);
  return result;
}

json PipelineResult::report(bool timings) const
{
  json objects = json::array();
  for (const auto & tr : traces) {
    json o{{"object", tr.object}, {"route", tr.route}};
    if (tr.route == "new") {
      json ranking = json::array();
      for (const auto & r : tr.ranking) {
        ranking.push_back(json{{"id", r.id}, {"score", r.score}, {"selected", r.selected}});
      }
      o["ranking"] = ranking;
      o["located"] = tr.located;
      o["variance"] = tr.variance;
      o["selected"] = tr.selected;
    }
    if (tr.integration) {
      const auto & in = *tr.integration;
      json ij{{"kind", kind_str(in.kind)}, {"source_type", in.source_type}, {"type", in.type},
        {"reason", in.reason}};
      if (!in.parent.empty()) {
        ij["parent"] = in.parent;
      }
      if (in.positioning) {
        ij["rule"] = in.positioning->outcome.rule;
      }
      o["integration"] = ij;
    }
    o["missing"] = tr.missing;
    json cands = json::array();
    for (const auto & c : tr.candidates) {
      cands.push_back(json{{"atom", c.atom.str()}, {"provenance", c.provenance}});
    }
    o["candidates"] = cands;
    if (!tr.stop.empty()) {
      o["stop"] = tr.stop;
    }
    objects.push_back(o);
  }
  json ds = json::array();
  for (std::size_t i = 0; i < decisions.size(); ++i) {
    const auto & d = decisions[i];
    json dj{{"candidate", d.candidate.atom.str()}, {"verdict", d.accepted ? "accepted" : "rejected"},
      {"reason", d.reason}};
    if (d.plan) {
      dj["metric"] = d.metric;
      json steps = json::array();
      for (const auto & s : d.plan->steps) {
        steps.push_back(s.str());
      }
      dj["plan"] = steps;
    }
    dj["winner"] = winner.has_value() && *winner == i;
    if (timings) {
      dj["elapsed_ms"] = d.elapsed_ms;
    }
    ds.push_back(dj);
  }
  json out{{"objects", objects}, {"decisions", ds}};
  out["winner"] = winner ? json(decisions[*winner].candidate.atom.str()) : json(nullptr);
  if (timings) {
    out["timings"] = json{{"total_ms", elapsed_ms}};
  }
  return out;
}

execution::OpportunityHook Pipeline::hook() const
{
  return [this](const execution::Observation & obs) {
           const auto r = process(
             *obs.task, *obs.atoms, *obs.fluents, obs.now, *obs.classification, obs.event->facts);
           execution::HookOutcome out;
           out.swap = r.swap;
           out.record = r.report(false);
           return out;
         };
}

}  // namespace opportune::integration
