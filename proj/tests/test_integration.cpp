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

#include <cmath>

#include "doctest.h"
#include "fixtures.hpp"
#include "opportune/integration/integration.hpp"
#include "opportune/ontology/ontology.hpp"

using namespace opportune;
using integration::IntegrationResult;
using task::parse_atom;

namespace
{

integration::FileProvider provider()
{
  return integration::FileProvider::load(fixtures::valencia("provider.json"));
}

/// Great-circle distance with the spherical law of cosines, as an
/// independent check on the haversine form.
double cosine_law_km(double lat1, double lon1, double lat2, double lon2)
{
  const double r = M_PI / 180.0;
  const double c = std::sin(lat1 * r) * std::sin(lat2 * r) +
    std::cos(lat1 * r) * std::cos(lat2 * r) * std::cos((lon2 - lon1) * r);
  return 6371.0 * std::acos(std::min(1.0, c));
}

/// The Valencia task after the Viveros visit, with Virgen plaza announced.
struct AfterViveros
{
  task::PlanningTask base;
  task::AtomSet atoms;
  task::FluentMap fluents;
  task::Minutes now = 698;

  AfterViveros()
  {
    base = fixtures::valencia_task();
    atoms = {
      parse_atom("(be tourist Viveros_garden)"), parse_atom("(visited tourist Viveros_garden)"),
      parse_atom("(active tourist)"), parse_atom("(free_table El_Celler_del_Tossal)"),
      parse_atom("(free_table La_Pepica)"), parse_atom("(open Virgen_plaza)")};
    fluents = base.problem.fluents;
    fluents[{"visits_done", {"tourist"}}] = 1.0;
  }

  task::PlanningTask snapshot() const {return integration::snapshot(base, atoms, fluents, now);}
};

const ontology::Ontology & member(const ontology::Repository & repo, const std::string & id)
{
  return *repo.find(id);
}

}  // namespace

TEST_CASE("novelty lists unknown arguments once")
{
  const auto t = fixtures::valencia_task();
  const auto r = integration::novelty(parse_atom("(be tourist Virgen_plaza)"), t.problem, 650);
  CHECK(r.unknown_objects == std::vector<std::string>{"Virgen_plaza"});
  CHECK(r.arrival_time == 650);
  CHECK(integration::novelty(parse_atom("(open Cathedral)"), t.problem, 0).unknown_objects.empty());
}

TEST_CASE("locate and select the plaza ontology")
{
  const auto repo = fixtures::enriched_repository();
  const auto a = fixtures::enriched_task_ontology();
  const auto filtered = matching::filter_similar(a, repo, matching::MatchConfig{}.filter_threshold);
  const auto located = integration::locate_object("Virgen_plaza", filtered);
  std::vector<std::string> ids;
  for (const auto & m : located.members) {
    ids.push_back(m.id());
  }
  CHECK(ids == std::vector<std::string>{"E", "F"});
  const auto & chosen = integration::select_ontology(located);
  CHECK(chosen.id() == "E");
  CHECK(
    ontology::semantic_variance(member(repo, "E")) > ontology::semantic_variance(member(repo, "F")));
  CHECK(integration::locate_object("Atlantis", filtered).members.empty());
  CHECK_THROWS_AS(integration::select_ontology({}), std::invalid_argument);
}

TEST_CASE("names are located after normalization")
{
  const auto repo = fixtures::enriched_repository();
  CHECK(integration::find_individual(member(repo, "E"), "virgen plaza") == "Virgen_plaza");
  CHECK(integration::locate_object("VIRGEN_PLAZA", repo).members.size() == 2);
}

TEST_CASE("equal variance goes to the smaller id")
{
  ontology::Ontology x("x", "Thing");
  x.add_concept("a", "Thing");
  ontology::Ontology y = x;
  ontology::Ontology w("w", "Thing");
  w.add_concept("a", "Thing");
  ontology::Repository repo;
  repo.members = {x, w, y};
  CHECK(integration::select_ontology(repo).id() == "w");
}

TEST_CASE("plaza becomes a child of attraction")
{
  auto t = fixtures::valencia_task();
  auto n_phi = fixtures::enriched_task_ontology();
  const auto repo = fixtures::enriched_repository();
  const auto r = integration::integrate_object(t, "Virgen_plaza", n_phi, member(repo, "E"), {});
  CHECK(r.kind == IntegrationResult::Kind::NewType);
  CHECK(r.type == "plaza");
  CHECK(r.parent == "attraction");
  REQUIRE(r.positioning.has_value());
  CHECK(r.positioning->outcome.rule == 2);
  CHECK(t.domain.types.parent("plaza") == "attraction");
  CHECK(t.problem.type_of("Virgen_plaza") == "plaza");
  CHECK(n_phi.individuals().at("Virgen_plaza") == "plaza");
  CHECK(n_phi.has_concept("plaza"));
  // The task accepts facts about the new object.
  CHECK_NOTHROW(
    task::check_atom(parse_atom("(visited tourist Virgen_plaza)"), t.domain, &t.problem, nullptr));
}

TEST_CASE("an object of a known type only joins the objects")
{
  auto t = fixtures::valencia_task();
  auto n_phi = fixtures::enriched_task_ontology();
  const auto repo = fixtures::enriched_repository();
  const auto types_before = t.domain.types;
  const auto r =
    integration::integrate_object(t, "StCatherineChapel", n_phi, member(repo, "E"), {});
  CHECK(r.kind == IntegrationResult::Kind::ExistingType);
  CHECK(r.type == "religious_site");
  CHECK(t.domain.types == types_before);
  CHECK(t.problem.type_of("StCatherineChapel") == "religious_site");
}

TEST_CASE("an unplaced type leaves the task untouched")
{
  auto t = fixtures::valencia_task();
  const auto before = t;
  auto n_phi = fixtures::enriched_task_ontology();
  const auto n_phi_before = n_phi;
  const auto repo = fixtures::enriched_repository();
  const auto r = integration::integrate_object(t, "Mercat_kiosk", n_phi, member(repo, "E"), {});
  CHECK(r.kind == IntegrationResult::Kind::Unplaced);
  CHECK(r.type.empty());
  CHECK(t == before);
  CHECK(n_phi == n_phi_before);
  CHECK_THROWS_AS(
    integration::integrate_object(t, "Nobody", n_phi, member(repo, "E"), {}),
    std::invalid_argument);
}

TEST_CASE("virgen plaza instantiation")
{
  AfterViveros s;
  auto t = s.snapshot();
  t.domain.add_type("plaza", "attraction");
  t.problem.add_object("Virgen_plaza", "plaza", t.domain);
  const auto prov = provider();
  const auto inst = integration::instantiate_variables(t, "Virgen_plaza", prov, {});
  REQUIRE(inst.complete());

  const auto plaza = *prov.lookup("Virgen_plaza");
  std::size_t walks = 0;
  for (const auto & [other, type] : fixtures::valencia_task().problem.objects) {
    if (other == "tourist") {
      continue;
    }
    const auto o = *prov.lookup(other);
    const auto expect = std::ceil(cosine_law_km(*plaza.lat, *plaza.lon, *o.lat, *o.lon) / 5.0 * 60.0);
    CHECK(t.problem.fluents.at({"walk_time", {"Virgen_plaza", other}}) == expect);
    CHECK(t.problem.fluents.at({"walk_time", {other, "Virgen_plaza"}}) == expect);
    ++walks;
  }
  CHECK(walks == 8);
  CHECK(t.problem.fluents.at({"visit_duration", {"Virgen_plaza"}}) == 20.0);
  // Open from 600 to 1380, so already open at 698 and closing later.
  CHECK(t.problem.init.count(parse_atom("(open Virgen_plaza)")) == 1);
  const bool closes = std::any_of(
    t.problem.tils.begin(), t.problem.tils.end(), [](const task::TimedLiteral & l) {
      return l.time == 1380 && !l.literal.positive && l.literal.atom.str() == "(open Virgen_plaza)";
    });
  CHECK(closes);
  CHECK(std::is_sorted(
      t.problem.tils.begin(), t.problem.tils.end(),
      [](const auto & a, const auto & b) {return a.time < b.time;}));
}

TEST_CASE("future windows become timed literals")
{
  AfterViveros s;
  auto t = s.snapshot();
  t.problem.add_object("Late_tower", "tower", t.domain);
  integration::ObjectFacts late;
  late.id = "Late_tower";
  late.lat = 39.476;
  late.lon = -0.376;
  late.open = {{500, 650}, {800, 900}, {1400, 1500}};
  late.visit_duration = 15;
  auto base = provider();
  const integration::OverlayProvider overlay(&base, {{"Late_tower", late}});
  const auto inst = integration::instantiate_variables(t, "Late_tower", overlay, {});
  REQUIRE(inst.complete());
  CHECK(t.problem.init.count(parse_atom("(open Late_tower)")) == 0);
  std::vector<std::pair<task::Minutes, bool>> seen;
  for (const auto & l : inst.tils) {
    seen.emplace_back(l.time, l.literal.positive);
  }
  // The last window opens inside the horizon and closes after it.
  CHECK(
    seen == std::vector<std::pair<task::Minutes, bool>>{{800, true}, {900, false}, {1400, true}});
}

TEST_CASE("missing provider data stops instantiation")
{
  AfterViveros s;
  auto t = s.snapshot();
  t.problem.add_object("Ghost_tower", "tower", t.domain);
  const auto before = t;
  const integration::FileProvider empty({});
  auto inst = integration::instantiate_variables(t, "Ghost_tower", empty, {});
  CHECK_FALSE(inst.complete());
  CHECK(t == before);

  integration::ObjectFacts bare;
  bare.id = "Ghost_tower";
  bare.open = {{600, 1380}};
  bare.visit_duration = 10;
  auto base = provider();
  const integration::OverlayProvider overlay(&base, {{"Ghost_tower", bare}});
  inst = integration::instantiate_variables(t, "Ghost_tower", overlay, {});
  CHECK_FALSE(inst.complete());
  CHECK(inst.missing.front().find("coordinates") != std::string::npos);
  CHECK(t == before);
}

TEST_CASE("a new restaurant needs its static facts")
{
  AfterViveros s;
  auto t = s.snapshot();
  t.problem.add_object("Casa_Montana", "restaurant", t.domain);
  integration::ObjectFacts f;
  f.id = "Casa_Montana";
  f.lat = 39.46;
  f.lon = -0.33;
  f.open = {{780, 960}};
  auto base = provider();
  auto inst = integration::instantiate_variables(
    t, "Casa_Montana", integration::OverlayProvider(&base, {{"Casa_Montana", f}}), {});
  CHECK_FALSE(inst.complete());
  bool free_table = false;
  bool eat_duration = false;
  for (const auto & m : inst.missing) {
    free_table = free_table || m.find("free_table") != std::string::npos;
    eat_duration = eat_duration || m.find("duration") != std::string::npos;
  }
  CHECK(free_table);
  CHECK(eat_duration);

  f.visit_duration = 50;
  f.extra = {parse_atom("(free_table Casa_Montana)")};
  inst = integration::instantiate_variables(
    t, "Casa_Montana", integration::OverlayProvider(&base, {{"Casa_Montana", f}}), {});
  CHECK(inst.complete());
  CHECK(t.problem.init.count(parse_atom("(free_table Casa_Montana)")) == 1);
  CHECK(t.problem.fluents.at({"eat_duration", {"Casa_Montana"}}) == 50.0);
}

TEST_CASE("goal formulation for a plaza")
{
  auto t = fixtures::valencia_task();
  t.domain.add_type("plaza", "attraction");
  t.problem.add_object("Virgen_plaza", "plaza", t.domain);
  const auto goals = integration::formulate_goals(t, "Virgen_plaza", "plaza");
  REQUIRE(goals.size() == 1);
  CHECK(goals[0].atom.str() == "(visited tourist Virgen_plaza)");
  CHECK(goals[0].provenance.find("sibling of") == 0);
}

TEST_CASE("goal formulation for other kinds of objects")
{
  auto t = fixtures::valencia_task();
  t.problem.add_object("Casa_Montana", "restaurant", t.domain);
  CHECK(integration::formulate_goals(t, "Casa_Montana", "restaurant").empty());

  t.problem.add_object("Micalet", "tower", t.domain);
  const auto towers = integration::formulate_goals(t, "Micalet", "tower");
  REQUIRE(towers.size() == 1);
  CHECK(towers[0].provenance.find("same type as") == 0);

  // Existing goals are never proposed again.
  CHECK(integration::formulate_goals(t, "Lonja", "architecture").empty());

  t.problem.add_object("guide", "person", t.domain);
  const auto people = integration::formulate_goals(t, "guide", "person");
  std::vector<std::string> atoms;
  for (const auto & g : people) {
    atoms.push_back(g.atom.str());
  }
  CHECK(std::find(atoms.begin(), atoms.end(), "(eaten guide)") != atoms.end());
  CHECK(std::find(atoms.begin(), atoms.end(), "(visited guide Cathedral)") != atoms.end());
}

TEST_CASE("snapshot keeps only later timed literals")
{
  AfterViveros s;
  const auto t = s.snapshot();
  CHECK(t.problem.horizon.start == 698);
  CHECK(t.problem.horizon.end == 1440);
  CHECK(t.problem.init == s.atoms);
  for (const auto & l : t.problem.tils) {
    CHECK(l.time > 698);
  }
  CHECK(t.problem.goals == s.base.problem.goals);
}

TEST_CASE("virgen plaza is accepted after the viveros visit")
{
  AfterViveros s;
  auto t = s.snapshot();
  auto n_phi = fixtures::enriched_task_ontology();
  const auto repo = fixtures::enriched_repository();
  integration::integrate_object(t, "Virgen_plaza", n_phi, member(repo, "E"), {});
  REQUIRE(integration::instantiate_variables(t, "Virgen_plaza", provider(), {}).complete());
  const auto goals = integration::formulate_goals(t, "Virgen_plaza", "plaza");
  planner::BuiltinPlanner planner;
  const auto ev = integration::evaluate_opportunities(t, goals, planner, {});
  REQUIRE(ev.winner.has_value());
  const auto & d = ev.decisions[*ev.winner];
  CHECK(d.accepted);
  REQUIRE(d.plan.has_value());
  CHECK(d.plan->count("visit") == 5);  // plus the Viveros visit already made
  CHECK(d.plan->steps.front().action_str() == "(move tourist Viveros_garden Virgen_plaza)");
  CHECK(planner::validate(*d.plan, d.variant).valid);
  CHECK(d.variant.problem.goals.back().str() == "(visited tourist Virgen_plaza)");
}

TEST_CASE("candidates that cannot fit are rejected")
{
  AfterViveros s;
  s.atoms.erase(parse_atom("(open Virgen_plaza)"));
  auto t = s.snapshot();
  t.domain.add_type("plaza", "attraction");
  t.problem.add_object("Virgen_plaza", "plaza", t.domain);
  integration::ObjectFacts closed = *provider().lookup("Virgen_plaza");
  closed.open = {{1300, 1310}};
  auto base = provider();
  REQUIRE(
    integration::instantiate_variables(
      t, "Virgen_plaza", integration::OverlayProvider(&base, {{"Virgen_plaza", closed}}), {})
    .complete());
  planner::BuiltinPlanner planner;
  const auto goals = integration::formulate_goals(t, "Virgen_plaza", "plaza");
  const auto ev = integration::evaluate_opportunities(t, goals, planner, {});
  REQUIRE(ev.decisions.size() == 1);
  CHECK_FALSE(ev.decisions[0].accepted);
  CHECK_FALSE(ev.winner.has_value());
  CHECK(ev.decisions[0].reason.find("unsolvable") == 0);

  auto zero = s.snapshot();
  zero.problem.horizon = {698, 698};
  const auto none = integration::evaluate_opportunities(zero, goals, planner, {});
  CHECK_FALSE(none.winner.has_value());
}

TEST_CASE("the pipeline does not touch its input")
{
  AfterViveros s;
  const auto prov = provider();
  integration::Pipeline p(
    ontology::load_repository(fixtures::valencia("repo")), fixtures::knowledge_store(), &prov, {});
  const auto before = s.base;
  const execution::Classification cls = {
    {parse_atom("(open Virgen_plaza)"), true, execution::Tag::OpportunityNewObject}};
  const auto r = p.process(s.base, s.atoms, s.fluents, s.now, cls, {});
  CHECK(s.base == before);
  REQUIRE(r.swap.has_value());
  CHECK(r.swap->task.problem.type_of("Virgen_plaza") == "plaza");
  CHECK(r.swap->task.problem.horizon.start == 698);
  CHECK(r.swap->plan.count("visit") == 5);
  const auto report = r.report(false);
  CHECK(report["winner"] == "(visited tourist Virgen_plaza)");
  CHECK(report["objects"][0]["selected"] == "E");
  CHECK(report["objects"][0]["integration"]["parent"] == "attraction");
  CHECK_FALSE(report.contains("timings"));
  CHECK(r.report(true).contains("timings"));
  CHECK(p.process(s.base, s.atoms, s.fluents, s.now, cls, {}).report(false).dump() == report.dump());
}

TEST_CASE("the pipeline stops on objects nobody knows")
{
  AfterViveros s;
  s.atoms.insert(parse_atom("(open Atlantis)"));
  const auto prov = provider();
  integration::Pipeline p(
    ontology::load_repository(fixtures::valencia("repo")), fixtures::knowledge_store(), &prov, {});
  const execution::Classification cls = {
    {parse_atom("(open Atlantis)"), true, execution::Tag::OpportunityNewObject}};
  const auto r = p.process(s.base, s.atoms, s.fluents, s.now, cls, {});
  CHECK_FALSE(r.swap.has_value());
  REQUIRE(r.traces.size() == 1);
  CHECK(r.traces[0].stop.find("unknown object") == 0);

  const execution::Classification kiosk = {
    {parse_atom("(open Mercat_kiosk)"), true, execution::Tag::OpportunityNewObject}};
  const auto k = p.process(s.base, s.atoms, s.fluents, s.now, kiosk, {});
  CHECK_FALSE(k.swap.has_value());
  REQUIRE(k.traces.size() == 1);
  CHECK(k.traces[0].integration->kind == IntegrationResult::Kind::Unplaced);
}

TEST_CASE("valencia chain of plans")
{
  const auto t = fixtures::valencia_task();
  const auto plan1 = planner::solve(t, {});
  REQUIRE(plan1.status == planner::SolveStatus::Solved);
  const auto prov = provider();
  integration::Pipeline p(
    ontology::load_repository(fixtures::valencia("repo")), fixtures::knowledge_store(), &prov, {});
  const auto scenario = execution::load_scenario(fixtures::valencia("scenario.json"));
  const auto rep = execution::run(t, plan1.plan, scenario, p.hook());
  REQUIRE(rep.plan_ids == std::vector<std::string>{"PLAN1", "PLAN2", "PLAN3"});
  CHECK(rep.plans[0].count("visit") == 5);
  // Later plans start mid-tour, so count the visits made before each swap.
  CHECK(rep.plans[1].count("visit") + 1 == 6);
  CHECK(rep.count("visit") == 7);
  CHECK(rep.count("eat") == 1);
  CHECK(rep.goals_satisfied);
  CHECK(rep.final_atoms.count(parse_atom("(be tourist Caro_hotel)")) == 1);
  CHECK(rep.final_atoms.count(parse_atom("(visited tourist Jimmy_Glass_Jazz_bar)")) == 1);
  CHECK(rep.final_task.problem.type_of("Jimmy_Glass_Jazz_bar") == "jazz_bar");
  CHECK(rep.final_task.domain.types.parent("jazz_bar") == "attraction");
  CHECK(rep.end_time == 1040);
}
