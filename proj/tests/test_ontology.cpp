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
#include <filesystem>
#include <random>

#include "doctest.h"
#include "fixtures.hpp"
#include "opportune/ontology/ontology.hpp"
#include "opportune/ontology/tokenize.hpp"
#include "oracles.hpp"

using namespace opportune::ontology;

namespace
{

Ontology root_with_two_children()
{
  Ontology o("two", "object");
  o.add_concept("left", "object");
  o.add_concept("right", "object");
  return o;
}

}  // namespace

TEST_CASE("from_task mirrors the type hierarchy and objects")
{
  const auto task = fixtures::valencia_task();
  const auto o = from_task(task, "A");
  CHECK(o.root() == "object");
  CHECK(o.concept_at("aquarium").parent == "attraction");
  CHECK(o.concept_of("Lonja") == "architecture");
  CHECK(o.concepts().size() == task.domain.types.size());
  CHECK(o.individuals().size() == task.problem.objects.size());
}

TEST_CASE("from_task on an empty task is a single root")
{
  opportune::task::PlanningTask empty;
  const auto o = from_task(empty);
  CHECK(o.concepts().size() == 1);
  CHECK(o.individuals().empty());
  CHECK(semantic_variance(o) == 0.0);
}

TEST_CASE("bundled ontology A equals the one built from the task")
{
  const auto loaded = load(fixtures::valencia("ontology_A.json"));
  CHECK(loaded.has_concept("attraction"));
  CHECK(loaded == from_task(fixtures::valencia_task(), "A"));
}

TEST_CASE("ancestors")
{
  Ontology o("chain", "root");
  o.add_concept("p", "root");
  o.add_concept("c", "p");
  CHECK(o.ancestors("root") == std::set<std::string>{"root"});
  CHECK(o.ancestors("c") == std::set<std::string>{"c", "p", "root"});
  CHECK_THROWS_AS(o.ancestors("ghost"), OntologyError);

  const auto a = from_task(fixtures::valencia_task());
  const auto anc = a.ancestors("aquarium");
  CHECK(anc.count("aquarium") == 1);
  CHECK(anc.count("attraction") == 1);
}

TEST_CASE("semantic distance hand values")
{
  auto o = root_with_two_children();
  o.add_concept("leaf", "left");
  CHECK(semantic_distance(o, "left", "left") == 0.0);
  CHECK(semantic_distance(o, "left", "right") == doctest::Approx(std::log2(5.0 / 3.0)).epsilon(1e-12));
  CHECK(semantic_distance(o, "left", "right") == doctest::Approx(0.7370).epsilon(1e-4));
  CHECK(semantic_distance(o, "leaf", "left") == doctest::Approx(std::log2(4.0 / 3.0)).epsilon(1e-12));
  CHECK(semantic_distance(o, "leaf", "left") == doctest::Approx(0.4150).epsilon(1e-4));
}

TEST_CASE("semantic variance hand values")
{
  CHECK(semantic_variance(Ontology("r", "object")) == 0.0);
  const auto o = root_with_two_children();
  const double d = std::log2(1.5);
  CHECK(semantic_variance(o) == doctest::Approx(d * d).epsilon(1e-12));
  CHECK(semantic_variance(o) == doctest::Approx(0.3422).epsilon(1e-4));
  CHECK(semantic_variance(o, false) == doctest::Approx(d).epsilon(1e-12));
}

TEST_CASE("distance and variance agree with the index-tree oracle")
{
  std::mt19937 rng(20260417);
  for (int round = 0; round < 60; ++round) {
    const auto t = oracles::random_tree(rng, 40);
    const auto o = oracles::to_ontology(t, "r" + std::to_string(round));
    const int n = static_cast<int>(t.parent.size());
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        const double d = semantic_distance(o, t.names[i], t.names[j]);
        REQUIRE(std::fabs(d - oracles::distance(t, i, j)) < 1e-9);
        CHECK(std::fabs(d - semantic_distance(o, t.names[j], t.names[i])) < 1e-15);
        CHECK((d == 0.0) == (i == j));
        CHECK(d >= 0.0);
        CHECK(d < 1.0);
      }
    }
    CHECK(std::fabs(semantic_variance(o) - oracles::variance(t)) < 1e-9);
    CHECK(std::fabs(semantic_variance(o, false) - oracles::variance(t, false)) < 1e-9);
  }
}

TEST_CASE("variance ignores concept names")
{
  std::mt19937 rng(7);
  for (int round = 0; round < 20; ++round) {
    auto t = oracles::random_tree(rng, 30);
    const double before = semantic_variance(oracles::to_ontology(t, "x"));
    for (auto & name : t.names) {
      name = "renamed_" + name;
    }
    CHECK(semantic_variance(oracles::to_ontology(t, "x")) == doctest::Approx(before).epsilon(1e-12));
  }
}

TEST_CASE("json round trip")
{
  auto o = root_with_two_children();
  o.concept_at("left").annotations.push_back({"isA", "side"});
  o.concept_at("right").labels.push_back("starboard");
  o.add_individual("thing_one", "left");
  const auto path = std::filesystem::temp_directory_path() / "opportune_roundtrip.json";
  save(o, path);
  CHECK(load(path) == o);
  std::filesystem::remove(path);
}

TEST_CASE("json schema errors")
{
  CHECK_THROWS_WITH_AS(
    from_json(R"({"id":"x","root":"a","concepts":[
      {"id":"a","parent":null},{"id":"b","parent":"c"},{"id":"c","parent":"b"}]})"),
    doctest::Contains("cycle"), OntologyError);
  try {
    from_json(R"({"id":"x","root":"a","concepts":[
      {"id":"a","parent":null},{"id":"b","parent":"c"},{"id":"c","parent":"b"}]})");
  } catch (const OntologyError & e) {
    const std::string msg = e.what();
    CHECK(msg.find("b") != std::string::npos);
    CHECK(msg.find("c") != std::string::npos);
  }
  CHECK_THROWS_WITH_AS(
    from_json(R"({"id":"x","root":"a","concepts":[{"id":"a","parent":null},{"id":"b","parent":null}]})"),
    doctest::Contains("exactly one root"), OntologyError);
  CHECK_THROWS_AS(from_json(R"({"id":"x","concepts":[]})"), OntologyError);
  CHECK_THROWS_AS(from_json("not json"), OntologyError);
  CHECK_THROWS_AS(
    from_json(R"({"id":"x","root":"a","concepts":[{"id":"a","parent":null,
      "annotations":[{"rel":"madeUp","val":"v"}]}]})"),
    OntologyError);
  CHECK_THROWS_AS(
    from_json(R"({"id":"x","root":"a","concepts":[{"id":"a","parent":null}],
      "individuals":[{"id":"i","concept":"nope"}]})"),
    OntologyError);
}

TEST_CASE("repository loading")
{
  const auto repo = load_repository(fixtures::valencia("repo"));
  REQUIRE(repo.members.size() == 5);
  CHECK(repo.members.front().id() == "B");
  CHECK(repo.find("E") != nullptr);
  CHECK(repo.find("Z") == nullptr);
  CHECK_THROWS_AS(load_repository(fixtures::valencia("missing_dir")), OntologyError);
}

TEST_CASE("fixture variance ordering")
{
  const auto repo = load_repository(fixtures::valencia("repo"));
  CHECK(semantic_variance(*repo.find("E")) > semantic_variance(*repo.find("F")));
  CHECK(semantic_variance(*repo.find("E")) > semantic_variance(*repo.find("D")));
}

TEST_CASE("tokenizer")
{
  CHECK(tokenize("Jimmy_Glass_Jazz_bar") == std::vector<std::string>{"jimmy", "glass", "jazz", "bar"});
  CHECK(tokenize("causesDesire") == std::vector<std::string>{"causes", "desire"});
  CHECK(tokenize("isA") == std::vector<std::string>{"is"});
  CHECK(tokenize("a b-c") == std::vector<std::string>{});
  CHECK(tokenize("PLAN2 ok") == std::vector<std::string>{"plan2", "ok"});
  CHECK(normalize_name("VirgenPlaza") == normalize_name("virgen plaza"));
  CHECK(normalize_name("Virgen_plaza") == "virgen_plaza");
}
