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
#include <random>

#include "doctest.h"
#include "fixtures.hpp"
#include "json.hpp"
#include "opportune/matching/matching.hpp"
#include "oracles.hpp"

using namespace opportune::matching;
using opportune::ontology::Ontology;
using opportune::ontology::Repository;

namespace
{

std::string random_word(std::mt19937 & rng, const std::string & alphabet, int max_len)
{
  std::uniform_int_distribution<int> len(0, max_len);
  std::uniform_int_distribution<std::size_t> pick(0, alphabet.size() - 1);
  std::string w;
  for (int i = len(rng); i > 0; --i) {
    w.push_back(alphabet[pick(rng)]);
  }
  return w;
}

std::vector<std::string> random_doc(std::mt19937 & rng)
{
  std::uniform_int_distribution<int> n(0, 6);
  std::vector<std::string> doc;
  for (int i = n(rng); i > 0; --i) {
    doc.push_back(random_word(rng, "abcde", 6));
  }
  return doc;
}

TermBag random_bag(std::mt19937 & rng)
{
  std::uniform_int_distribution<int> n(0, 6);
  std::uniform_int_distribution<int> w(1, 5);
  TermBag bag;
  for (int i = n(rng); i > 0; --i) {
    bag[random_word(rng, "abc", 2)] += w(rng);
  }
  return bag;
}

}  // namespace

TEST_CASE("term bag of a bare root")
{
  const auto bag = term_bag(Ontology("x", "object"));
  CHECK(bag == TermBag{{"object", 1.0}});
}

TEST_CASE("term bag tokens and weights")
{
  Ontology o("x", "object");
  o.add_concept("Jimmy_Glass_Jazz_bar", "object");
  const auto bag = term_bag(o);
  for (const char * t : {"jimmy", "glass", "jazz", "bar"}) {
    CHECK(bag.count(t) == 1);
  }
  double sum = 0.0;
  for (const auto & [t, w] : bag) {
    CHECK(w > 0.0);
    sum += w;
  }
  CHECK(sum == doctest::Approx(1.0));

  const auto a = fixtures::enriched_task_ontology();
  const auto enriched = term_bag(a);
  CHECK(enriched.count("repulsion") == 1);
  CHECK(enriched.count("disneyland") == 1);
}

TEST_CASE("cosine hand values")
{
  TermBag x{{"a", 0.5}, {"b", 0.5}};
  TermBag y{{"a", 0.5}, {"c", 0.5}};
  CHECK(cosine_similarity(x, x) == doctest::Approx(1.0));
  CHECK(cosine_similarity(x, y) == doctest::Approx(0.5));
  CHECK(cosine_similarity(x, TermBag{{"z", 1.0}}) == 0.0);
  CHECK(cosine_similarity(x, TermBag{}) == 0.0);
  CHECK(cosine_similarity(TermBag{}, TermBag{}) == 0.0);
}

TEST_CASE("cosine properties on random bags")
{
  std::mt19937 rng(3);
  for (int i = 0; i < 500; ++i) {
    const auto a = random_bag(rng);
    const auto b = random_bag(rng);
    const double s = cosine_similarity(a, b);
    CHECK(s >= 0.0);
    CHECK(s <= 1.0);
    CHECK(s == doctest::Approx(cosine_similarity(b, a)).epsilon(1e-12));
    if (!a.empty()) {
      CHECK(std::fabs(cosine_similarity(a, a) - 1.0) < 1e-9);
    }
  }
}

TEST_CASE("filter on the bundled repository")
{
  const auto a = fixtures::enriched_task_ontology();
  const auto repo = fixtures::enriched_repository();
  const auto ranked = rank_similar(a, repo, 0.5);
  REQUIRE(ranked.size() == 5);
  std::set<std::string> selected;
  for (const auto & r : ranked) {
    if (r.selected) {
      selected.insert(r.id);
    } else {
      CHECK(r.score < 0.1);
    }
  }
  CHECK(selected == std::set<std::string>{"D", "E", "F"});
  const auto filtered = filter_similar(a, repo, 0.5);
  REQUIRE(filtered.members.size() == 3);
  CHECK(filtered.members[0].id() == ranked[0].id);
  CHECK(filter_similar(a, repo, 1.01).members.empty());
  CHECK(filter_similar(a, Repository{}, 0.5).members.empty());

  Repository with_copy = repo;
  Ontology copy = a;
  copy.set_id("A_copy");
  with_copy.members.push_back(copy);
  const auto again = rank_similar(a, with_copy, 0.5);
  CHECK(again.front().id == "A_copy");
  CHECK(again.front().score == doctest::Approx(1.0));
}

TEST_CASE("ranking ties are broken by id")
{
  Repository repo;
  repo.members.emplace_back("zeta", "object");
  repo.members.emplace_back("alpha", "object");
  const auto ranked = rank_similar(Ontology("ref", "object"), repo, 0.5);
  CHECK(ranked[0].id == "alpha");
  CHECK(ranked[1].id == "zeta");
}

TEST_CASE("jaro-winkler against the reference implementation")
{
  CHECK(jaro_winkler("attraction", "attractions") == doctest::Approx(0.981818).epsilon(1e-6));
  CHECK(jaro_winkler("martha", "marhta") == doctest::Approx(0.961111).epsilon(1e-6));
  CHECK(jaro_winkler("dixon", "dicksonx") == doctest::Approx(0.813333).epsilon(1e-6));
  CHECK(jaro_winkler("", "") == 1.0);
  CHECK(jaro_winkler("abc", "") == 0.0);
  std::mt19937 rng(5);
  for (int i = 0; i < 2000; ++i) {
    const auto a = random_word(rng, "abcd", 9);
    const auto b = random_word(rng, "abcd", 9);
    CHECK(std::fabs(jaro_winkler(a, b) - oracles::jaro_winkler(a, b)) < 1e-12);
  }
}

TEST_CASE("soft tfidf hand cases")
{
  const std::vector<std::string> s{"attraction"};
  const std::vector<std::string> t{"attractions"};
  const SoftTfIdf m({s, t});
  CHECK(m.score(s, t, 0.9) > 0.9);
  CHECK(m.score(s, t, 0.9) == doctest::Approx(0.981818).epsilon(1e-6));
  CHECK(m.score(s, s, 0.9) == doctest::Approx(1.0).epsilon(1e-9));
  const std::vector<std::string> u{"zebra", "quilt"};
  CHECK(m.score(s, u, 0.9) == 0.0);
  CHECK(m.score(s, {}, 0.9) == 0.0);
}

TEST_CASE("soft tfidf bounds on random documents")
{
  std::mt19937 rng(9);
  for (int i = 0; i < 300; ++i) {
    std::vector<std::vector<std::string>> corpus;
    for (int k = 0; k < 5; ++k) {
      corpus.push_back(random_doc(rng));
    }
    const SoftTfIdf m(corpus);
    for (const auto & a : corpus) {
      for (const auto & b : corpus) {
        const double s = m.score(a, b, 0.9);
        CHECK(s >= 0.0);
        CHECK(s <= 1.0);
      }
      if (!a.empty()) {
        CHECK(std::fabs(m.score(a, a, 0.9) - 1.0) < 1e-9);
      }
    }
  }
}

TEST_CASE("lexically identical concept matches with score one")
{
  const auto a = fixtures::enriched_task_ontology();
  const auto repo = fixtures::enriched_repository();
  const auto al = align_classes(a, *repo.find("E"), {"religious_site"}, MatchConfig{});
  REQUIRE(al.matches.size() == 1);
  CHECK(al.matches[0].target == "religious_site");
  CHECK(al.matches[0].score == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("must_see aligns with attraction")
{
  const auto a = fixtures::enriched_task_ontology();
  const auto repo = fixtures::enriched_repository();
  const auto al = align_classes(a, *repo.find("E"), {"must_see"}, MatchConfig{});
  REQUIRE(al.matches.size() == 1);
  CHECK(al.matches[0].target == "attraction");
  CHECK(al.matches[0].score >= 0.85);
}

TEST_CASE("renaming must_see keeps its target")
{
  const auto a = fixtures::enriched_task_ontology();
  const auto repo = fixtures::enriched_repository();
  const auto & e = *repo.find("E");
  std::vector<opportune::ontology::Concept> concepts;
  for (const auto & [cid, c] : e.concepts()) {
    auto copy = c;
    if (copy.id == "must_see") {
      copy.id = "top_sight";
    }
    if (copy.parent == "must_see") {
      copy.parent = "top_sight";
    }
    concepts.push_back(copy);
  }
  const auto renamed = opportune::ontology::from_concepts("E2", e.root(), concepts, {});
  const auto before = align_classes(a, e, {"must_see"}, MatchConfig{});
  const auto after = align_classes(a, renamed, {"top_sight"}, MatchConfig{});
  REQUIRE(after.matches.size() == 1);
  CHECK(after.matches[0].target == before.matches[0].target);
}

TEST_CASE("delivery fragment yields no correspondences")
{
  const auto a = fixtures::enriched_task_ontology();
  const auto repo = fixtures::enriched_repository();
  const auto & b = *repo.find("B");
  std::vector<std::string> all;
  for (const auto & [cid, c] : b.concepts()) {
    all.push_back(cid);
  }
  const auto al = align_classes(a, b, all, MatchConfig{});
  CHECK(al.matches.empty());
  CHECK(al.rejected.size() == all.size());
}

TEST_CASE("greedy assignment is one to one")
{
  Ontology ref("ref", "object");
  ref.add_concept("museum", "object");
  Ontology other("other", "Thing");
  other.add_concept("museum", "Thing");
  other.concept_at("museum").labels = {"museum"};
  auto & twin = other.add_concept("museum_copy", "Thing");
  twin.labels = {"museum"};
  const auto al = align_classes(ref, other, {"museum", "museum_copy"}, MatchConfig{0.5, 0.5, 0.5, 0.9});
  REQUIRE(al.matches.size() == 1);
  CHECK(al.matches[0].source == "museum");
  REQUIRE(al.rejected.size() == 1);
  CHECK(al.rejected[0].why.find("already assigned") != std::string::npos);
}

TEST_CASE("plaza is placed under attraction through its parent")
{
  const auto a = fixtures::enriched_task_ontology();
  const auto repo = fixtures::enriched_repository();
  const auto pos = position_type(a, *repo.find("E"), "plaza", MatchConfig{});
  CHECK(pos.parent == "must_see");
  CHECK(pos.outcome.kind == PositionOutcome::Kind::NewChildOf);
  CHECK(pos.outcome.concept_id == "attraction");
  CHECK(pos.outcome.rule == 2);
  CHECK(a.has_concept(pos.outcome.concept_id));
  const auto report = nlohmann::json::parse(alignment_report(a, *repo.find("E"), pos));
  CHECK(report["rule"] == 2);
  CHECK(report["outcome"]["kind"] == "NewChildOf");
  CHECK(report["correspondences"].size() >= 1);
}

TEST_CASE("jazz bar is placed through its siblings")
{
  const auto a = fixtures::enriched_task_ontology();
  const auto repo = fixtures::enriched_repository();
  const auto pos = position_type(a, *repo.find("E"), "jazz_bar", MatchConfig{});
  CHECK(pos.outcome.kind == PositionOutcome::Kind::NewChildOf);
  CHECK(pos.outcome.concept_id == "attraction");
  CHECK(pos.outcome.rule == 3);

  MatchConfig strict;
  strict.sibling_threshold = 0.9;
  const auto strict_pos = position_type(a, *repo.find("E"), "jazz_bar", strict);
  CHECK(strict_pos.outcome.kind == PositionOutcome::Kind::Unplaced);
}

TEST_CASE("sibling matches under different parents never vote")
{
  Ontology ref("ref", "object");
  ref.add_concept("hotel", "object");
  ref.add_concept("garden_area", "object");
  ref.add_concept("garden", "garden_area");
  Ontology other("other", "Thing");
  other.add_concept("group", "Thing");
  other.add_concept("newcomer", "group");
  other.add_concept("hotel", "group");
  other.add_concept("garden", "group");
  const auto pos = position_type(ref, other, "newcomer", MatchConfig{});
  CHECK(pos.outcome.kind == PositionOutcome::Kind::Unplaced);
  CHECK(pos.outcome.reason.find("different parents") != std::string::npos);
}

TEST_CASE("semantically equal variant is an equivalent type")
{
  auto store = opportune::enrichment::parse_edges(
    "relatedTo\texhibition\tdisplay\t1\n"
    "relatedTo\texhibition\tshow\t1\n"
    "relatedTo\texhibition\tgallery\t1\n"
    "relatedTo\texhibition\tartwork\t1\n"
    "relatedTo\texhibition\tcurator\t1\n"
    "atLocation\texhibition\tmuseum\t1\n"
    "synonym\tartexhibit\texhibition\t1\n");
  Ontology ref("ref", "object");
  ref.add_concept("attraction", "object");
  ref.add_concept("exhibition", "attraction");
  Ontology other("other", "Thing");
  other.add_concept("culture", "Thing");
  auto & c = other.add_concept("artexhibit", "culture");
  c.labels = {"artexhibit", "exhibition"};
  ref = opportune::enrichment::annotate_ontology(ref, store);
  other = opportune::enrichment::annotate_ontology(other, store);
  const auto pos = position_type(ref, other, "artexhibit", MatchConfig{});
  CHECK(pos.outcome.kind == PositionOutcome::Kind::EquivalentTo);
  CHECK(pos.outcome.concept_id == "exhibition");
  CHECK(pos.outcome.rule == 1);
}

TEST_CASE("isolated type stays unplaced")
{
  const auto a = fixtures::enriched_task_ontology();
  const auto repo = fixtures::enriched_repository();
  const auto pos = position_type(a, *repo.find("E"), "souvenir_kiosk", MatchConfig{});
  CHECK(pos.outcome.kind == PositionOutcome::Kind::Unplaced);
  CHECK(pos.outcome.rule == 4);
  CHECK_THROWS_AS(
    position_type(a, *repo.find("E"), "ghost", MatchConfig{}), opportune::ontology::OntologyError);
}
