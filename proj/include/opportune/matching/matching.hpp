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

#ifndef OPPORTUNE__MATCHING__MATCHING_HPP_
#define OPPORTUNE__MATCHING__MATCHING_HPP_

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "opportune/ontology/ontology.hpp"

namespace opportune::matching
{

struct MatchConfig
{
  double filter_threshold = 0.5;
  double class_threshold = 0.85;
  double sibling_threshold = 0.5;
  double inner_theta = 0.9;
};

// ---------------------------------------------------------------------------
// Ontology level

/// Term -> relative frequency. Weights sum to 1 for a non-empty bag.
using TermBag = std::map<std::string, double>;

/// Bag over the tokens of every concept id, label, annotation relation and
/// annotation value.
TermBag term_bag(const ontology::Ontology & onto);

double cosine_similarity(const TermBag & a, const TermBag & b);

struct RankedOntology
{
  std::string id;
  double score = 0.0;
  bool selected = false;
};

/// Scores every repository member against `reference`, sorted by
/// descending score and then by id.
std::vector<RankedOntology> rank_similar(
  const ontology::Ontology & reference, const ontology::Repository & repo, double threshold);

/// Members whose similarity to `reference` reaches `threshold`, most
/// similar first.
ontology::Repository filter_similar(
  const ontology::Ontology & reference, const ontology::Repository & repo, double threshold);

// ---------------------------------------------------------------------------
// Class level

double jaro(std::string_view a, std::string_view b);

/// Winkler's prefix boost (scale 0.1, at most four characters), applied
/// when the Jaro similarity exceeds 0.7.
double jaro_winkler(std::string_view a, std::string_view b);

/// SoftTFIDF with Jaro-Winkler as the inner similarity. Document
/// frequencies come from the corpus given at construction.
class SoftTfIdf
{
public:
  explicit SoftTfIdf(const std::vector<std::vector<std::string>> & corpus);

  double idf(const std::string & token) const;
  double score(
    const std::vector<std::string> & s, const std::vector<std::string> & t, double theta) const;

private:
  std::map<std::string, double> weights(const std::vector<std::string> & doc) const;

  std::map<std::string, std::size_t> df_;
  std::size_t n_docs_ = 0;
};

/// Tokens of the concept id, its labels and its annotation values.
std::vector<std::string> class_document(const ontology::Concept & concept_value);

struct Correspondence
{
  std::string source;
  std::string target;
  double score = 0.0;

  bool operator==(const Correspondence &) const = default;
};

struct Alignment
{
  std::vector<Correspondence> matches;
  /// Best candidates that were not emitted, with the reason in `why`.
  struct Rejected
  {
    std::string source;
    std::string target;
    double score = 0.0;
    std::string why;
  };
  std::vector<Rejected> rejected;

  const Correspondence * match_for(std::string_view source) const;
};

/// Scores each fragment concept of `other` against every concept of
/// `reference` and assigns one-to-one matches greedily by descending
/// score. Pairs below `config.class_threshold` are never emitted.
Alignment align_classes(
  const ontology::Ontology & reference, const ontology::Ontology & other,
  const std::vector<std::string> & fragment, const MatchConfig & config);

struct PositionOutcome
{
  enum class Kind { EquivalentTo, NewChildOf, Unplaced };

  Kind kind = Kind::Unplaced;
  /// Existing concept for EquivalentTo, parent for NewChildOf.
  std::string concept_id;
  std::string reason;
  /// Positioning rule that decided the outcome, 1 to 4.
  int rule = 4;

  bool operator==(const PositionOutcome &) const = default;
};

const char * kind_str(PositionOutcome::Kind kind);

struct Positioning
{
  std::string concept_id;
  std::optional<std::string> parent;
  std::vector<std::string> siblings;
  Alignment alignment;
  PositionOutcome outcome;
};

/// Positions concept `c_t` of `other` inside `reference`:
///   1. c_t matches c            -> EquivalentTo(c)
///   2. parent(c_t) matches c_x  -> NewChildOf(c_x)
///   3. enough siblings match, all under one parent p -> NewChildOf(p)
///   4. Unplaced
Positioning position_type(
  const ontology::Ontology & reference, const ontology::Ontology & other,
  const std::string & c_t, const MatchConfig & config);

/// JSON report of a positioning run.
std::string alignment_report(
  const ontology::Ontology & reference, const ontology::Ontology & other,
  const Positioning & positioning, int indent = 2);

}  // namespace opportune::matching

#endif  // OPPORTUNE__MATCHING__MATCHING_HPP_
