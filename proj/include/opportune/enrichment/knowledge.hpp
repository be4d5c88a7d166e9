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

#ifndef OPPORTUNE__ENRICHMENT__KNOWLEDGE_HPP_
#define OPPORTUNE__ENRICHMENT__KNOWLEDGE_HPP_

#include <chrono>
#include <filesystem>
#include <map>
#include <mutex>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "opportune/ontology/ontology.hpp"

namespace opportune::enrichment
{

class KnowledgeError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// Raised by the HTTP client on transport failures and non-200 replies.
class FetchError : public KnowledgeError
{
public:
  using KnowledgeError::KnowledgeError;
};

struct KnowledgeEdge
{
  std::string relation;
  std::string start;
  std::string end;
  double weight = 1.0;

  auto operator<=>(const KnowledgeEdge &) const = default;
  bool operator==(const KnowledgeEdge &) const = default;
};

struct LoadIssue
{
  int line = 0;
  std::string reason;
};

class KnowledgeStore
{
public:
  /// Adds an edge; terms are lower-cased. Exact duplicates are ignored.
  /// Throws KnowledgeError on an unknown relation or an empty term.
  void add(KnowledgeEdge edge);

  /// Every edge with `term` as start or end, in insertion order.
  std::vector<KnowledgeEdge> incident(std::string_view term) const;
  bool contains_term(std::string_view term) const;

  const std::vector<KnowledgeEdge> & edges() const {return edges_;}
  std::size_t size() const {return edges_.size();}
  bool empty() const {return edges_.empty();}

  /// Rows skipped by the last load, with line numbers.
  const std::vector<LoadIssue> & issues() const {return issues_;}
  void note_issue(LoadIssue issue) {issues_.push_back(std::move(issue));}

private:
  std::vector<KnowledgeEdge> edges_;
  std::map<std::string, std::vector<std::size_t>, std::less<>> by_term_;
  std::vector<LoadIssue> issues_;
};

/// Reads `relation<TAB>start<TAB>end<TAB>weight` rows. '#' starts a comment
/// line. Malformed rows and unknown relations are skipped and recorded in
/// issues(); an unreadable file throws.
KnowledgeStore load_edges(const std::filesystem::path & path);
KnowledgeStore parse_edges(std::string_view text);

/// Appends the rows of `edges` to a TSV file.
void append_edges(const std::filesystem::path & path, const std::vector<KnowledgeEdge> & edges);

/// Lookup keys for a concept: each label (and the id) as a phrase, with
/// spaces turned into '_', plus the label tokens.
std::vector<std::string> lookup_terms(const ontology::Concept & concept_value);

/// Adds (relation, other endpoint) annotations for each edge incident to a
/// lookup term. Existing labels and annotations are kept; duplicates are
/// collapsed.
ontology::Concept annotate_concept(
  const ontology::Concept & concept_value, const KnowledgeStore & store);

ontology::Ontology annotate_ontology(
  const ontology::Ontology & onto, const KnowledgeStore & store);

/// Maps "/r/AtLocation" style relation URIs to the lower-camel vocabulary
/// name, or "" when the relation is outside the vocabulary.
std::string relation_from_uri(std::string_view uri);

/// Extracts "attraction" from "/c/en/attraction/n/..."; "" for other
/// languages.
std::string term_from_uri(std::string_view uri);

/// Parses a ConceptNet-shaped JSON reply. Throws KnowledgeError when the
/// document is not of that shape.
std::vector<KnowledgeEdge> parse_conceptnet_reply(std::string_view body);

/// Client for a ConceptNet-compatible endpoint (`GET <base>/c/en/<term>`).
/// Fetched edges are appended to a cache file when one is configured.
class ConceptNetClient
{
public:
  explicit ConceptNetClient(
    std::string endpoint, std::filesystem::path cache_path = {},
    std::chrono::milliseconds timeout = std::chrono::milliseconds(3000));

  /// Throws FetchError on network or HTTP errors and KnowledgeError on a
  /// malformed body. An unknown term yields an empty list.
  std::vector<KnowledgeEdge> fetch_term(const std::string & term);

private:
  std::string endpoint_;
  std::filesystem::path cache_path_;
  std::chrono::milliseconds timeout_;
  std::mutex cache_mutex_;
};

/// Adds online edges for every lookup term of every concept to `store`.
/// Returns false (and leaves `store` as it was for the failing terms) when
/// the endpoint could not be reached; the caller keeps the local store.
bool augment_online(
  const std::vector<ontology::Ontology> & ontologies, ConceptNetClient & client,
  KnowledgeStore & store, std::vector<std::string> * warnings = nullptr);

}  // namespace opportune::enrichment

#endif  // OPPORTUNE__ENRICHMENT__KNOWLEDGE_HPP_
