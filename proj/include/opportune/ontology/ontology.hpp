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

#ifndef OPPORTUNE__ONTOLOGY__ONTOLOGY_HPP_
#define OPPORTUNE__ONTOLOGY__ONTOLOGY_HPP_

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "opportune/task/task.hpp"

namespace opportune::ontology
{

class OntologyError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// Relation names accepted on annotations: the knowledge-graph relation
/// vocabulary plus the reserved relation "label".
const std::vector<std::string> & relation_vocabulary();
bool is_known_relation(std::string_view rel);

struct Annotation
{
  std::string rel;
  std::string val;

  auto operator<=>(const Annotation &) const = default;
  bool operator==(const Annotation &) const = default;
};

struct Concept
{
  std::string id;
  std::optional<std::string> parent;
  std::vector<std::string> labels;
  std::vector<Annotation> annotations;

  bool operator==(const Concept &) const = default;
};

/// A single-rooted taxonomy with individuals attached to concepts.
class Ontology
{
public:
  Ontology() = default;
  Ontology(std::string id, std::string root);

  const std::string & id() const {return id_;}
  void set_id(std::string id) {id_ = std::move(id);}
  const std::string & root() const {return root_;}

  const std::map<std::string, Concept, std::less<>> & concepts() const {return concepts_;}
  const std::map<std::string, std::string, std::less<>> & individuals() const
  {
    return individuals_;
  }

  bool has_concept(std::string_view id) const;
  const Concept & concept_at(std::string_view id) const;
  Concept & concept_at(std::string_view id);

  /// Adds a concept under an existing parent. The new concept's label list
  /// defaults to its id.
  Concept & add_concept(const std::string & id, const std::string & parent);
  void add_individual(const std::string & id, const std::string & concept_id);
  std::optional<std::string> concept_of(std::string_view individual) const;

  std::vector<std::string> children(std::string_view id) const;
  /// Other children of the concept's parent; empty for the root.
  std::vector<std::string> siblings(std::string_view id) const;

  /// The concept, its transitive parents and the root.
  std::set<std::string> ancestors(std::string_view id) const;
  std::size_t depth(std::string_view id) const;

  /// Checks the tree invariants; throws OntologyError naming the offenders.
  void validate() const;

  bool operator==(const Ontology &) const = default;

private:
  friend Ontology from_concepts(
    std::string id, std::string root, std::vector<Concept> concepts,
    const std::map<std::string, std::string> & individuals);

  std::string id_;
  std::string root_;
  std::map<std::string, Concept, std::less<>> concepts_;
  std::map<std::string, std::string, std::less<>> individuals_;
};

/// Builds an ontology from loose parts and validates it (single root,
/// acyclic, known parents and individual concepts).
Ontology from_concepts(
  std::string id, std::string root, std::vector<Concept> concepts,
  const std::map<std::string, std::string> & individuals);

/// One concept per type with the same parent edges, one individual per
/// object under the concept of its type.
Ontology from_task(const task::PlanningTask & task, std::string id = "n_phi");

double semantic_distance(const Ontology & onto, std::string_view a, std::string_view b);

/// Mean of d(c, root)^2 over non-root concepts, or of d(c, root) when
/// `squared` is false. The root-only ontology scores 0.
double semantic_variance(const Ontology & onto, bool squared = true);

std::string to_json(const Ontology & onto, int indent = 2);
Ontology from_json(std::string_view text);
Ontology load(const std::filesystem::path & path);
void save(const Ontology & onto, const std::filesystem::path & path);

struct Repository
{
  std::vector<Ontology> members;

  const Ontology * find(std::string_view id) const;
};

/// Loads every *.json file of a directory in file-name order. Ontology ids
/// must be unique.
Repository load_repository(const std::filesystem::path & dir);

}  // namespace opportune::ontology

#endif  // OPPORTUNE__ONTOLOGY__ONTOLOGY_HPP_
