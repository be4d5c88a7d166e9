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

#include "opportune/ontology/ontology.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace opportune::ontology
{

using json = nlohmann::json;

const std::vector<std::string> & relation_vocabulary()
{
  static const std::vector<std::string> vocab = {
    "label",
    "relatedTo", "formOf", "isA", "partOf", "hasA", "usedFor", "capableOf",
    "atLocation", "causes", "hasSubevent", "hasFirstSubevent", "hasLastSubevent",
    "hasPrerequisite", "hasProperty", "motivatedByGoal", "obstructedBy", "desires",
    "createdBy", "synonym", "antonym", "distinctFrom", "derivedFrom", "symbolOf",
    "definedAs", "mannerOf", "locatedNear", "hasContext", "similarTo",
    "etymologicallyRelatedTo", "etymologicallyDerivedFrom", "causesDesire", "madeOf",
    "receivesAction", "instanceOf", "entails", "notDesires",
  };
  return vocab;
}

bool is_known_relation(std::string_view rel)
{
  const auto & v = relation_vocabulary();
  return std::find(v.begin(), v.end(), rel) != v.end();
}

Ontology::Ontology(std::string id, std::string root)
: id_(std::move(id)), root_(std::move(root))
{
  concepts_.emplace(root_, Concept{root_, std::nullopt, {root_}, {}});
}

bool Ontology::has_concept(std::string_view id) const
{
  return concepts_.find(id) != concepts_.end();
}

const Concept & Ontology::concept_at(std::string_view id) const
{
  auto it = concepts_.find(id);
  if (it == concepts_.end()) {
    throw OntologyError("ontology '" + id_ + "' has no concept '" + std::string(id) + "'");
  }
  return it->second;
}

Concept & Ontology::concept_at(std::string_view id)
{
  auto it = concepts_.find(id);
  if (it == concepts_.end()) {
    throw OntologyError("ontology '" + id_ + "' has no concept '" + std::string(id) + "'");
  }
  return it->second;
}

Concept & Ontology::add_concept(const std::string & id, const std::string & parent)
{
  if (has_concept(id)) {
    throw OntologyError("ontology '" + id_ + "' already has concept '" + id + "'");
  }
  if (!has_concept(parent)) {
    throw OntologyError("ontology '" + id_ + "' has no parent concept '" + parent + "'");
  }
  return concepts_.emplace(id, Concept{id, parent, {id}, {}}).first->second;
}

void Ontology::add_individual(const std::string & id, const std::string & concept_id)
{
  if (individuals_.count(id) != 0) {
    throw OntologyError("ontology '" + id_ + "' already has individual '" + id + "'");
  }
  if (!has_concept(concept_id)) {
    throw OntologyError(
            "individual '" + id + "' refers to unknown concept '" + concept_id + "'");
  }
  individuals_.emplace(id, concept_id);
}

std::optional<std::string> Ontology::concept_of(std::string_view individual) const
{
  auto it = individuals_.find(individual);
  if (it == individuals_.end()) {
    return std::nullopt;
  }
  return it->second;
}

std::vector<std::string> Ontology::children(std::string_view id) const
{
  std::vector<std::string> out;
  for (const auto & [cid, c] : concepts_) {
    if (c.parent && *c.parent == id) {
      out.push_back(cid);
    }
  }
  return out;
}

std::vector<std::string> Ontology::siblings(std::string_view id) const
{
  const auto & c = concept_at(id);
  if (!c.parent) {
    return {};
  }
  auto out = children(*c.parent);
  out.erase(std::remove(out.begin(), out.end(), id), out.end());
  return out;
}

std::set<std::string> Ontology::ancestors(std::string_view id) const
{
  std::set<std::string> out;
  const Concept * c = &concept_at(id);
  while (true) {
    if (!out.insert(c->id).second) {
      throw OntologyError("cycle through concept '" + c->id + "'");
    }
    if (!c->parent) {
      break;
    }
    c = &concept_at(*c->parent);
  }
  return out;
}

std::size_t Ontology::depth(std::string_view id) const
{
  return ancestors(id).size() - 1;
}

void Ontology::validate() const
{
  std::vector<std::string> roots;
  for (const auto & [cid, c] : concepts_) {
    if (!c.parent) {
      roots.push_back(cid);
    } else if (!has_concept(*c.parent)) {
      throw OntologyError("concept '" + cid + "' has unknown parent '" + *c.parent + "'");
    }
    for (const auto & a : c.annotations) {
      if (!is_known_relation(a.rel)) {
        throw OntologyError("concept '" + cid + "' uses unknown relation '" + a.rel + "'");
      }
    }
  }
  for (const auto & [cid, c] : concepts_) {
    std::vector<std::string> path;
    const Concept * cur = &c;
    while (true) {
      auto seen = std::find(path.begin(), path.end(), cur->id);
      if (seen != path.end()) {
        std::string cyc;
        for (auto it = seen; it != path.end(); ++it) {
          cyc += *it + " -> ";
        }
        throw OntologyError("parent cycle among concepts: " + cyc + cur->id);
      }
      path.push_back(cur->id);
      if (!cur->parent) {
        break;
      }
      cur = &concepts_.find(*cur->parent)->second;
    }
  }
  if (roots.size() != 1) {
    std::string names;
    for (const auto & r : roots) {
      names += (names.empty() ? "" : ", ") + r;
    }
    throw OntologyError(
            "ontology '" + id_ + "' must have exactly one root, found " +
            std::to_string(roots.size()) + (names.empty() ? "" : " (" + names + ")"));
  }
  if (roots.front() != root_) {
    throw OntologyError(
            "ontology '" + id_ + "' declares root '" + root_ + "' but the parentless concept is '" +
            roots.front() + "'");
  }
  for (const auto & [ind, cid] : individuals_) {
    if (!has_concept(cid)) {
      throw OntologyError("individual '" + ind + "' refers to unknown concept '" + cid + "'");
    }
  }
}

Ontology from_concepts(
  std::string id, std::string root, std::vector<Concept> concepts,
  const std::map<std::string, std::string> & individuals)
{
  Ontology o;
  o.id_ = std::move(id);
  o.root_ = std::move(root);
  for (auto & c : concepts) {
    std::string cid = c.id;
    if (!o.concepts_.emplace(cid, std::move(c)).second) {
      throw OntologyError("ontology '" + o.id_ + "' declares concept '" + cid + "' twice");
    }
  }
  for (const auto & [ind, cid] : individuals) {
    o.individuals_.emplace(ind, cid);
  }
  o.validate();
  return o;
}

Ontology from_task(const task::PlanningTask & task, std::string id)
{
  Ontology o(std::move(id), task::kRootType);
  const auto & types = task.domain.types;
  // Insert along each chain from the root down so parents always exist.
  for (const auto & name : types.names()) {
    auto chain = types.chain(name);
    for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
      if (!o.has_concept(*it)) {
        o.add_concept(*it, *types.parent(*it));
      }
    }
  }
  for (const auto & [obj, type] : task.problem.objects) {
    o.add_individual(obj, type);
  }
  return o;
}

double semantic_distance(const Ontology & onto, std::string_view a, std::string_view b)
{
  const auto aa = onto.ancestors(a);
  const auto ab = onto.ancestors(b);
  std::size_t common = 0;
  for (const auto & x : aa) {
    common += ab.count(x);
  }
  const auto uni = aa.size() + ab.size() - common;
  return std::log2(1.0 + static_cast<double>(uni - common) / static_cast<double>(uni));
}

double semantic_variance(const Ontology & onto, bool squared)
{
  if (onto.concepts().size() <= 1) {
    return 0.0;
  }
  double sum = 0.0;
  for (const auto & [cid, c] : onto.concepts()) {
    if (cid == onto.root()) {
      continue;
    }
    const double d = semantic_distance(onto, cid, onto.root());
    sum += squared ? d * d : d;
  }
  return sum / static_cast<double>(onto.concepts().size() - 1);
}

std::string to_json(const Ontology & onto, int indent)
{
  json doc;
  doc["id"] = onto.id();
  doc["root"] = onto.root();
  json concepts = json::array();
  for (const auto & [cid, c] : onto.concepts()) {
    json jc;
    jc["id"] = c.id;
    jc["parent"] = c.parent ? json(*c.parent) : json(nullptr);
    jc["labels"] = c.labels;
    json ann = json::array();
    for (const auto & a : c.annotations) {
      ann.push_back({{"rel", a.rel}, {"val", a.val}});
    }
    jc["annotations"] = ann;
    concepts.push_back(jc);
  }
  doc["concepts"] = concepts;
  json inds = json::array();
  for (const auto & [ind, cid] : onto.individuals()) {
    inds.push_back({{"id", ind}, {"concept", cid}});
  }
  doc["individuals"] = inds;
  return doc.dump(indent) + "\n";
}

namespace
{

const json & field(const json & obj, const char * key, const std::string & where)
{
  if (!obj.is_object() || !obj.contains(key)) {
    throw OntologyError(where + ": missing field '" + key + "'");
  }
  return obj.at(key);
}

std::string string_field(const json & obj, const char * key, const std::string & where)
{
  const auto & v = field(obj, key, where);
  if (!v.is_string()) {
    throw OntologyError(where + ": field '" + key + "' must be a string");
  }
  return v.get<std::string>();
}

}  // namespace

Ontology from_json(std::string_view text)
{
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error & e) {
    throw OntologyError(std::string("invalid JSON: ") + e.what());
  }
  const std::string id = string_field(doc, "id", "ontology");
  const std::string where = "ontology '" + id + "'";
  const std::string root = string_field(doc, "root", where);
  const auto & jconcepts = field(doc, "concepts", where);
  if (!jconcepts.is_array()) {
    throw OntologyError(where + ": 'concepts' must be an array");
  }
  std::vector<Concept> concepts;
  for (const auto & jc : jconcepts) {
    Concept c;
    c.id = string_field(jc, "id", where + " concept");
    const std::string cw = where + " concept '" + c.id + "'";
    const auto & parent = field(jc, "parent", cw);
    if (parent.is_string()) {
      c.parent = parent.get<std::string>();
    } else if (!parent.is_null()) {
      throw OntologyError(cw + ": 'parent' must be a string or null");
    }
    if (jc.contains("labels")) {
      for (const auto & l : jc.at("labels")) {
        if (!l.is_string()) {
          throw OntologyError(cw + ": labels must be strings");
        }
        c.labels.push_back(l.get<std::string>());
      }
    }
    if (jc.contains("annotations")) {
      for (const auto & a : jc.at("annotations")) {
        c.annotations.push_back({string_field(a, "rel", cw), string_field(a, "val", cw)});
      }
    }
    concepts.push_back(std::move(c));
  }
  std::map<std::string, std::string> individuals;
  if (doc.contains("individuals")) {
    for (const auto & ji : doc.at("individuals")) {
      auto ind = string_field(ji, "id", where + " individual");
      if (!individuals.emplace(ind, string_field(ji, "concept", where)).second) {
        throw OntologyError(where + ": individual '" + ind + "' declared twice");
      }
    }
  }
  return from_concepts(id, root, std::move(concepts), individuals);
}

Ontology load(const std::filesystem::path & path)
{
  std::ifstream in(path);
  if (!in) {
    throw OntologyError("cannot read " + path.string());
  }
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return from_json(ss.str());
  } catch (const OntologyError & e) {
    throw OntologyError(path.string() + ": " + e.what());
  }
}

void save(const Ontology & onto, const std::filesystem::path & path)
{
  std::ofstream out(path);
  if (!out) {
    throw OntologyError("cannot write " + path.string());
  }
  out << to_json(onto);
}

const Ontology * Repository::find(std::string_view id) const
{
  for (const auto & m : members) {
    if (m.id() == id) {
      return &m;
    }
  }
  return nullptr;
}

Repository load_repository(const std::filesystem::path & dir)
{
  if (!std::filesystem::is_directory(dir)) {
    throw OntologyError("not a directory: " + dir.string());
  }
  std::vector<std::filesystem::path> files;
  for (const auto & entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  Repository repo;
  for (const auto & f : files) {
    auto o = load(f);
    if (repo.find(o.id()) != nullptr) {
      throw OntologyError("duplicate ontology id '" + o.id() + "' in " + dir.string());
    }
    repo.members.push_back(std::move(o));
  }
  return repo;
}

}  // namespace opportune::ontology
