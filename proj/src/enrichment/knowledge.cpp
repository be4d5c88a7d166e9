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

#include "opportune/enrichment/knowledge.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include "httplib.h"
#include "json.hpp"
#include "opportune/ontology/tokenize.hpp"

namespace opportune::enrichment
{

namespace
{

std::string lower(std::string_view s)
{
  std::string out(s);
  std::transform(
    out.begin(), out.end(), out.begin(),
    [](unsigned char c) {return static_cast<char>(std::tolower(c));});
  return out;
}

std::string trim(std::string_view s)
{
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) {
    return "";
  }
  auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

}  // namespace

void KnowledgeStore::add(KnowledgeEdge edge)
{
  if (!ontology::is_known_relation(edge.relation) || edge.relation == "label") {
    throw KnowledgeError("unknown relation '" + edge.relation + "'");
  }
  edge.start = lower(trim(edge.start));
  edge.end = lower(trim(edge.end));
  if (edge.start.empty() || edge.end.empty()) {
    throw KnowledgeError("edge with an empty term");
  }
  if (edge.weight < 0.0) {
    throw KnowledgeError("edge with a negative weight");
  }
  for (auto idx : by_term_[edge.start]) {
    const auto & e = edges_[idx];
    if (e.relation == edge.relation && e.start == edge.start && e.end == edge.end) {
      return;
    }
  }
  const auto idx = edges_.size();
  by_term_[edge.start].push_back(idx);
  if (edge.end != edge.start) {
    by_term_[edge.end].push_back(idx);
  }
  edges_.push_back(std::move(edge));
}

std::vector<KnowledgeEdge> KnowledgeStore::incident(std::string_view term) const
{
  std::vector<KnowledgeEdge> out;
  auto it = by_term_.find(lower(term));
  if (it == by_term_.end()) {
    return out;
  }
  for (auto idx : it->second) {
    out.push_back(edges_[idx]);
  }
  return out;
}

bool KnowledgeStore::contains_term(std::string_view term) const
{
  return by_term_.find(lower(term)) != by_term_.end();
}

KnowledgeStore parse_edges(std::string_view text)
{
  KnowledgeStore store;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto t = trim(line);
    if (t.empty() || t[0] == '#') {
      continue;
    }
    std::vector<std::string> cols;
    std::stringstream ls(line);
    std::string col;
    while (std::getline(ls, col, '\t')) {
      cols.push_back(trim(col));
    }
    if (cols.size() != 4) {
      store.note_issue({lineno, "expected 4 tab-separated columns, got " + std::to_string(cols.size())});
      continue;
    }
    double weight = 0.0;
    try {
      std::size_t used = 0;
      weight = std::stod(cols[3], &used);
      if (used != cols[3].size()) {
        throw std::invalid_argument(cols[3]);
      }
    } catch (const std::exception &) {
      store.note_issue({lineno, "invalid weight '" + cols[3] + "'"});
      continue;
    }
    try {
      store.add({cols[0], cols[1], cols[2], weight});
    } catch (const KnowledgeError & e) {
      store.note_issue({lineno, e.what()});
    }
  }
  return store;
}

KnowledgeStore load_edges(const std::filesystem::path & path)
{
  std::ifstream in(path);
  if (!in) {
    throw KnowledgeError("cannot read knowledge store " + path.string());
  }
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_edges(ss.str());
}

void append_edges(const std::filesystem::path & path, const std::vector<KnowledgeEdge> & edges)
{
  std::ofstream out(path, std::ios::app);
  if (!out) {
    throw KnowledgeError("cannot write knowledge store " + path.string());
  }
  for (const auto & e : edges) {
    out << e.relation << '\t' << e.start << '\t' << e.end << '\t' << e.weight << '\n';
  }
}

std::vector<std::string> lookup_terms(const ontology::Concept & concept_value)
{
  std::vector<std::string> out;
  auto push = [&](std::string t) {
      if (!t.empty() && std::find(out.begin(), out.end(), t) == out.end()) {
        out.push_back(std::move(t));
      }
    };
  std::vector<std::string> names = concept_value.labels;
  names.insert(names.begin(), concept_value.id);
  for (const auto & name : names) {
    push(ontology::normalize_name(name));
  }
  for (const auto & name : names) {
    for (auto & tok : ontology::tokenize(name)) {
      push(std::move(tok));
    }
  }
  return out;
}

ontology::Concept annotate_concept(
  const ontology::Concept & concept_value, const KnowledgeStore & store)
{
  ontology::Concept out = concept_value;
  std::set<ontology::Annotation> have(out.annotations.begin(), out.annotations.end());
  const auto terms = lookup_terms(concept_value);
  for (const auto & term : terms) {
    for (const auto & e : store.incident(term)) {
      std::vector<std::string> others;
      if (e.start == term) {
        others.push_back(e.end);
      }
      if (e.end == term) {
        others.push_back(e.start);
      }
      for (const auto & other : others) {
        ontology::Annotation a{e.relation, other};
        if (have.insert(a).second) {
          out.annotations.push_back(std::move(a));
        }
      }
    }
  }
  return out;
}

ontology::Ontology annotate_ontology(
  const ontology::Ontology & onto, const KnowledgeStore & store)
{
  ontology::Ontology out = onto;
  for (const auto & [cid, c] : onto.concepts()) {
    out.concept_at(cid) = annotate_concept(c, store);
  }
  return out;
}

std::string relation_from_uri(std::string_view uri)
{
  const std::string_view prefix = "/r/";
  if (uri.substr(0, prefix.size()) != prefix) {
    return "";
  }
  std::string name(uri.substr(prefix.size()));
  if (name.empty()) {
    return "";
  }
  name[0] = static_cast<char>(std::tolower(static_cast<unsigned char>(name[0])));
  if (name == "label" || !ontology::is_known_relation(name)) {
    return "";
  }
  return name;
}

std::string term_from_uri(std::string_view uri)
{
  const std::string_view prefix = "/c/en/";
  if (uri.substr(0, prefix.size()) != prefix) {
    return "";
  }
  auto rest = uri.substr(prefix.size());
  return lower(rest.substr(0, rest.find('/')));
}

std::vector<KnowledgeEdge> parse_conceptnet_reply(std::string_view body)
{
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(body);
  } catch (const nlohmann::json::parse_error & e) {
    throw KnowledgeError(std::string("malformed knowledge reply: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("edges") || !doc.at("edges").is_array()) {
    throw KnowledgeError("malformed knowledge reply: no 'edges' array");
  }
  std::vector<KnowledgeEdge> out;
  for (const auto & je : doc.at("edges")) {
    try {
      const auto rel = relation_from_uri(je.at("rel").at("@id").get<std::string>());
      const auto start = term_from_uri(je.at("start").at("@id").get<std::string>());
      const auto end = term_from_uri(je.at("end").at("@id").get<std::string>());
      if (rel.empty() || start.empty() || end.empty()) {
        continue;
      }
      double weight = je.contains("weight") ? je.at("weight").get<double>() : 1.0;
      out.push_back({rel, start, end, weight});
    } catch (const nlohmann::json::exception & e) {
      throw KnowledgeError(std::string("malformed knowledge edge: ") + e.what());
    }
  }
  return out;
}

ConceptNetClient::ConceptNetClient(
  std::string endpoint, std::filesystem::path cache_path,
  std::chrono::milliseconds timeout)
: endpoint_(std::move(endpoint)), cache_path_(std::move(cache_path)), timeout_(timeout)
{
  while (!endpoint_.empty() && endpoint_.back() == '/') {
    endpoint_.pop_back();
  }
}

std::vector<KnowledgeEdge> ConceptNetClient::fetch_term(const std::string & term)
{
  const auto scheme_end = endpoint_.find("://");
  const auto host_begin = scheme_end == std::string::npos ? 0 : scheme_end + 3;
  const auto path_begin = endpoint_.find('/', host_begin);
  const std::string host = endpoint_.substr(0, path_begin);
  const std::string base = path_begin == std::string::npos ? "" : endpoint_.substr(path_begin);

  httplib::Client client(host);
  client.set_connection_timeout(timeout_);
  client.set_read_timeout(timeout_);
  auto res = client.Get(base + "/c/en/" + ontology::normalize_name(term));
  if (!res) {
    throw FetchError("cannot reach " + endpoint_ + ": " + httplib::to_string(res.error()));
  }
  if (res->status == 404) {
    return {};
  }
  if (res->status != 200) {
    throw FetchError(endpoint_ + " answered HTTP " + std::to_string(res->status));
  }
  auto edges = parse_conceptnet_reply(res->body);
  if (!cache_path_.empty() && !edges.empty()) {
    std::lock_guard<std::mutex> lock(cache_mutex_);
    append_edges(cache_path_, edges);
  }
  return edges;
}

bool augment_online(
  const std::vector<ontology::Ontology> & ontologies, ConceptNetClient & client,
  KnowledgeStore & store, std::vector<std::string> * warnings)
{
  std::set<std::string> terms;
  for (const auto & o : ontologies) {
    for (const auto & [cid, c] : o.concepts()) {
      for (auto & t : lookup_terms(c)) {
        terms.insert(std::move(t));
      }
    }
  }
  for (const auto & t : terms) {
    try {
      for (auto & e : client.fetch_term(t)) {
        store.add(std::move(e));
      }
    } catch (const FetchError & e) {
      if (warnings != nullptr) {
        warnings->push_back(std::string(e.what()) + "; using the local store");
      }
      return false;
    }
  }
  return true;
}

}  // namespace opportune::enrichment
