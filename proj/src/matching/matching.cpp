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

#include "opportune/matching/matching.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <tuple>

#include "json.hpp"
#include "opportune/ontology/tokenize.hpp"

namespace opportune::matching
{

using ontology::tokenize;

TermBag term_bag(const ontology::Ontology & onto)
{
  std::map<std::string, std::size_t> counts;
  std::size_t total = 0;
  auto add = [&](std::string_view text) {
      for (auto & t : tokenize(text)) {
        ++counts[t];
        ++total;
      }
    };
  for (const auto & [cid, c] : onto.concepts()) {
    add(c.id);
    for (const auto & l : c.labels) {
      add(l);
    }
    for (const auto & a : c.annotations) {
      add(a.rel);
      add(a.val);
    }
  }
  TermBag bag;
  for (const auto & [t, n] : counts) {
    bag[t] = static_cast<double>(n) / static_cast<double>(total);
  }
  return bag;
}

double cosine_similarity(const TermBag & a, const TermBag & b)
{
  double dot = 0.0;
  double na = 0.0;
  double nb = 0.0;
  for (const auto & [t, w] : a) {
    na += w * w;
    auto it = b.find(t);
    if (it != b.end()) {
      dot += w * it->second;
    }
  }
  for (const auto & [t, w] : b) {
    nb += w * w;
  }
  if (na == 0.0 || nb == 0.0) {
    return 0.0;
  }
  return std::clamp(dot / (std::sqrt(na) * std::sqrt(nb)), 0.0, 1.0);
}

std::vector<RankedOntology> rank_similar(
  const ontology::Ontology & reference, const ontology::Repository & repo, double threshold)
{
  const auto ref = term_bag(reference);
  std::vector<RankedOntology> out;
  for (const auto & m : repo.members) {
    const double s = cosine_similarity(ref, term_bag(m));
    out.push_back({m.id(), s, s >= threshold});
  }
  std::sort(
    out.begin(), out.end(), [](const RankedOntology & x, const RankedOntology & y) {
      return x.score != y.score ? x.score > y.score : x.id < y.id;
    });
  return out;
}

ontology::Repository filter_similar(
  const ontology::Ontology & reference, const ontology::Repository & repo, double threshold)
{
  ontology::Repository out;
  for (const auto & r : rank_similar(reference, repo, threshold)) {
    if (r.selected) {
      out.members.push_back(*repo.find(r.id));
    }
  }
  return out;
}

double jaro(std::string_view a, std::string_view b)
{
  if (a.empty() && b.empty()) {
    return 1.0;
  }
  if (a.empty() || b.empty()) {
    return 0.0;
  }
  const std::size_t window = std::max(a.size(), b.size()) / 2 > 0 ?
    std::max(a.size(), b.size()) / 2 - 1 : 0;
  std::vector<bool> ma(a.size(), false);
  std::vector<bool> mb(b.size(), false);
  std::size_t matches = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const std::size_t lo = i > window ? i - window : 0;
    const std::size_t hi = std::min(b.size(), i + window + 1);
    for (std::size_t j = lo; j < hi; ++j) {
      if (!mb[j] && a[i] == b[j]) {
        ma[i] = mb[j] = true;
        ++matches;
        break;
      }
    }
  }
  if (matches == 0) {
    return 0.0;
  }
  std::size_t transpositions = 0;
  std::size_t k = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!ma[i]) {
      continue;
    }
    while (!mb[k]) {
      ++k;
    }
    if (a[i] != b[k]) {
      ++transpositions;
    }
    ++k;
  }
  const double m = static_cast<double>(matches);
  const double t = static_cast<double>(transpositions) / 2.0;
  return (m / static_cast<double>(a.size()) + m / static_cast<double>(b.size()) + (m - t) / m) /
         3.0;
}

double jaro_winkler(std::string_view a, std::string_view b)
{
  const double j = jaro(a, b);
  if (j <= 0.7) {
    return j;
  }
  std::size_t prefix = 0;
  const std::size_t limit = std::min<std::size_t>({4, a.size(), b.size()});
  while (prefix < limit && a[prefix] == b[prefix]) {
    ++prefix;
  }
  return j + static_cast<double>(prefix) * 0.1 * (1.0 - j);
}

SoftTfIdf::SoftTfIdf(const std::vector<std::vector<std::string>> & corpus)
: n_docs_(corpus.size())
{
  for (const auto & doc : corpus) {
    std::set<std::string> uniq(doc.begin(), doc.end());
    for (const auto & t : uniq) {
      ++df_[t];
    }
  }
}

double SoftTfIdf::idf(const std::string & token) const
{
  auto it = df_.find(token);
  const double df = it == df_.end() ? 0.0 : static_cast<double>(it->second);
  return std::log((static_cast<double>(n_docs_) + 1.0) / (df + 1.0)) + 1.0;
}

std::map<std::string, double> SoftTfIdf::weights(const std::vector<std::string> & doc) const
{
  std::map<std::string, double> tf;
  for (const auto & t : doc) {
    tf[t] += 1.0;
  }
  double norm = 0.0;
  for (auto & [t, w] : tf) {
    w *= idf(t);
    norm += w * w;
  }
  norm = std::sqrt(norm);
  if (norm > 0.0) {
    for (auto & [t, w] : tf) {
      w /= norm;
    }
  }
  return tf;
}

double SoftTfIdf::score(
  const std::vector<std::string> & s, const std::vector<std::string> & t, double theta) const
{
  if (s.empty() || t.empty()) {
    return 0.0;
  }
  const auto vs = weights(s);
  const auto vt = weights(t);
  double total = 0.0;
  for (const auto & [w, ws] : vs) {
    double best = -1.0;
    double best_weight = 0.0;
    for (const auto & [v, wt] : vt) {
      const double sim = w == v ? 1.0 : jaro_winkler(w, v);
      if (sim > best) {
        best = sim;
        best_weight = wt;
      }
    }
    if (best >= theta) {
      total += ws * best_weight * best;
    }
  }
  return std::clamp(total, 0.0, 1.0);
}

std::vector<std::string> class_document(const ontology::Concept & concept_value)
{
  std::vector<std::string> doc = tokenize(concept_value.id);
  for (const auto & l : concept_value.labels) {
    auto toks = tokenize(l);
    doc.insert(doc.end(), toks.begin(), toks.end());
  }
  for (const auto & a : concept_value.annotations) {
    auto toks = tokenize(a.val);
    doc.insert(doc.end(), toks.begin(), toks.end());
  }
  return doc;
}

const Correspondence * Alignment::match_for(std::string_view source) const
{
  for (const auto & m : matches) {
    if (m.source == source) {
      return &m;
    }
  }
  return nullptr;
}

Alignment align_classes(
  const ontology::Ontology & reference, const ontology::Ontology & other,
  const std::vector<std::string> & fragment, const MatchConfig & config)
{
  std::vector<std::vector<std::string>> corpus;
  std::map<std::string, std::vector<std::string>> ref_docs;
  for (const auto & [cid, c] : reference.concepts()) {
    ref_docs[cid] = class_document(c);
    corpus.push_back(ref_docs[cid]);
  }
  std::map<std::string, std::vector<std::string>> other_docs;
  for (const auto & [cid, c] : other.concepts()) {
    other_docs[cid] = class_document(c);
    corpus.push_back(other_docs[cid]);
  }
  const SoftTfIdf measure(corpus);

  struct Scored
  {
    std::string source;
    std::string target;
    double score;
  };
  std::vector<Scored> pairs;
  std::map<std::string, Scored> best_of;
  for (const auto & src : fragment) {
    const auto & doc = other_docs.at(other.concept_at(src).id);
    for (const auto & [tgt, tdoc] : ref_docs) {
      Scored s{src, tgt, measure.score(doc, tdoc, config.inner_theta)};
      auto it = best_of.find(src);
      if (it == best_of.end() || s.score > it->second.score) {
        best_of.insert_or_assign(src, s);
      }
      if (s.score >= config.class_threshold) {
        pairs.push_back(s);
      }
    }
  }
  std::sort(
    pairs.begin(), pairs.end(), [](const Scored & a, const Scored & b) {
      return std::tie(b.score, a.source, a.target) < std::tie(a.score, b.source, b.target);
    });

  Alignment out;
  std::set<std::string> used_src;
  std::set<std::string> used_tgt;
  for (const auto & p : pairs) {
    if (used_src.count(p.source) != 0 || used_tgt.count(p.target) != 0) {
      continue;
    }
    used_src.insert(p.source);
    used_tgt.insert(p.target);
    out.matches.push_back({p.source, p.target, p.score});
  }
  for (const auto & src : fragment) {
    if (used_src.count(src) != 0) {
      continue;
    }
    auto it = best_of.find(src);
    if (it == best_of.end()) {
      continue;
    }
    const auto & b = it->second;
    out.rejected.push_back(
      {src, b.target, b.score,
        b.score < config.class_threshold ? "below class threshold" :
        "target already assigned to a higher-scoring concept"});
  }
  return out;
}

const char * kind_str(PositionOutcome::Kind kind)
{
  switch (kind) {
    case PositionOutcome::Kind::EquivalentTo:
      return "EquivalentTo";
    case PositionOutcome::Kind::NewChildOf:
      return "NewChildOf";
    case PositionOutcome::Kind::Unplaced:
      return "Unplaced";
  }
  return "Unplaced";
}

Positioning position_type(
  const ontology::Ontology & reference, const ontology::Ontology & other,
  const std::string & c_t, const MatchConfig & config)
{
  const auto & concept_t = other.concept_at(c_t);
  Positioning pos;
  pos.concept_id = c_t;
  pos.parent = concept_t.parent;
  pos.siblings = other.siblings(c_t);

  std::vector<std::string> fragment{c_t};
  if (pos.parent) {
    fragment.push_back(*pos.parent);
  }
  fragment.insert(fragment.end(), pos.siblings.begin(), pos.siblings.end());
  pos.alignment = align_classes(reference, other, fragment, config);

  using Kind = PositionOutcome::Kind;
  if (const auto * m = pos.alignment.match_for(c_t)) {
    pos.outcome = {Kind::EquivalentTo, m->target,
      "'" + c_t + "' matches '" + m->target + "'", 1};
    return pos;
  }
  if (pos.parent) {
    if (const auto * m = pos.alignment.match_for(*pos.parent)) {
      pos.outcome = {Kind::NewChildOf, m->target,
        "parent '" + *pos.parent + "' matches '" + m->target + "'", 2};
      return pos;
    }
  }

  std::set<std::string> parents;
  std::size_t matched = 0;
  for (const auto & s : pos.siblings) {
    if (const auto * m = pos.alignment.match_for(s)) {
      ++matched;
      const auto & parent = reference.concept_at(m->target).parent;
      parents.insert(parent ? *parent : std::string());
    }
  }
  const double fraction = pos.siblings.empty() ? 0.0 :
    static_cast<double>(matched) / static_cast<double>(pos.siblings.size());
  const std::string counts = std::to_string(matched) + " of " +
    std::to_string(pos.siblings.size()) + " siblings matched";
  if (matched > 0 && fraction >= config.sibling_threshold) {
    if (parents.size() == 1 && !parents.begin()->empty()) {
      pos.outcome = {Kind::NewChildOf, *parents.begin(),
        counts + ", all under '" + *parents.begin() + "'", 3};
      return pos;
    }
    pos.outcome = {Kind::Unplaced, "", counts + " but under different parents", 4};
    return pos;
  }
  pos.outcome = {Kind::Unplaced, "",
    "no match for '" + c_t + "' or its parent; " + counts, 4};
  return pos;
}

std::string alignment_report(
  const ontology::Ontology & reference, const ontology::Ontology & other,
  const Positioning & positioning, int indent)
{
  nlohmann::json doc;
  doc["reference"] = reference.id();
  doc["source"] = other.id();
  doc["concept"] = positioning.concept_id;
  doc["parent"] = positioning.parent ? nlohmann::json(*positioning.parent) : nlohmann::json();
  doc["siblings"] = positioning.siblings;
  auto & corr = doc["correspondences"] = nlohmann::json::array();
  for (const auto & m : positioning.alignment.matches) {
    corr.push_back({{"source", m.source}, {"target", m.target}, {"score", m.score}});
  }
  auto & rej = doc["rejected"] = nlohmann::json::array();
  for (const auto & r : positioning.alignment.rejected) {
    rej.push_back(
      {{"source", r.source}, {"best_target", r.target}, {"score", r.score}, {"reason", r.why}});
  }
  doc["rule"] = positioning.outcome.rule;
  doc["outcome"] = {
    {"kind", kind_str(positioning.outcome.kind)},
    {"concept", positioning.outcome.concept_id},
    {"reason", positioning.outcome.reason}};
  return doc.dump(indent) + "\n";
}

}  // namespace opportune::matching
