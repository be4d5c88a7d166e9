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

#ifndef OPPORTUNE_TESTS__FIXTURES_HPP_
#define OPPORTUNE_TESTS__FIXTURES_HPP_

#include <filesystem>
#include <string>

#include "opportune/enrichment/knowledge.hpp"
#include "opportune/ontology/ontology.hpp"
#include "opportune/task/pddl.hpp"

namespace fixtures
{

inline std::filesystem::path data_dir()
{
  return std::filesystem::path(OPPORTUNE_DATA_DIR);
}

inline std::filesystem::path valencia(const std::string & file)
{
  return data_dir() / "valencia" / file;
}

inline opportune::task::PlanningTask valencia_task()
{
  return opportune::task::load_task(valencia("domain.pddl"), valencia("problem.pddl"));
}

inline opportune::enrichment::KnowledgeStore knowledge_store()
{
  return opportune::enrichment::load_edges(valencia("conceptnet.tsv"));
}

/// The five-member repository, enriched with the bundled store.
inline opportune::ontology::Repository enriched_repository()
{
  auto store = knowledge_store();
  auto repo = opportune::ontology::load_repository(valencia("repo"));
  for (auto & m : repo.members) {
    m = opportune::enrichment::annotate_ontology(m, store);
  }
  return repo;
}

inline opportune::ontology::Ontology enriched_task_ontology()
{
  return opportune::enrichment::annotate_ontology(
    opportune::ontology::from_task(valencia_task(), "A"), knowledge_store());
}

}  // namespace fixtures

#endif  // OPPORTUNE_TESTS__FIXTURES_HPP_
