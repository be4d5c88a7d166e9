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

#ifndef OPPORTUNE__ONTOLOGY__TOKENIZE_HPP_
#define OPPORTUNE__ONTOLOGY__TOKENIZE_HPP_

#include <string>
#include <string_view>
#include <vector>

namespace opportune::ontology
{

/// Splits on non-alphanumeric characters and on lower-to-upper case
/// boundaries, lowercases, and drops tokens shorter than two characters.
///
///   "Jimmy_Glass_Jazz_bar" -> jimmy glass jazz bar
///   "causesDesire"         -> causes desire
std::vector<std::string> tokenize(std::string_view text);

/// Tokens joined with '_'; used to compare identifiers written in
/// different styles ("Virgen_plaza", "VirgenPlaza", "virgen plaza").
std::string normalize_name(std::string_view text);

}  // namespace opportune::ontology

#endif  // OPPORTUNE__ONTOLOGY__TOKENIZE_HPP_
