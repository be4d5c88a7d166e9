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

#include "opportune/ontology/tokenize.hpp"

#include <cctype>

namespace opportune::ontology
{

std::vector<std::string> tokenize(std::string_view text)
{
  std::vector<std::string> out;
  std::string cur;
  auto flush = [&]() {
      if (cur.size() >= 2) {
        out.push_back(cur);
      }
      cur.clear();
    };
  char prev = '\0';
  for (char ch : text) {
    const auto c = static_cast<unsigned char>(ch);
    if (!std::isalnum(c)) {
      flush();
      prev = '\0';
      continue;
    }
    if (std::isupper(c) && std::islower(static_cast<unsigned char>(prev))) {
      flush();
    }
    cur.push_back(static_cast<char>(std::tolower(c)));
    prev = ch;
  }
  flush();
  return out;
}

std::string normalize_name(std::string_view text)
{
  std::string out;
  for (const auto & t : tokenize(text)) {
    if (!out.empty()) {
      out.push_back('_');
    }
    out += t;
  }
  return out;
}

}  // namespace opportune::ontology
