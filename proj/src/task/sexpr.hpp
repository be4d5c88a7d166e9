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

#ifndef TASK__SEXPR_HPP_
#define TASK__SEXPR_HPP_

#include <string>
#include <string_view>
#include <vector>

namespace opportune::task::detail
{

struct Node
{
  bool is_list = false;
  std::string text;
  std::vector<Node> items;
  int line = 1;
  int column = 1;

  bool is_symbol(std::string_view s) const;
  /// Lower-cased symbol text; empty for lists.
  std::string keyword() const;
  /// Keyword of the head item of a list, or empty.
  std::string head() const;
};

/// Reads every top-level s-expression in `text`. ';' starts a comment.
std::vector<Node> read_sexprs(std::string_view text);

[[noreturn]] void fail(const Node & at, const std::string & what);

}  // namespace opportune::task::detail

#endif  // TASK__SEXPR_HPP_
