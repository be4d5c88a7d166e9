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

#include "sexpr.hpp"

#include <algorithm>
#include <cctype>

#include "opportune/task/pddl.hpp"

namespace opportune::task::detail
{

bool Node::is_symbol(std::string_view s) const
{
  return !is_list && keyword() == s;
}

std::string Node::keyword() const
{
  if (is_list) {
    return {};
  }
  std::string out = text;
  std::transform(
    out.begin(), out.end(), out.begin(),
    [](unsigned char c) {return static_cast<char>(std::tolower(c));});
  return out;
}

std::string Node::head() const
{
  if (!is_list || items.empty()) {
    return {};
  }
  return items.front().keyword();
}

void fail(const Node & at, const std::string & what)
{
  throw ParseError(what, at.line, at.column);
}

namespace
{

class Reader
{
public:
  explicit Reader(std::string_view text)
  : text_(text) {}

  std::vector<Node> read_all()
  {
    std::vector<Node> out;
    skip_space();
    while (pos_ < text_.size()) {
      out.push_back(read());
      skip_space();
    }
    return out;
  }

private:
  Node read()
  {
    skip_space();
    if (pos_ >= text_.size()) {
      throw ParseError("unexpected end of input", line_, column_);
    }
    Node node;
    node.line = line_;
    node.column = column_;
    char c = text_[pos_];
    if (c == ')') {
      throw ParseError("unbalanced ')'", line_, column_);
    }
    if (c == '(') {
      advance();
      node.is_list = true;
      skip_space();
      while (pos_ < text_.size() && text_[pos_] != ')') {
        node.items.push_back(read());
        skip_space();
      }
      if (pos_ >= text_.size()) {
        throw ParseError("missing ')'", node.line, node.column);
      }
      advance();
      return node;
    }
    std::size_t begin = pos_;
    while (pos_ < text_.size()) {
      char d = text_[pos_];
      if (std::isspace(static_cast<unsigned char>(d)) || d == '(' || d == ')' || d == ';') {
        break;
      }
      advance();
    }
    node.text = std::string(text_.substr(begin, pos_ - begin));
    return node;
  }

  void skip_space()
  {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == ';') {
        while (pos_ < text_.size() && text_[pos_] != '\n') {
          advance();
        }
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  void advance()
  {
    if (text_[pos_] == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    ++pos_;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int column_ = 1;
};

}  // namespace

std::vector<Node> read_sexprs(std::string_view text)
{
  return Reader(text).read_all();
}

}  // namespace opportune::task::detail
