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

#ifndef OPPORTUNE__TASK__EVAL_HPP_
#define OPPORTUNE__TASK__EVAL_HPP_

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "opportune/task/task.hpp"

namespace opportune::task
{

using Binding = std::map<std::string, std::string>;

Binding bind_parameters(const ActionSchema & action, const std::vector<std::string> & args);

Atom substitute(const Atom & atom, const Binding & binding);
FluentTerm substitute(const FluentTerm & term, const Binding & binding);

struct EvalContext
{
  const FluentMap * fluents = nullptr;
  const Binding * binding = nullptr;
  std::optional<double> duration;
  std::optional<double> total_time;
};

/// Evaluates a numeric expression. Undefined fluents yield nullopt.
std::optional<double> evaluate(const NumExpr & expr, const EvalContext & ctx);

bool compare(const std::string & op, double lhs, double rhs);

/// A durative action with its parameters bound to objects.
struct GroundAction
{
  const ActionSchema * schema = nullptr;
  std::vector<std::string> args;
  Binding binding;

  std::vector<Literal> conditions(TimeSpec when) const;
  std::vector<Comparison> comparisons(TimeSpec when) const;
  std::vector<Literal> literal_effects(TimeSpec when) const;
  std::vector<NumericEffect> numeric_effects(TimeSpec when) const;
};

/// Throws TaskError when the action is unknown or the arity is wrong.
GroundAction ground(const Domain & domain, const std::string & action, const std::vector<std::string> & args);

/// Applies literal effects (deletes before adds) and numeric effects.
void apply_effects(
  const GroundAction & action, TimeSpec when, AtomSet & atoms, FluentMap & fluents,
  double duration);

bool holds(const Literal & literal, const AtomSet & atoms);

}  // namespace opportune::task

#endif  // OPPORTUNE__TASK__EVAL_HPP_
