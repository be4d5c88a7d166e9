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

#include "opportune/task/eval.hpp"

#include <cmath>

namespace opportune::task
{

Binding bind_parameters(const ActionSchema & action, const std::vector<std::string> & args)
{
  if (args.size() != action.params.size()) {
    throw TaskError(
            "action '" + action.name + "' expects " + std::to_string(action.params.size()) +
            " arguments, got " + std::to_string(args.size()));
  }
  Binding b;
  for (std::size_t i = 0; i < args.size(); ++i) {
    b[action.params[i].name] = args[i];
  }
  return b;
}

namespace
{

std::vector<std::string> substitute_args(const std::vector<std::string> & args, const Binding & binding)
{
  std::vector<std::string> out;
  out.reserve(args.size());
  for (const auto & a : args) {
    if (!a.empty() && a[0] == '?') {
      auto it = binding.find(a);
      if (it == binding.end()) {
        throw TaskError("unbound variable '" + a + "'");
      }
      out.push_back(it->second);
    } else {
      out.push_back(a);
    }
  }
  return out;
}

}  // namespace

Atom substitute(const Atom & atom, const Binding & binding)
{
  return Atom{atom.predicate, substitute_args(atom.args, binding)};
}

FluentTerm substitute(const FluentTerm & term, const Binding & binding)
{
  return FluentTerm{term.function, substitute_args(term.args, binding)};
}

std::optional<double> evaluate(const NumExpr & expr, const EvalContext & ctx)
{
  using Kind = NumExpr::Kind;
  switch (expr.kind) {
    case Kind::Number:
      return expr.value;
    case Kind::Duration:
      return ctx.duration;
    case Kind::TotalTime:
      return ctx.total_time;
    case Kind::Fluent: {
        if (ctx.fluents == nullptr) {
          return std::nullopt;
        }
        FluentTerm term = ctx.binding ? substitute(expr.fluent, *ctx.binding) : expr.fluent;
        auto it = ctx.fluents->find(term);
        if (it == ctx.fluents->end()) {
          return std::nullopt;
        }
        return it->second;
      }
    default:
      break;
  }
  auto lhs = evaluate(expr.operands.at(0), ctx);
  auto rhs = evaluate(expr.operands.at(1), ctx);
  if (!lhs || !rhs) {
    return std::nullopt;
  }
  switch (expr.kind) {
    case Kind::Add:
      return *lhs + *rhs;
    case Kind::Sub:
      return *lhs - *rhs;
    case Kind::Mul:
      return *lhs * *rhs;
    case Kind::Div:
      if (*rhs == 0.0) {
        return std::nullopt;
      }
      return *lhs / *rhs;
    default:
      return std::nullopt;
  }
}

bool compare(const std::string & op, double lhs, double rhs)
{
  if (op == "<") {
    return lhs < rhs;
  }
  if (op == "<=") {
    return lhs <= rhs;
  }
  if (op == ">") {
    return lhs > rhs;
  }
  if (op == ">=") {
    return lhs >= rhs;
  }
  if (op == "=") {
    return std::fabs(lhs - rhs) < 1e-9;
  }
  throw TaskError("unknown comparison '" + op + "'");
}

std::vector<Literal> GroundAction::conditions(TimeSpec when) const
{
  std::vector<Literal> out;
  for (const auto & c : schema->conditions) {
    if (c.when != when) {
      continue;
    }
    if (const auto * lit = std::get_if<Literal>(&c.body)) {
      out.push_back(Literal{substitute(lit->atom, binding), lit->positive});
    }
  }
  return out;
}

std::vector<Comparison> GroundAction::comparisons(TimeSpec when) const
{
  std::vector<Comparison> out;
  for (const auto & c : schema->conditions) {
    if (c.when == when) {
      if (const auto * cmp = std::get_if<Comparison>(&c.body)) {
        out.push_back(*cmp);
      }
    }
  }
  return out;
}

std::vector<Literal> GroundAction::literal_effects(TimeSpec when) const
{
  std::vector<Literal> out;
  for (const auto & e : schema->effects) {
    if (e.when != when) {
      continue;
    }
    if (const auto * lit = std::get_if<Literal>(&e.body)) {
      out.push_back(Literal{substitute(lit->atom, binding), lit->positive});
    }
  }
  return out;
}

std::vector<NumericEffect> GroundAction::numeric_effects(TimeSpec when) const
{
  std::vector<NumericEffect> out;
  for (const auto & e : schema->effects) {
    if (e.when == when) {
      if (const auto * num = std::get_if<NumericEffect>(&e.body)) {
        out.push_back(*num);
      }
    }
  }
  return out;
}

GroundAction ground(const Domain & domain, const std::string & action, const std::vector<std::string> & args)
{
  const auto * schema = domain.find_action(action);
  if (schema == nullptr) {
    throw TaskError("unknown action '" + action + "'");
  }
  GroundAction g;
  g.schema = schema;
  g.args = args;
  g.binding = bind_parameters(*schema, args);
  return g;
}

void apply_effects(
  const GroundAction & action, TimeSpec when, AtomSet & atoms, FluentMap & fluents,
  double duration)
{
  auto lits = action.literal_effects(when);
  for (const auto & l : lits) {
    if (!l.positive) {
      atoms.erase(l.atom);
    }
  }
  for (const auto & l : lits) {
    if (l.positive) {
      atoms.insert(l.atom);
    }
  }
  // Numeric right-hand sides read the fluents from before this effect set.
  const FluentMap before = fluents;
  EvalContext ctx{&before, &action.binding, duration, std::nullopt};
  for (const auto & n : action.numeric_effects(when)) {
    FluentTerm target = substitute(n.target, action.binding);
    auto value = evaluate(n.value, ctx);
    if (!value) {
      throw TaskError("numeric effect on " + target.str() + " has an undefined value");
    }
    if (n.op == "assign") {
      fluents[target] = *value;
      continue;
    }
    auto it = before.find(target);
    if (it == before.end()) {
      throw TaskError("numeric effect " + n.op + " on undefined fluent " + target.str());
    }
    fluents[target] = n.op == "increase" ? fluents[target] + *value : fluents[target] - *value;
  }
}

bool holds(const Literal & literal, const AtomSet & atoms)
{
  return (atoms.count(literal.atom) != 0) == literal.positive;
}

}  // namespace opportune::task
