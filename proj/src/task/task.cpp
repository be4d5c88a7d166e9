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

#include "opportune/task/task.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "sexpr.hpp"

namespace opportune::task
{

namespace
{

std::string format_number(double v)
{
  if (std::isfinite(v) && v == std::floor(v) && std::fabs(v) < 1e15) {
    return std::to_string(static_cast<long long>(v));
  }
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

std::string join_call(const std::string & head, const std::vector<std::string> & args)
{
  std::string out = "(" + head;
  for (const auto & a : args) {
    out += " ";
    out += a;
  }
  out += ")";
  return out;
}

}  // namespace

std::string Atom::str() const
{
  return join_call(predicate, args);
}

bool Atom::mentions(std::string_view object) const
{
  return std::find(args.begin(), args.end(), object) != args.end();
}

Atom parse_atom(std::string_view text)
{
  std::vector<detail::Node> nodes;
  try {
    nodes = detail::read_sexprs(text);
  } catch (const TaskError & e) {
    throw TaskError("malformed atom '" + std::string(text) + "': " + e.what());
  }
  if (nodes.size() != 1 || !nodes[0].is_list || nodes[0].items.empty()) {
    throw TaskError("malformed atom '" + std::string(text) + "'");
  }
  Atom atom;
  for (const auto & item : nodes[0].items) {
    if (item.is_list) {
      throw TaskError("nested list in atom '" + std::string(text) + "'");
    }
  }
  atom.predicate = nodes[0].items[0].text;
  for (std::size_t i = 1; i < nodes[0].items.size(); ++i) {
    atom.args.push_back(nodes[0].items[i].text);
  }
  return atom;
}

std::string Literal::str() const
{
  return positive ? atom.str() : "(not " + atom.str() + ")";
}

std::string FluentTerm::str() const
{
  return join_call(function, args);
}

NumExpr NumExpr::number(double v)
{
  NumExpr e;
  e.kind = Kind::Number;
  e.value = v;
  return e;
}

NumExpr NumExpr::of_fluent(FluentTerm f)
{
  NumExpr e;
  e.kind = Kind::Fluent;
  e.fluent = std::move(f);
  return e;
}

NumExpr NumExpr::total_time()
{
  NumExpr e;
  e.kind = Kind::TotalTime;
  return e;
}

std::string NumExpr::str() const
{
  switch (kind) {
    case Kind::Number:
      return format_number(value);
    case Kind::Fluent:
      return fluent.str();
    case Kind::Duration:
      return "?duration";
    case Kind::TotalTime:
      return "(total-time)";
    default:
      break;
  }
  const char * op = kind == Kind::Add ? "+" : kind == Kind::Sub ? "-" : kind == Kind::Mul ? "*" : "/";
  std::string out = std::string("(") + op;
  for (const auto & o : operands) {
    out += " " + o.str();
  }
  return out + ")";
}

bool NumExpr::references_total_time() const
{
  if (kind == Kind::TotalTime) {
    return true;
  }
  return std::any_of(
    operands.begin(), operands.end(),
    [](const NumExpr & o) {return o.references_total_time();});
}

std::string type_expr_str(const TypeExpr & types)
{
  if (types.size() == 1) {
    return types.front();
  }
  std::string out = "(either";
  for (const auto & t : types) {
    out += " " + t;
  }
  return out + ")";
}

const char * time_spec_str(TimeSpec when)
{
  switch (when) {
    case TimeSpec::AtStart:
      return "at start";
    case TimeSpec::OverAll:
      return "over all";
    case TimeSpec::AtEnd:
      return "at end";
  }
  return "?";
}

TypeHierarchy::TypeHierarchy()
{
  entries_.emplace(kRootType, std::nullopt);
}

void TypeHierarchy::add(const std::string & name, const std::string & parent)
{
  if (name.empty()) {
    throw TaskError("empty type name");
  }
  if (contains(name)) {
    throw TaskError("duplicate type '" + name + "'");
  }
  if (!contains(parent)) {
    throw TaskError("unknown parent type '" + parent + "' for '" + name + "'");
  }
  entries_.emplace(name, parent);
}

bool TypeHierarchy::contains(std::string_view name) const
{
  return entries_.find(name) != entries_.end();
}

std::optional<std::string> TypeHierarchy::parent(std::string_view name) const
{
  auto it = entries_.find(name);
  if (it == entries_.end()) {
    throw TaskError("unknown type '" + std::string(name) + "'");
  }
  return it->second;
}

std::vector<std::string> TypeHierarchy::children(std::string_view name) const
{
  std::vector<std::string> out;
  for (const auto & [type, parent] : entries_) {
    if (parent && *parent == name) {
      out.push_back(type);
    }
  }
  return out;
}

std::vector<std::string> TypeHierarchy::names() const
{
  std::vector<std::string> out;
  out.reserve(entries_.size());
  for (const auto & entry : entries_) {
    out.push_back(entry.first);
  }
  return out;
}

std::vector<std::string> TypeHierarchy::chain(std::string_view name) const
{
  std::vector<std::string> out;
  std::optional<std::string> cur = std::string(name);
  if (!contains(name)) {
    throw TaskError("unknown type '" + std::string(name) + "'");
  }
  while (cur) {
    out.push_back(*cur);
    if (out.size() > entries_.size()) {
      throw TaskError("cycle in type hierarchy at '" + std::string(name) + "'");
    }
    cur = parent(*cur);
  }
  return out;
}

bool TypeHierarchy::is_subtype(std::string_view type, std::string_view of) const
{
  if (!contains(of)) {
    throw TaskError("unknown type '" + std::string(of) + "'");
  }
  auto c = chain(type);
  return std::find(c.begin(), c.end(), of) != c.end();
}

bool type_compatible(
  std::string_view object_type, const TypeExpr & expr,
  const TypeHierarchy & types)
{
  if (!types.contains(object_type)) {
    throw TaskError("unknown type '" + std::string(object_type) + "'");
  }
  return std::any_of(
    expr.begin(), expr.end(),
    [&](const std::string & t) {return types.is_subtype(object_type, t);});
}

const PredicateSchema * Domain::find_predicate(std::string_view n) const
{
  for (const auto & p : predicates) {
    if (p.name == n) {
      return &p;
    }
  }
  return nullptr;
}

const FunctionSchema * Domain::find_function(std::string_view n) const
{
  for (const auto & f : functions) {
    if (f.name == n) {
      return &f;
    }
  }
  return nullptr;
}

const ActionSchema * Domain::find_action(std::string_view n) const
{
  for (const auto & a : actions) {
    if (a.name == n) {
      return &a;
    }
  }
  return nullptr;
}

void Domain::add_type(const std::string & type, const std::string & parent)
{
  types.add(type, parent);
}

void Problem::add_object(const std::string & object, const std::string & type, const Domain & domain)
{
  if (objects.count(object) != 0) {
    throw TaskError("duplicate object '" + object + "'");
  }
  if (!domain.types.contains(type)) {
    throw TaskError("object '" + object + "' has undeclared type '" + type + "'");
  }
  objects.emplace(object, type);
}

std::optional<std::string> Problem::type_of(std::string_view object) const
{
  auto it = objects.find(object);
  if (it == objects.end()) {
    return std::nullopt;
  }
  return it->second;
}

namespace
{

void check_args(
  const std::string & what, const std::vector<std::string> & args,
  const std::vector<Parameter> & schema_params, const Domain & domain,
  const Problem * problem, const std::vector<Parameter> * params)
{
  if (args.size() != schema_params.size()) {
    throw TaskError(
            what + " expects " + std::to_string(schema_params.size()) + " arguments, got " +
            std::to_string(args.size()));
  }
  for (std::size_t i = 0; i < args.size(); ++i) {
    const auto & arg = args[i];
    const auto & expected = schema_params[i].types;
    if (!arg.empty() && arg[0] == '?') {
      if (params == nullptr) {
        throw TaskError(what + " has variable '" + arg + "' outside an action");
      }
      auto it = std::find_if(
        params->begin(), params->end(),
        [&](const Parameter & p) {return p.name == arg;});
      if (it == params->end()) {
        throw TaskError(what + " uses undeclared parameter '" + arg + "'");
      }
      for (const auto & t : it->types) {
        if (!type_compatible(t, expected, domain.types)) {
          throw TaskError(
                  what + ": parameter '" + arg + "' of type " + t + " is not compatible with " +
                  type_expr_str(expected));
        }
      }
      continue;
    }
    if (problem == nullptr) {
      throw TaskError(what + " references object '" + arg + "' without a problem");
    }
    auto type = problem->type_of(arg);
    if (!type) {
      throw TaskError(what + " references undeclared object '" + arg + "'");
    }
    if (!type_compatible(*type, expected, domain.types)) {
      throw TaskError(
              what + ": object '" + arg + "' of type " + *type + " is not compatible with " +
              type_expr_str(expected));
    }
  }
}

void check_fluent(
  const FluentTerm & f, const Domain & domain, const Problem * problem,
  const std::vector<Parameter> * params)
{
  const auto * schema = domain.find_function(f.function);
  if (schema == nullptr) {
    throw TaskError("unknown function '" + f.function + "'");
  }
  check_args(f.str(), f.args, schema->params, domain, problem, params);
}

void check_expr(
  const NumExpr & e, const Domain & domain, const Problem * problem,
  const std::vector<Parameter> * params)
{
  if (e.kind == NumExpr::Kind::Fluent) {
    check_fluent(e.fluent, domain, problem, params);
  }
  for (const auto & o : e.operands) {
    check_expr(o, domain, problem, params);
  }
}

}  // namespace

void check_atom(
  const Atom & atom, const Domain & domain, const Problem * problem,
  const std::vector<Parameter> * params)
{
  const auto * schema = domain.find_predicate(atom.predicate);
  if (schema == nullptr) {
    throw TaskError("unknown predicate '" + atom.predicate + "' in " + atom.str());
  }
  check_args(atom.str(), atom.args, schema->params, domain, problem, params);
}

void validate_domain(const Domain & domain)
{
  auto check_params = [&](const std::string & owner, const std::vector<Parameter> & params) {
      std::set<std::string> seen;
      for (const auto & p : params) {
        if (!seen.insert(p.name).second) {
          throw TaskError(owner + ": duplicate parameter '" + p.name + "'");
        }
        if (p.types.empty()) {
          throw TaskError(owner + ": parameter '" + p.name + "' has no type");
        }
        for (const auto & t : p.types) {
          if (!domain.types.contains(t)) {
            throw TaskError(owner + ": undeclared type '" + t + "'");
          }
        }
      }
    };
  std::set<std::string> names;
  for (const auto & p : domain.predicates) {
    if (!names.insert(p.name).second) {
      throw TaskError("duplicate predicate '" + p.name + "'");
    }
    check_params("predicate " + p.name, p.params);
  }
  names.clear();
  for (const auto & f : domain.functions) {
    if (!names.insert(f.name).second) {
      throw TaskError("duplicate function '" + f.name + "'");
    }
    check_params("function " + f.name, f.params);
  }
  names.clear();
  for (const auto & a : domain.actions) {
    if (!names.insert(a.name).second) {
      throw TaskError("duplicate action '" + a.name + "'");
    }
    const std::string owner = "action " + a.name;
    check_params(owner, a.params);
    check_expr(a.duration, domain, nullptr, &a.params);
    for (const auto & c : a.conditions) {
      if (const auto * lit = std::get_if<Literal>(&c.body)) {
        check_atom(lit->atom, domain, nullptr, &a.params);
      } else {
        const auto & cmp = std::get<Comparison>(c.body);
        check_expr(cmp.lhs, domain, nullptr, &a.params);
        check_expr(cmp.rhs, domain, nullptr, &a.params);
      }
    }
    for (const auto & e : a.effects) {
      if (const auto * lit = std::get_if<Literal>(&e.body)) {
        check_atom(lit->atom, domain, nullptr, &a.params);
      } else {
        const auto & num = std::get<NumericEffect>(e.body);
        check_fluent(num.target, domain, nullptr, &a.params);
        check_expr(num.value, domain, nullptr, &a.params);
      }
    }
  }
}

void validate_problem(const Problem & problem, const Domain & domain)
{
  for (const auto & [name, type] : problem.objects) {
    if (!domain.types.contains(type)) {
      throw TaskError("object '" + name + "' has undeclared type '" + type + "'");
    }
  }
  for (const auto & atom : problem.init) {
    check_atom(atom, domain, &problem, nullptr);
  }
  for (const auto & [term, value] : problem.fluents) {
    check_fluent(term, domain, &problem, nullptr);
  }
  if (problem.horizon.end < problem.horizon.start) {
    throw TaskError("horizon end precedes its start");
  }
  for (const auto & til : problem.tils) {
    check_atom(til.literal.atom, domain, &problem, nullptr);
    if (til.time < problem.horizon.start || til.time > problem.horizon.end) {
      throw TaskError(
              "timed literal " + til.literal.str() + " at " + std::to_string(til.time) +
              " lies outside the horizon");
    }
  }
  for (const auto & goal : problem.goals) {
    check_atom(goal, domain, &problem, nullptr);
  }
  if (problem.metric) {
    check_expr(problem.metric->expr, domain, &problem, nullptr);
  }
}

}  // namespace opportune::task
