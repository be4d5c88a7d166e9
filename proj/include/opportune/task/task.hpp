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

#ifndef OPPORTUNE__TASK__TASK_HPP_
#define OPPORTUNE__TASK__TASK_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace opportune::task
{

/// Simulated time, in whole minutes from midnight.
using Minutes = std::int64_t;

inline constexpr const char * kRootType = "object";

class TaskError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// A predicate applied to arguments. Arguments starting with '?' are
/// variables; everything else is an object name.
struct Atom
{
  std::string predicate;
  std::vector<std::string> args;

  auto operator<=>(const Atom &) const = default;
  bool operator==(const Atom &) const = default;

  std::string str() const;
  bool mentions(std::string_view object) const;
};

using AtomSet = std::set<Atom>;

/// Parses "(pred a b)". Throws TaskError on malformed input.
Atom parse_atom(std::string_view text);

struct Literal
{
  Atom atom;
  bool positive = true;

  auto operator<=>(const Literal &) const = default;
  bool operator==(const Literal &) const = default;

  std::string str() const;
};

struct FluentTerm
{
  std::string function;
  std::vector<std::string> args;

  auto operator<=>(const FluentTerm &) const = default;
  bool operator==(const FluentTerm &) const = default;

  std::string str() const;
};

using FluentMap = std::map<FluentTerm, double>;

struct NumExpr
{
  enum class Kind { Number, Fluent, Duration, TotalTime, Add, Sub, Mul, Div };

  Kind kind = Kind::Number;
  double value = 0.0;
  FluentTerm fluent;
  std::vector<NumExpr> operands;

  bool operator==(const NumExpr &) const = default;

  static NumExpr number(double v);
  static NumExpr of_fluent(FluentTerm f);
  static NumExpr total_time();

  std::string str() const;
  bool references_total_time() const;
};

/// A list of admissible types. One entry for a plain type, several for
/// an (either ...) set.
using TypeExpr = std::vector<std::string>;

std::string type_expr_str(const TypeExpr & types);

class TypeHierarchy
{
public:
  TypeHierarchy();

  /// Adds "name - parent". Throws on duplicates or unknown parents.
  void add(const std::string & name, const std::string & parent = kRootType);

  bool contains(std::string_view name) const;
  std::optional<std::string> parent(std::string_view name) const;
  std::vector<std::string> children(std::string_view name) const;
  std::vector<std::string> names() const;
  std::size_t size() const {return entries_.size();}

  /// Types from `name` up to the root, `name` first.
  std::vector<std::string> chain(std::string_view name) const;

  /// True iff `type` equals `of` or descends from it.
  bool is_subtype(std::string_view type, std::string_view of) const;

  const std::map<std::string, std::optional<std::string>, std::less<>> & entries() const
  {
    return entries_;
  }

  bool operator==(const TypeHierarchy &) const = default;

private:
  std::map<std::string, std::optional<std::string>, std::less<>> entries_;
};

/// True iff `object_type` is a member of `expr` or a descendant of one.
bool type_compatible(
  std::string_view object_type, const TypeExpr & expr,
  const TypeHierarchy & types);

struct Parameter
{
  std::string name;
  TypeExpr types;

  bool operator==(const Parameter &) const = default;
};

struct PredicateSchema
{
  std::string name;
  std::vector<Parameter> params;

  bool operator==(const PredicateSchema &) const = default;
};

struct FunctionSchema
{
  std::string name;
  std::vector<Parameter> params;

  bool operator==(const FunctionSchema &) const = default;
};

enum class TimeSpec { AtStart, OverAll, AtEnd };

const char * time_spec_str(TimeSpec when);

struct Comparison
{
  std::string op;
  NumExpr lhs;
  NumExpr rhs;

  bool operator==(const Comparison &) const = default;
};

struct Condition
{
  TimeSpec when = TimeSpec::AtStart;
  std::variant<Literal, Comparison> body;

  bool operator==(const Condition &) const = default;
};

struct NumericEffect
{
  std::string op;  // increase | decrease | assign
  FluentTerm target;
  NumExpr value;

  bool operator==(const NumericEffect &) const = default;
};

struct Effect
{
  TimeSpec when = TimeSpec::AtEnd;
  std::variant<Literal, NumericEffect> body;

  bool operator==(const Effect &) const = default;
};

struct ActionSchema
{
  std::string name;
  std::vector<Parameter> params;
  NumExpr duration;
  std::vector<Condition> conditions;
  std::vector<Effect> effects;

  bool operator==(const ActionSchema &) const = default;
};

struct Domain
{
  std::string name;
  std::vector<std::string> requirements;
  TypeHierarchy types;
  std::vector<PredicateSchema> predicates;
  std::vector<FunctionSchema> functions;
  std::vector<ActionSchema> actions;

  bool operator==(const Domain &) const = default;

  const PredicateSchema * find_predicate(std::string_view name) const;
  const FunctionSchema * find_function(std::string_view name) const;
  const ActionSchema * find_action(std::string_view name) const;

  /// Adds "name - parent" to the type hierarchy.
  void add_type(const std::string & name, const std::string & parent = kRootType);
};

struct TimedLiteral
{
  Minutes time = 0;
  Literal literal;

  auto operator<=>(const TimedLiteral &) const = default;
  bool operator==(const TimedLiteral &) const = default;
};

struct Metric
{
  enum class Direction { Minimize, Maximize };

  Direction direction = Direction::Minimize;
  NumExpr expr = NumExpr::total_time();

  bool operator==(const Metric &) const = default;
};

/// Activity window of the instance; `start` is the current time when the
/// instance describes a state reached during execution.
struct Horizon
{
  Minutes start = 0;
  Minutes end = 1440;

  bool operator==(const Horizon &) const = default;
};

struct Problem
{
  std::string name;
  std::string domain_name;
  std::map<std::string, std::string, std::less<>> objects;
  AtomSet init;
  FluentMap fluents;
  std::vector<TimedLiteral> tils;  // sorted by time, stable
  std::vector<Atom> goals;
  std::optional<Metric> metric;
  Horizon horizon;

  bool operator==(const Problem &) const = default;

  /// Adds an object. Throws on a duplicate name or unknown type.
  void add_object(const std::string & name, const std::string & type, const Domain & domain);
  std::optional<std::string> type_of(std::string_view object) const;
  Metric effective_metric() const {return metric.value_or(Metric{});}
};

struct PlanningTask
{
  Domain domain;
  Problem problem;

  bool operator==(const PlanningTask &) const = default;
};

/// Checks schema references inside the domain: parameter types exist,
/// literals use declared predicates with type-compatible arguments, fluent
/// terms use declared functions.
void validate_domain(const Domain & domain);

/// Checks the cross references between problem and domain: objects have
/// declared types, atoms use declared predicates with compatible
/// arguments, timed literals lie inside the horizon.
void validate_problem(const Problem & problem, const Domain & domain);

/// Checks that an atom (ground or lifted against `params`) matches its
/// predicate schema.
void check_atom(
  const Atom & atom, const Domain & domain, const Problem * problem,
  const std::vector<Parameter> * params);

}  // namespace opportune::task

#endif  // OPPORTUNE__TASK__TASK_HPP_
