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

#include "opportune/task/pddl.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <utility>

#include "sexpr.hpp"

namespace opportune::task
{

using detail::Node;
using detail::fail;

ParseError::ParseError(const std::string & what, int line, int column)
: TaskError(what + " (line " + std::to_string(line) + ", column " + std::to_string(column) + ")"),
  message_(what), line_(line), column_(column)
{
}

namespace
{

using TypedList = std::vector<std::pair<std::string, TypeExpr>>;

const Node & expect_list(const Node & n, const std::string & what)
{
  if (!n.is_list) {
    fail(n, "expected " + what);
  }
  return n;
}

const std::string & expect_symbol(const Node & n, const std::string & what)
{
  if (n.is_list || n.text.empty()) {
    fail(n, "expected " + what);
  }
  return n.text;
}

std::optional<double> as_number(const Node & n)
{
  if (n.is_list || n.text.empty()) {
    return std::nullopt;
  }
  const char * first = n.text.data();
  const char * last = first + n.text.size();
  double v = 0;
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) {
    return std::nullopt;
  }
  return v;
}

Minutes as_minutes(const Node & n)
{
  auto v = as_number(n);
  if (!v) {
    fail(n, "expected a number of minutes");
  }
  if (*v != std::floor(*v)) {
    fail(n, "times must be whole minutes");
  }
  return static_cast<Minutes>(*v);
}

TypeExpr parse_type_expr(const Node & n)
{
  if (!n.is_list) {
    return {expect_symbol(n, "type")};
  }
  if (n.head() != "either" || n.items.size() < 2) {
    fail(n, "expected (either <type>...)");
  }
  TypeExpr out;
  for (std::size_t i = 1; i < n.items.size(); ++i) {
    out.push_back(expect_symbol(n.items[i], "type"));
  }
  return out;
}

// a b - t c - (either x y) d   ->   untyped names default to object
TypedList parse_typed_list(const std::vector<Node> & items, std::size_t from = 0)
{
  TypedList out;
  std::vector<std::string> pending;
  for (std::size_t i = from; i < items.size(); ++i) {
    const Node & item = items[i];
    if (item.is_symbol("-")) {
      if (pending.empty()) {
        fail(item, "'-' without preceding names");
      }
      if (i + 1 >= items.size()) {
        fail(item, "missing type after '-'");
      }
      TypeExpr type = parse_type_expr(items[++i]);
      for (auto & name : pending) {
        out.emplace_back(std::move(name), type);
      }
      pending.clear();
      continue;
    }
    pending.push_back(expect_symbol(item, "name"));
  }
  for (auto & name : pending) {
    out.emplace_back(std::move(name), TypeExpr{kRootType});
  }
  return out;
}

std::vector<Parameter> to_params(const TypedList & list)
{
  std::vector<Parameter> out;
  for (const auto & [name, type] : list) {
    out.push_back(Parameter{name, type});
  }
  return out;
}

class DomainReader
{
public:
  explicit DomainReader(Domain & d)
  : domain_(d) {}

  void read_types(const Node & section)
  {
    auto list = parse_typed_list(section.items, 1);
    std::vector<std::pair<std::string, std::string>> pending;
    std::set<std::string> declared;
    for (const auto & [name, type] : list) {
      if (type.size() != 1) {
        fail(section, "type '" + name + "' cannot have an either-parent");
      }
      if (name == kRootType) {
        continue;
      }
      if (!declared.insert(name).second) {
        fail(section, "duplicate type '" + name + "'");
      }
      pending.emplace_back(name, type.front());
    }
    // Parents may be declared after their children.
    while (!pending.empty()) {
      auto ready = std::find_if(
        pending.begin(), pending.end(),
        [&](const auto & e) {return domain_.types.contains(e.second);});
      if (ready == pending.end()) {
        const auto & e = pending.front();
        if (declared.count(e.second) == 0) {
          fail(section, "type '" + e.first + "' has undeclared parent '" + e.second + "'");
        }
        fail(section, "cycle in type hierarchy involving '" + e.first + "'");
      }
      domain_.types.add(ready->first, ready->second);
      pending.erase(ready);
    }
  }

  void read_predicates(const Node & section)
  {
    for (std::size_t i = 1; i < section.items.size(); ++i) {
      const Node & p = expect_list(section.items[i], "predicate declaration");
      if (p.items.empty()) {
        fail(p, "empty predicate declaration");
      }
      PredicateSchema schema;
      schema.name = expect_symbol(p.items[0], "predicate name");
      schema.params = to_params(parse_typed_list(p.items, 1));
      if (domain_.find_predicate(schema.name) != nullptr) {
        fail(p, "duplicate predicate '" + schema.name + "'");
      }
      domain_.predicates.push_back(std::move(schema));
    }
  }

  void read_functions(const Node & section)
  {
    for (std::size_t i = 1; i < section.items.size(); ++i) {
      const Node & f = section.items[i];
      if (f.is_symbol("-")) {
        if (i + 1 >= section.items.size() || !section.items[i + 1].is_symbol("number")) {
          fail(f, "only numeric functions are supported");
        }
        ++i;
        continue;
      }
      expect_list(f, "function declaration");
      if (f.items.empty()) {
        fail(f, "empty function declaration");
      }
      FunctionSchema schema;
      schema.name = expect_symbol(f.items[0], "function name");
      schema.params = to_params(parse_typed_list(f.items, 1));
      if (domain_.find_function(schema.name) != nullptr) {
        fail(f, "duplicate function '" + schema.name + "'");
      }
      domain_.functions.push_back(std::move(schema));
    }
  }

  void read_action(const Node & section)
  {
    if (section.items.size() < 2) {
      fail(section, "durative action without a name");
    }
    ActionSchema action;
    action.name = expect_symbol(section.items[1], "action name");
    if (domain_.find_action(action.name) != nullptr) {
      fail(section, "duplicate action '" + action.name + "'");
    }
    bool has_duration = false;
    for (std::size_t i = 2; i < section.items.size(); i += 2) {
      const Node & key = section.items[i];
      if (i + 1 >= section.items.size()) {
        fail(key, "missing value for " + key.text);
      }
      const Node & value = section.items[i + 1];
      const std::string k = key.keyword();
      if (k == ":parameters") {
        action.params = to_params(parse_typed_list(expect_list(value, "parameter list").items));
      } else if (k == ":duration") {
        if (value.head() != "=" || value.items.size() != 3 || !value.items[1].is_symbol("?duration")) {
          fail(value, "expected (= ?duration <expression>)");
        }
        action.duration = read_expr(value.items[2]);
        has_duration = true;
      } else if (k == ":condition") {
        read_conditions(value, action.conditions);
      } else if (k == ":effect") {
        read_effects(value, action.effects);
      } else {
        fail(key, "unsupported action field '" + key.text + "'");
      }
    }
    if (!has_duration) {
      fail(section, "action '" + action.name + "' has no :duration");
    }
    domain_.actions.push_back(std::move(action));
  }

  NumExpr read_expr(const Node & n) const
  {
    if (!n.is_list) {
      if (n.is_symbol("?duration")) {
        NumExpr e;
        e.kind = NumExpr::Kind::Duration;
        return e;
      }
      auto v = as_number(n);
      if (!v) {
        fail(n, "expected a numeric expression, got '" + n.text + "'");
      }
      return NumExpr::number(*v);
    }
    if (n.items.empty()) {
      fail(n, "empty numeric expression");
    }
    const std::string head = n.head();
    if (head == "total-time") {
      if (n.items.size() != 1) {
        fail(n, "(total-time) takes no arguments");
      }
      return NumExpr::total_time();
    }
    static const std::map<std::string, NumExpr::Kind> ops = {
      {"+", NumExpr::Kind::Add}, {"-", NumExpr::Kind::Sub},
      {"*", NumExpr::Kind::Mul}, {"/", NumExpr::Kind::Div}};
    if (auto op = ops.find(head); op != ops.end()) {
      if (n.items.size() == 2 && head == "-") {
        NumExpr e;
        e.kind = NumExpr::Kind::Sub;
        e.operands = {NumExpr::number(0), read_expr(n.items[1])};
        return e;
      }
      if (n.items.size() != 3) {
        fail(n, "arithmetic operators are binary");
      }
      NumExpr e;
      e.kind = op->second;
      e.operands = {read_expr(n.items[1]), read_expr(n.items[2])};
      return e;
    }
    return NumExpr::of_fluent(read_fluent(n));
  }

  FluentTerm read_fluent(const Node & n) const
  {
    if (!n.is_list || n.items.empty()) {
      fail(n, "expected a function term");
    }
    FluentTerm term;
    term.function = expect_symbol(n.items[0], "function name");
    if (domain_.find_function(term.function) == nullptr) {
      fail(n, "undeclared function '" + term.function + "'");
    }
    for (std::size_t i = 1; i < n.items.size(); ++i) {
      term.args.push_back(expect_symbol(n.items[i], "function argument"));
    }
    return term;
  }

  Literal read_literal(const Node & n) const
  {
    expect_list(n, "literal");
    if (n.head() == "not") {
      if (n.items.size() != 2) {
        fail(n, "(not <atom>) takes one argument");
      }
      Literal lit = read_literal(n.items[1]);
      if (!lit.positive) {
        fail(n, "double negation is not supported");
      }
      lit.positive = false;
      return lit;
    }
    if (n.items.empty()) {
      fail(n, "empty literal");
    }
    Literal lit;
    lit.atom.predicate = expect_symbol(n.items[0], "predicate");
    if (domain_.find_predicate(lit.atom.predicate) == nullptr) {
      fail(n, "undeclared predicate '" + lit.atom.predicate + "'");
    }
    for (std::size_t i = 1; i < n.items.size(); ++i) {
      lit.atom.args.push_back(expect_symbol(n.items[i], "argument"));
    }
    return lit;
  }

  static std::vector<const Node *> conjuncts(const Node & n)
  {
    std::vector<const Node *> out;
    if (n.is_list && n.items.empty()) {
      return out;
    }
    if (n.head() == "and") {
      for (std::size_t i = 1; i < n.items.size(); ++i) {
        auto sub = conjuncts(n.items[i]);
        out.insert(out.end(), sub.begin(), sub.end());
      }
      return out;
    }
    out.push_back(&n);
    return out;
  }

  void read_conditions(const Node & n, std::vector<Condition> & out) const
  {
    for (const Node * c : conjuncts(n)) {
      expect_list(*c, "timed condition");
      TimeSpec when;
      const std::string head = c->head();
      if (head == "at" && c->items.size() == 3 && c->items[1].is_symbol("start")) {
        when = TimeSpec::AtStart;
      } else if (head == "over" && c->items.size() == 3 && c->items[1].is_symbol("all")) {
        when = TimeSpec::OverAll;
      } else {
        fail(*c, "conditions must be tagged (at start ...) or (over all ...)");
      }
      const Node & body = c->items[2];
      static const std::set<std::string> cmp = {"<", "<=", ">", ">=", "="};
      if (cmp.count(body.head()) != 0) {
        if (body.items.size() != 3) {
          fail(body, "comparisons are binary");
        }
        out.push_back(
          Condition{when, Comparison{body.head(), read_expr(body.items[1]), read_expr(body.items[2])}});
      } else {
        out.push_back(Condition{when, read_literal(body)});
      }
    }
  }

  void read_effects(const Node & n, std::vector<Effect> & out) const
  {
    for (const Node * e : conjuncts(n)) {
      expect_list(*e, "timed effect");
      TimeSpec when;
      if (e->head() == "at" && e->items.size() == 3 && e->items[1].is_symbol("start")) {
        when = TimeSpec::AtStart;
      } else if (e->head() == "at" && e->items.size() == 3 && e->items[1].is_symbol("end")) {
        when = TimeSpec::AtEnd;
      } else {
        fail(*e, "effects must be tagged (at start ...) or (at end ...)");
      }
      const Node & body = e->items[2];
      const std::string head = body.head();
      if (head == "increase" || head == "decrease" || head == "assign") {
        if (body.items.size() != 3) {
          fail(body, head + " takes a function term and an expression");
        }
        out.push_back(Effect{when, NumericEffect{head, read_fluent(body.items[1]), read_expr(body.items[2])}});
      } else {
        out.push_back(Effect{when, read_literal(body)});
      }
    }
  }

private:
  Domain & domain_;
};

const Node & single_define(const std::vector<Node> & nodes, std::string_view text)
{
  if (nodes.size() != 1) {
    if (nodes.empty()) {
      throw ParseError("empty input", 1, 1);
    }
    fail(nodes[1], "unexpected content after (define ...)");
  }
  const Node & def = nodes[0];
  if (def.head() != "define" || def.items.size() < 2) {
    fail(def, "expected (define ...)");
  }
  (void)text;
  return def;
}

void check_semantics(const Node & at, const std::function<void()> & fn)
{
  try {
    fn();
  } catch (const ParseError &) {
    throw;
  } catch (const TaskError & e) {
    fail(at, e.what());
  }
}

}  // namespace

Domain parse_domain(std::string_view text)
{
  auto nodes = detail::read_sexprs(text);
  const Node & def = single_define(nodes, text);
  const Node & header = expect_list(def.items[1], "(domain <name>)");
  if (header.head() != "domain" || header.items.size() != 2) {
    fail(header, "expected (domain <name>)");
  }
  Domain domain;
  domain.name = expect_symbol(header.items[1], "domain name");
  DomainReader reader(domain);
  bool seen_types = false, seen_predicates = false, seen_functions = false;
  for (std::size_t i = 2; i < def.items.size(); ++i) {
    const Node & section = expect_list(def.items[i], "domain section");
    const std::string head = section.head();
    if (head == ":requirements") {
      for (std::size_t j = 1; j < section.items.size(); ++j) {
        domain.requirements.push_back(expect_symbol(section.items[j], "requirement"));
      }
    } else if (head == ":types") {
      if (seen_types) {
        fail(section, "duplicate :types section");
      }
      seen_types = true;
      check_semantics(section, [&] {reader.read_types(section);});
    } else if (head == ":predicates") {
      if (seen_predicates) {
        fail(section, "duplicate :predicates section");
      }
      seen_predicates = true;
      reader.read_predicates(section);
    } else if (head == ":functions") {
      if (seen_functions) {
        fail(section, "duplicate :functions section");
      }
      seen_functions = true;
      reader.read_functions(section);
    } else if (head == ":durative-action") {
      reader.read_action(section);
    } else {
      fail(section, "unsupported domain section '" + head + "'");
    }
  }
  check_semantics(def, [&] {validate_domain(domain);});
  return domain;
}

Problem parse_problem(std::string_view text, const Domain & domain)
{
  auto nodes = detail::read_sexprs(text);
  const Node & def = single_define(nodes, text);
  const Node & header = expect_list(def.items[1], "(problem <name>)");
  if (header.head() != "problem" || header.items.size() != 2) {
    fail(header, "expected (problem <name>)");
  }
  Problem problem;
  problem.name = expect_symbol(header.items[1], "problem name");
  Domain scratch;  // only used for literal/expression readers
  scratch.predicates = domain.predicates;
  scratch.functions = domain.functions;
  DomainReader reader(scratch);

  for (std::size_t i = 2; i < def.items.size(); ++i) {
    const Node & section = expect_list(def.items[i], "problem section");
    const std::string head = section.head();
    if (head == ":domain") {
      if (section.items.size() != 2) {
        fail(section, "expected (:domain <name>)");
      }
      problem.domain_name = expect_symbol(section.items[1], "domain name");
      if (problem.domain_name != domain.name) {
        fail(section, "problem targets domain '" + problem.domain_name + "', not '" + domain.name + "'");
      }
    } else if (head == ":objects") {
      for (const auto & [name, type] : parse_typed_list(section.items, 1)) {
        if (type.size() != 1) {
          fail(section, "object '" + name + "' cannot have an either-type");
        }
        check_semantics(section, [&] {problem.add_object(name, type.front(), domain);});
      }
    } else if (head == ":init") {
      for (std::size_t j = 1; j < section.items.size(); ++j) {
        const Node & item = expect_list(section.items[j], "initial fact");
        if (item.head() == "=") {
          if (item.items.size() != 3) {
            fail(item, "expected (= (<function> ...) <number>)");
          }
          FluentTerm term = reader.read_fluent(item.items[1]);
          auto v = as_number(item.items[2]);
          if (!v) {
            fail(item.items[2], "fluent values must be numbers");
          }
          if (!problem.fluents.emplace(term, *v).second) {
            fail(item, "duplicate fluent " + term.str());
          }
        } else if (item.head() == "at" && item.items.size() == 3 && as_number(item.items[1]) &&
          item.items[2].is_list)
        {
          problem.tils.push_back(TimedLiteral{as_minutes(item.items[1]), reader.read_literal(item.items[2])});
        } else {
          Literal lit = reader.read_literal(item);
          if (!lit.positive) {
            fail(item, "negative initial facts are implicit under the closed world");
          }
          problem.init.insert(lit.atom);
        }
      }
    } else if (head == ":goal") {
      if (section.items.size() != 2) {
        fail(section, "expected (:goal <condition>)");
      }
      for (const Node * g : DomainReader::conjuncts(section.items[1])) {
        Literal lit = reader.read_literal(*g);
        if (!lit.positive) {
          fail(*g, "negative goals are not supported");
        }
        if (std::find(problem.goals.begin(), problem.goals.end(), lit.atom) == problem.goals.end()) {
          problem.goals.push_back(lit.atom);
        }
      }
    } else if (head == ":metric") {
      if (section.items.size() != 3) {
        fail(section, "expected (:metric minimize|maximize <expression>)");
      }
      Metric metric;
      const std::string dir = section.items[1].keyword();
      if (dir == "minimize") {
        metric.direction = Metric::Direction::Minimize;
      } else if (dir == "maximize") {
        metric.direction = Metric::Direction::Maximize;
      } else {
        fail(section.items[1], "metric direction must be minimize or maximize");
      }
      metric.expr = reader.read_expr(section.items[2]);
      problem.metric = metric;
    } else if (head == ":horizon") {
      if (section.items.size() != 3) {
        fail(section, "expected (:horizon <start> <end>)");
      }
      problem.horizon.start = as_minutes(section.items[1]);
      problem.horizon.end = as_minutes(section.items[2]);
    } else {
      fail(section, "unsupported problem section '" + head + "'");
    }
  }
  std::stable_sort(
    problem.tils.begin(), problem.tils.end(),
    [](const TimedLiteral & a, const TimedLiteral & b) {return a.time < b.time;});
  check_semantics(def, [&] {validate_problem(problem, domain);});
  return problem;
}

namespace
{

std::string typed_list_str(const std::vector<Parameter> & params)
{
  std::string out;
  for (const auto & p : params) {
    if (!out.empty()) {
      out += " ";
    }
    out += p.name + " - " + type_expr_str(p.types);
  }
  return out;
}

}  // namespace

std::string write_domain(const Domain & domain)
{
  std::ostringstream os;
  os << "(define (domain " << domain.name << ")\n";
  if (!domain.requirements.empty()) {
    os << "  (:requirements";
    for (const auto & r : domain.requirements) {
      os << " " << r;
    }
    os << ")\n";
  }
  os << "  (:types";
  for (const auto & [name, parent] : domain.types.entries()) {
    if (parent) {
      os << "\n    " << name << " - " << *parent;
    }
  }
  os << ")\n";
  os << "  (:predicates";
  for (const auto & p : domain.predicates) {
    os << "\n    (" << p.name << (p.params.empty() ? "" : " ") << typed_list_str(p.params) << ")";
  }
  os << ")\n";
  if (!domain.functions.empty()) {
    os << "  (:functions";
    for (const auto & f : domain.functions) {
      os << "\n    (" << f.name << (f.params.empty() ? "" : " ") << typed_list_str(f.params) << ")";
    }
    os << ")\n";
  }
  for (const auto & a : domain.actions) {
    os << "  (:durative-action " << a.name << "\n";
    os << "    :parameters (" << typed_list_str(a.params) << ")\n";
    os << "    :duration (= ?duration " << a.duration.str() << ")\n";
    os << "    :condition (and";
    for (const auto & c : a.conditions) {
      os << "\n      (" << time_spec_str(c.when) << " ";
      if (const auto * lit = std::get_if<Literal>(&c.body)) {
        os << lit->str();
      } else {
        const auto & cmp = std::get<Comparison>(c.body);
        os << "(" << cmp.op << " " << cmp.lhs.str() << " " << cmp.rhs.str() << ")";
      }
      os << ")";
    }
    os << ")\n";
    os << "    :effect (and";
    for (const auto & e : a.effects) {
      os << "\n      (" << time_spec_str(e.when) << " ";
      if (const auto * lit = std::get_if<Literal>(&e.body)) {
        os << lit->str();
      } else {
        const auto & num = std::get<NumericEffect>(e.body);
        os << "(" << num.op << " " << num.target.str() << " " << num.value.str() << ")";
      }
      os << ")";
    }
    os << "))\n";
  }
  os << ")\n";
  return os.str();
}

std::string write_problem(const Problem & problem)
{
  std::ostringstream os;
  os << "(define (problem " << problem.name << ")\n";
  os << "  (:domain " << problem.domain_name << ")\n";
  os << "  (:objects";
  for (const auto & [name, type] : problem.objects) {
    os << "\n    " << name << " - " << type;
  }
  os << ")\n";
  os << "  (:init";
  for (const auto & atom : problem.init) {
    os << "\n    " << atom.str();
  }
  for (const auto & [term, value] : problem.fluents) {
    os << "\n    (= " << term.str() << " " << NumExpr::number(value).str() << ")";
  }
  for (const auto & til : problem.tils) {
    os << "\n    (at " << til.time << " " << til.literal.str() << ")";
  }
  os << ")\n";
  os << "  (:goal (and";
  for (const auto & g : problem.goals) {
    os << "\n    " << g.str();
  }
  os << "))\n";
  if (problem.metric) {
    os << "  (:metric "
       << (problem.metric->direction == Metric::Direction::Minimize ? "minimize" : "maximize") << " "
       << problem.metric->expr.str() << ")\n";
  }
  os << "  (:horizon " << problem.horizon.start << " " << problem.horizon.end << ")\n";
  os << ")\n";
  return os.str();
}

std::string read_file(const std::filesystem::path & path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw TaskError("cannot read '" + path.string() + "'");
  }
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

PlanningTask load_task(
  const std::filesystem::path & domain_path,
  const std::filesystem::path & problem_path)
{
  PlanningTask task;
  try {
    task.domain = parse_domain(read_file(domain_path));
  } catch (const ParseError & e) {
    throw ParseError(domain_path.string() + ": " + e.message(), e.line(), e.column());
  }
  try {
    task.problem = parse_problem(read_file(problem_path), task.domain);
  } catch (const ParseError & e) {
    throw ParseError(problem_path.string() + ": " + e.message(), e.line(), e.column());
  }
  return task;
}

}  // namespace opportune::task
