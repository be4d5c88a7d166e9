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

#include "opportune/planner/planner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <queue>
#include <set>
#include <tuple>
#include <stdexcept>
#include <unordered_map>
#include <utility>
#include <vector>

#include "opportune/task/eval.hpp"

namespace opportune::planner
{

using task::Atom;
using task::Minutes;
using task::NumExpr;
using task::PlanningTask;
using task::TimeSpec;

const char * strategy_str(Strategy s)
{
  return s == Strategy::Optimal ? "optimal" : "greedy";
}

Strategy parse_strategy(const std::string & text)
{
  if (text == "optimal") {
    return Strategy::Optimal;
  }
  if (text == "greedy") {
    return Strategy::Greedy;
  }
  throw std::invalid_argument("unknown planner strategy '" + text + "'");
}

const char * status_str(SolveStatus s)
{
  switch (s) {
    case SolveStatus::Solved: return "solved";
    case SolveStatus::Unsolvable: return "unsolvable";
    case SolveStatus::BudgetExhausted: return "budget_exhausted";
  }
  return "?";
}

bool better(double a, double b, const task::Metric & metric)
{
  return metric.direction == task::Metric::Direction::Minimize ? a < b : a > b;
}

namespace
{

constexpr double kUndefined = std::numeric_limits<double>::quiet_NaN();

/// Durations are whole minutes; fractional values round up.
std::optional<Minutes> to_minutes(double d)
{
  if (!std::isfinite(d) || d < 0.0) {
    return std::nullopt;
  }
  return static_cast<Minutes>(std::ceil(d - 1e-9));
}

// ---------------------------------------------------------------------------
// Compiled task

struct GExpr
{
  NumExpr::Kind kind = NumExpr::Kind::Number;
  double value = 0.0;
  int fluent = -1;
  std::vector<GExpr> operands;
};

struct GCompare
{
  std::string op;
  GExpr lhs;
  GExpr rhs;
};

struct GNumEffect
{
  std::string op;
  int target = -1;
  GExpr value;
};

struct GLits
{
  std::vector<int> pos;
  std::vector<int> neg;
};

struct GAction
{
  std::string name;
  std::vector<std::string> args;
  GExpr duration;
  GLits start_cond;
  GLits inv_cond;
  GLits end_cond;
  std::vector<GCompare> start_cmp;
  std::vector<GCompare> inv_cmp;
  std::vector<GCompare> end_cmp;
  GLits start_eff;  // pos = add, neg = delete
  GLits end_eff;
  std::vector<GNumEffect> start_num;
  std::vector<GNumEffect> end_num;
};

struct GTil
{
  Minutes time;
  int atom;
  bool positive;
};

using Bits = std::vector<std::uint64_t>;

inline bool test(const Bits & b, int i)
{
  return (b[static_cast<std::size_t>(i) >> 6] >> (i & 63)) & 1U;
}
inline void set_bit(Bits & b, int i)
{
  b[static_cast<std::size_t>(i) >> 6] |= std::uint64_t{1} << (i & 63);
}
inline void clear_bit(Bits & b, int i)
{
  b[static_cast<std::size_t>(i) >> 6] &= ~(std::uint64_t{1} << (i & 63));
}

struct State
{
  Bits bits;
  std::vector<double> fluents;
  Minutes time = 0;
  std::size_t til_next = 0;
};

class Compiled
{
public:
  explicit Compiled(const PlanningTask & t)
  : task_(t)
  {
    const auto & p = t.problem;
    for (const auto & a : p.init) {
      atom_id(a);
    }
    for (const auto & [f, v] : p.fluents) {
      fluent_id(f);
    }
    for (const auto & til : p.tils) {
      tils_.push_back({til.time, atom_id(til.literal.atom), til.literal.positive});
    }
    std::stable_sort(
      tils_.begin(), tils_.end(), [](const GTil & a, const GTil & b) {return a.time < b.time;});
    for (const auto & g : p.goals) {
      goals_.push_back(atom_id(g));
    }
    ground_all();

    til_atom_.assign(atoms_.size(), false);
    for (const auto & til : tils_) {
      til_atom_[static_cast<std::size_t>(til.atom)] = true;
    }
    words_ = (atoms_.size() + 63) / 64;
    analyse_dominance();
  }

  const std::vector<GAction> & actions() const {return actions_;}
  const std::vector<GTil> & tils() const {return tils_;}
  const std::vector<int> & goals() const {return goals_;}
  bool dominance_safe() const {return dominance_safe_;}
  bool time_bounded() const {return time_bounded_;}
  const Bits & key_mask() const {return key_mask_;}
  const task::Horizon & horizon() const {return task_.problem.horizon;}

  State initial() const
  {
    State s;
    s.bits.assign(words_, 0);
    s.fluents.assign(fluent_names_.size(), kUndefined);
    for (const auto & a : task_.problem.init) {
      set_bit(s.bits, atoms_.at(a));
    }
    for (const auto & [f, v] : task_.problem.fluents) {
      s.fluents[static_cast<std::size_t>(fluents_.at(f))] = v;
    }
    s.time = task_.problem.horizon.start;
    advance(s, s.time);
    return s;
  }

  void advance(State & s, Minutes to) const
  {
    while (s.til_next < tils_.size() && tils_[s.til_next].time <= to) {
      const auto & til = tils_[s.til_next++];
      if (til.positive) {
        set_bit(s.bits, til.atom);
      } else {
        clear_bit(s.bits, til.atom);
      }
    }
    s.time = to;
  }

  bool goals_hold(const State & s) const
  {
    return std::all_of(goals_.begin(), goals_.end(), [&](int g) {return test(s.bits, g);});
  }

  int unmet_goals(const State & s) const
  {
    int n = 0;
    for (int g : goals_) {
      n += test(s.bits, g) ? 0 : 1;
    }
    return n;
  }

  std::optional<double> metric(const State & s) const
  {
    const auto m = task_.problem.effective_metric();
    return eval_metric(m.expr, s);
  }

  /// Earliest feasible execution of `a` from `s`. Returns the start time
  /// and the state at the action's end.
  std::optional<std::pair<Minutes, State>> apply(const State & s, const GAction & a) const
  {
    const Minutes hend = task_.problem.horizon.end;
    State at = s;
    std::size_t next_til = s.til_next;
    Minutes candidate = s.time;
    while (true) {
      advance(at, candidate);
      bool stuck = false;
      const bool ok = check(at, a.start_cond, stuck) && check(at, a.inv_cond, stuck) &&
        compare_all(at, a.start_cmp, stuck) && compare_all(at, a.inv_cmp, stuck);
      if (ok) {
        const auto dv = eval(a.duration, at.fluents, std::nullopt);
        if (!dv) {
          return std::nullopt;
        }
        const auto d = to_minutes(*dv);
        if (!d || candidate + *d > hend) {
          return std::nullopt;
        }
        auto out = run_body(at, a, candidate, *d);
        if (out) {
          return std::make_pair(candidate, std::move(*out));
        }
      } else if (stuck) {
        return std::nullopt;
      }
      while (next_til < tils_.size() && tils_[next_til].time <= candidate) {
        ++next_til;
      }
      if (next_til >= tils_.size() || tils_[next_til].time > hend) {
        return std::nullopt;
      }
      candidate = tils_[next_til].time;
    }
  }

  std::size_t words() const {return words_;}

private:
  int atom_id(const Atom & a)
  {
    auto it = atoms_.find(a);
    if (it != atoms_.end()) {
      return it->second;
    }
    const int id = static_cast<int>(atoms_.size());
    atoms_.emplace(a, id);
    return id;
  }

  int fluent_id(const task::FluentTerm & f)
  {
    auto it = fluents_.find(f);
    if (it != fluents_.end()) {
      return it->second;
    }
    const int id = static_cast<int>(fluent_names_.size());
    fluents_.emplace(f, id);
    fluent_names_.push_back(f);
    return id;
  }

  GExpr compile(const NumExpr & e, const task::Binding & b)
  {
    GExpr g;
    g.kind = e.kind;
    g.value = e.value;
    if (e.kind == NumExpr::Kind::Fluent) {
      g.fluent = fluent_id(task::substitute(e.fluent, b));
    }
    for (const auto & op : e.operands) {
      g.operands.push_back(compile(op, b));
    }
    return g;
  }

  std::optional<double> eval(
    const GExpr & e, const std::vector<double> & fl, std::optional<double> duration,
    std::optional<double> total = std::nullopt) const
  {
    switch (e.kind) {
      case NumExpr::Kind::Number:
        return e.value;
      case NumExpr::Kind::Fluent: {
          const double v = fl[static_cast<std::size_t>(e.fluent)];
          if (std::isnan(v)) {
            return std::nullopt;
          }
          return v;
        }
      case NumExpr::Kind::Duration:
        return duration;
      case NumExpr::Kind::TotalTime:
        return total;
      default:
        break;
    }
    auto acc = eval(e.operands.at(0), fl, duration, total);
    if (!acc) {
      return std::nullopt;
    }
    if (e.operands.size() == 1 && e.kind == NumExpr::Kind::Sub) {
      return -*acc;
    }
    for (std::size_t i = 1; i < e.operands.size(); ++i) {
      const auto v = eval(e.operands[i], fl, duration, total);
      if (!v) {
        return std::nullopt;
      }
      switch (e.kind) {
        case NumExpr::Kind::Add: *acc += *v; break;
        case NumExpr::Kind::Sub: *acc -= *v; break;
        case NumExpr::Kind::Mul: *acc *= *v; break;
        case NumExpr::Kind::Div:
          if (*v == 0.0) {
            return std::nullopt;
          }
          *acc /= *v;
          break;
        default: return std::nullopt;
      }
    }
    return acc;
  }

  std::optional<double> eval_metric(const NumExpr & e, const State & s) const
  {
    const double total = static_cast<double>(s.time - task_.problem.horizon.start);
    switch (e.kind) {
      case NumExpr::Kind::Number: return e.value;
      case NumExpr::Kind::TotalTime: return total;
      case NumExpr::Kind::Duration: return std::nullopt;
      case NumExpr::Kind::Fluent: {
          auto it = fluents_.find(e.fluent);
          if (it == fluents_.end()) {
            return std::nullopt;
          }
          const double v = s.fluents[static_cast<std::size_t>(it->second)];
          if (std::isnan(v)) {
            return std::nullopt;
          }
          return v;
        }
      default: break;
    }
    task::FluentMap fm;
    for (std::size_t i = 0; i < fluent_names_.size(); ++i) {
      if (!std::isnan(s.fluents[i])) {
        fm.emplace(fluent_names_[i], s.fluents[i]);
      }
    }
    task::EvalContext ctx;
    ctx.fluents = &fm;
    ctx.total_time = total;
    return task::evaluate(e, ctx);
  }

  bool check(const State & s, const GLits & lits, bool & stuck) const
  {
    for (int p : lits.pos) {
      if (!test(s.bits, p)) {
        stuck = stuck || !til_atom_[static_cast<std::size_t>(p)];
        return false;
      }
    }
    for (int n : lits.neg) {
      if (test(s.bits, n)) {
        stuck = stuck || !til_atom_[static_cast<std::size_t>(n)];
        return false;
      }
    }
    return true;
  }

  bool compare_all(const State & s, const std::vector<GCompare> & cmps, bool & stuck) const
  {
    for (const auto & c : cmps) {
      const auto l = eval(c.lhs, s.fluents, std::nullopt);
      const auto r = eval(c.rhs, s.fluents, std::nullopt);
      if (!l || !r || !task::compare(c.op, *l, *r)) {
        stuck = true;  // fluents only change through actions
        return false;
      }
    }
    return true;
  }

  void effects(State & s, const GLits & lits, const std::vector<GNumEffect> & num, double d) const
  {
    for (int n : lits.neg) {
      clear_bit(s.bits, n);
    }
    for (int p : lits.pos) {
      set_bit(s.bits, p);
    }
    std::vector<std::pair<int, double>> updates;
    for (const auto & e : num) {
      const auto v = eval(e.value, s.fluents, d);
      const double cur = s.fluents[static_cast<std::size_t>(e.target)];
      double next = kUndefined;
      if (v) {
        if (e.op == "assign") {
          next = *v;
        } else if (!std::isnan(cur)) {
          next = e.op == "increase" ? cur + *v : cur - *v;
        }
      }
      updates.emplace_back(e.target, next);
    }
    for (const auto & [idx, v] : updates) {
      s.fluents[static_cast<std::size_t>(idx)] = v;
    }
  }

  std::optional<State> run_body(const State & at, const GAction & a, Minutes start, Minutes d) const
  {
    State s = at;
    const double dd = static_cast<double>(d);
    effects(s, a.start_eff, a.start_num, dd);
    const Minutes end = start + d;
    bool unused = false;
    while (s.til_next < tils_.size() && tils_[s.til_next].time <= end) {
      const Minutes t = tils_[s.til_next].time;
      advance(s, t);
      if (!check(s, a.inv_cond, unused)) {
        return std::nullopt;
      }
    }
    s.time = end;
    if (!check(s, a.inv_cond, unused) || !compare_all(s, a.inv_cmp, unused) ||
      !check(s, a.end_cond, unused) || !compare_all(s, a.end_cmp, unused))
    {
      return std::nullopt;
    }
    effects(s, a.end_eff, a.end_num, dd);
    return s;
  }

  void ground_all()
  {
    const auto & d = task_.domain;
    const auto & p = task_.problem;
    std::vector<const task::ActionSchema *> schemas;
    for (const auto & a : d.actions) {
      schemas.push_back(&a);
    }
    std::sort(
      schemas.begin(), schemas.end(),
      [](const auto * a, const auto * b) {return a->name < b->name;});

    std::set<std::string> dynamic_preds;
    std::set<std::string> dynamic_funcs;
    for (const auto & a : d.actions) {
      for (const auto & e : a.effects) {
        if (const auto * lit = std::get_if<task::Literal>(&e.body)) {
          dynamic_preds.insert(lit->atom.predicate);
        } else {
          dynamic_funcs.insert(std::get<task::NumericEffect>(e.body).target.function);
        }
      }
    }
    for (const auto & til : p.tils) {
      dynamic_preds.insert(til.literal.atom.predicate);
    }

    for (const auto * schema : schemas) {
      std::vector<std::vector<std::string>> domains;
      bool empty = false;
      for (const auto & param : schema->params) {
        std::vector<std::string> objs;
        for (const auto & [name, type] : p.objects) {
          if (task::type_compatible(type, param.types, d.types)) {
            objs.push_back(name);
          }
        }
        empty = empty || objs.empty();
        domains.push_back(std::move(objs));
      }
      if (empty) {
        continue;
      }
      std::vector<std::size_t> idx(domains.size(), 0);
      bool done = false;
      while (!done) {
        std::vector<std::string> args;
        for (std::size_t i = 0; i < idx.size(); ++i) {
          args.push_back(domains[i][idx[i]]);
        }
        add_ground(*schema, args, dynamic_preds, dynamic_funcs);
        done = true;
        for (std::size_t k = idx.size(); k-- > 0; ) {
          if (++idx[k] < domains[k].size()) {
            done = false;
            break;
          }
          idx[k] = 0;
        }
      }
    }
  }

  static bool static_expr_undefined(
    const NumExpr & e, const task::Binding & b, const task::FluentMap & init,
    const std::set<std::string> & dynamic_funcs)
  {
    if (e.kind == NumExpr::Kind::Fluent) {
      return dynamic_funcs.count(e.fluent.function) == 0 &&
             init.count(task::substitute(e.fluent, b)) == 0;
    }
    return std::any_of(
      e.operands.begin(), e.operands.end(), [&](const NumExpr & op) {
        return static_expr_undefined(op, b, init, dynamic_funcs);
      });
  }

  void add_ground(
    const task::ActionSchema & schema, const std::vector<std::string> & args,
    const std::set<std::string> & dynamic_preds, const std::set<std::string> & dynamic_funcs)
  {
    const auto b = task::bind_parameters(schema, args);
    const auto & init = task_.problem.init;
    if (static_expr_undefined(schema.duration, b, task_.problem.fluents, dynamic_funcs)) {
      return;
    }
    for (const auto & c : schema.conditions) {
      if (const auto * lit = std::get_if<task::Literal>(&c.body)) {
        if (dynamic_preds.count(lit->atom.predicate) == 0) {
          const bool present = init.count(task::substitute(lit->atom, b)) > 0;
          if (present != lit->positive) {
            return;
          }
        }
      }
    }
    GAction g;
    g.name = schema.name;
    g.args = args;
    g.duration = compile(schema.duration, b);
    for (const auto & c : schema.conditions) {
      if (const auto * lit = std::get_if<task::Literal>(&c.body)) {
        if (dynamic_preds.count(lit->atom.predicate) == 0) {
          continue;
        }
        GLits & target = c.when == TimeSpec::AtStart ? g.start_cond :
          c.when == TimeSpec::OverAll ? g.inv_cond : g.end_cond;
        const int id = atom_id(task::substitute(lit->atom, b));
        (lit->positive ? target.pos : target.neg).push_back(id);
      } else {
        const auto & cmp = std::get<task::Comparison>(c.body);
        auto & target = c.when == TimeSpec::AtStart ? g.start_cmp :
          c.when == TimeSpec::OverAll ? g.inv_cmp : g.end_cmp;
        target.push_back({cmp.op, compile(cmp.lhs, b), compile(cmp.rhs, b)});
      }
    }
    for (const auto & e : schema.effects) {
      if (const auto * lit = std::get_if<task::Literal>(&e.body)) {
        GLits & target = e.when == TimeSpec::AtStart ? g.start_eff : g.end_eff;
        const int id = atom_id(task::substitute(lit->atom, b));
        (lit->positive ? target.pos : target.neg).push_back(id);
      } else {
        const auto & ne = std::get<task::NumericEffect>(e.body);
        auto & target = e.when == TimeSpec::AtStart ? g.start_num : g.end_num;
        target.push_back({ne.op, fluent_id(task::substitute(ne.target, b)), compile(ne.value, b)});
      }
    }
    actions_.push_back(std::move(g));
  }

  // Earlier-time dominance is exact when the atoms touched by timed
  // literals are a function of time alone (no action writes them) and the
  // metric cannot reward a later finish. Goals on such atoms would make
  // the finishing time matter, so they disable it too.
  void analyse_dominance()
  {
    const auto metric = task_.problem.effective_metric();
    time_bounded_ = metric.direction == task::Metric::Direction::Minimize &&
      metric.expr.kind == NumExpr::Kind::TotalTime;
    bool safe = time_bounded_ || !metric.expr.references_total_time();
    for (const auto & a : actions_) {
      for (const auto * lits : {&a.start_eff, &a.end_eff}) {
        for (int id : lits->pos) {
          safe = safe && !til_atom_[static_cast<std::size_t>(id)];
        }
        for (int id : lits->neg) {
          safe = safe && !til_atom_[static_cast<std::size_t>(id)];
        }
      }
    }
    for (int g : goals_) {
      safe = safe && !til_atom_[static_cast<std::size_t>(g)];
    }
    dominance_safe_ = safe;
    key_mask_.assign(words_, ~std::uint64_t{0});
    if (safe) {
      for (std::size_t i = 0; i < til_atom_.size(); ++i) {
        if (til_atom_[i]) {
          clear_bit(key_mask_, static_cast<int>(i));
        }
      }
    }
  }

  const PlanningTask & task_;
  std::map<Atom, int> atoms_;
  std::map<task::FluentTerm, int> fluents_;
  std::vector<task::FluentTerm> fluent_names_;
  std::vector<GAction> actions_;
  std::vector<GTil> tils_;
  std::vector<int> goals_;
  std::vector<bool> til_atom_;
  std::size_t words_ = 0;
  bool dominance_safe_ = false;
  bool time_bounded_ = false;
  Bits key_mask_;
};

// ---------------------------------------------------------------------------
// Search

struct Key
{
  Bits bits;
  std::vector<double> fluents;

  bool operator==(const Key & o) const
  {
    if (bits != o.bits || fluents.size() != o.fluents.size()) {
      return false;
    }
    for (std::size_t i = 0; i < fluents.size(); ++i) {
      const bool na = std::isnan(fluents[i]);
      const bool nb = std::isnan(o.fluents[i]);
      if (na != nb || (!na && fluents[i] != o.fluents[i])) {
        return false;
      }
    }
    return true;
  }
};

struct KeyHash
{
  std::size_t operator()(const Key & k) const
  {
    std::uint64_t h = 1469598103934665603ULL;
    auto mix = [&h](std::uint64_t v) {
        h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
      };
    for (auto w : k.bits) {
      mix(w);
    }
    for (double f : k.fluents) {
      mix(std::isnan(f) ? 0x7ff8ULL : std::hash<double>{}(f));
    }
    return static_cast<std::size_t>(h);
  }
};

struct Seen
{
  Minutes time;
  std::size_t steps;
};

struct Budget
{};

struct StepRef
{
  std::size_t action;
  Minutes start;
  Minutes duration;
};

class Search
{
public:
  Search(const Compiled & c, const PlannerConfig & config, task::Metric metric)
  : c_(c), config_(config), metric_(std::move(metric)),
    started_(std::chrono::steady_clock::now())
  {}

  SolveResult run()
  {
    SolveResult r;
    r.stats.dominance_enabled = c_.dominance_safe();
    try {
      if (config_.strategy == Strategy::Optimal) {
        std::vector<StepRef> path;
        dfs(c_.initial(), path);
      } else {
        best_first();
      }
      r.status = has_best_ ? SolveStatus::Solved : SolveStatus::Unsolvable;
      if (!has_best_) {
        r.message = "no plan reaches every goal within the horizon";
      }
    } catch (const Budget &) {
      r.status = SolveStatus::BudgetExhausted;
      r.message = "search budget exhausted after " + std::to_string(stats_.nodes) + " nodes";
    }
    r.has_plan = has_best_;
    if (has_best_) {
      r.metric = best_metric_;
      for (const auto & s : best_path_) {
        const auto & a = c_.actions()[s.action];
        r.plan.steps.push_back({s.start, a.name, a.args, s.duration});
      }
    }
    stats_.elapsed_ms = elapsed_ms();
    r.stats.nodes = stats_.nodes;
    r.stats.pruned_bound = stats_.pruned_bound;
    r.stats.pruned_dominated = stats_.pruned_dominated;
    r.stats.elapsed_ms = stats_.elapsed_ms;
    return r;
  }

private:
  double elapsed_ms() const
  {
    return std::chrono::duration<double, std::milli>(
      std::chrono::steady_clock::now() - started_).count();
  }

  void tick()
  {
    ++stats_.nodes;
    if (stats_.nodes > config_.node_budget) {
      throw Budget{};
    }
    if ((stats_.nodes & 255U) == 0 && elapsed_ms() > static_cast<double>(config_.time_budget_ms)) {
      throw Budget{};
    }
  }

  Key key_of(const State & s) const
  {
    Key k{s.bits, s.fluents};
    const auto & mask = c_.key_mask();
    for (std::size_t i = 0; i < k.bits.size(); ++i) {
      k.bits[i] &= mask[i];
    }
    return k;
  }

  /// Records the state; returns false when an earlier visit dominates it.
  bool record(const State & s, std::size_t steps)
  {
    auto & list = seen_[key_of(s)];
    for (const auto & e : list) {
      const bool time_ok = c_.dominance_safe() ? e.time <= s.time : e.time == s.time;
      if (time_ok && e.steps <= steps) {
        ++stats_.pruned_dominated;
        return false;
      }
    }
    const bool safe = c_.dominance_safe();
    std::erase_if(
      list, [&](const Seen & e) {
        return (safe ? s.time <= e.time : s.time == e.time) && steps <= e.steps;
      });
    list.push_back({s.time, steps});
    return true;
  }

  void consider(const State & s, const std::vector<StepRef> & path)
  {
    if (!c_.goals_hold(s)) {
      return;
    }
    const auto m = c_.metric(s);
    if (!m) {
      return;
    }
    if (!has_best_ || better(*m, best_metric_, metric_) ||
      (*m == best_metric_ && path.size() < best_path_.size()))
    {
      has_best_ = true;
      best_metric_ = *m;
      best_path_ = path;
    }
  }

  bool bounded_out(const State & s, std::size_t steps)
  {
    if (!has_best_ || !c_.time_bounded()) {
      return false;
    }
    const double lb = static_cast<double>(s.time - c_.horizon().start);
    if (lb > best_metric_ || (lb == best_metric_ && steps >= best_path_.size())) {
      ++stats_.pruned_bound;
      return true;
    }
    return false;
  }

  void dfs(const State & s, std::vector<StepRef> & path)
  {
    tick();
    consider(s, path);
    const auto & actions = c_.actions();
    for (std::size_t i = 0; i < actions.size(); ++i) {
      auto next = c_.apply(s, actions[i]);
      if (!next) {
        continue;
      }
      const auto & [start, state] = *next;
      const std::size_t steps = path.size() + 1;
      if (bounded_out(state, steps) || !record(state, steps)) {
        continue;
      }
      path.push_back({i, start, state.time - start});
      dfs(state, path);
      path.pop_back();
    }
  }

  struct Node
  {
    State state;
    int parent;
    StepRef step;
    std::size_t depth;
  };

  void best_first()
  {
    std::vector<Node> nodes;
    nodes.push_back({c_.initial(), -1, {0, 0, 0}, 0});
    using Entry = std::tuple<int, Minutes, std::size_t, std::size_t>;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;
    open.emplace(c_.unmet_goals(nodes[0].state), nodes[0].state.time, 0, 0);
    record(nodes[0].state, 0);
    while (!open.empty()) {
      const auto [unmet, time, depth, id] = open.top();
      open.pop();
      tick();
      if (unmet == 0 && c_.metric(nodes[id].state)) {
        std::vector<StepRef> path;
        for (int cur = static_cast<int>(id); nodes[static_cast<std::size_t>(cur)].parent >= 0;
          cur = nodes[static_cast<std::size_t>(cur)].parent)
        {
          path.push_back(nodes[static_cast<std::size_t>(cur)].step);
        }
        std::reverse(path.begin(), path.end());
        consider(nodes[id].state, path);
        return;
      }
      const auto & actions = c_.actions();
      for (std::size_t i = 0; i < actions.size(); ++i) {
        auto next = c_.apply(nodes[id].state, actions[i]);
        if (!next || !record(next->second, depth + 1)) {
          continue;
        }
        const Minutes start = next->first;
        const Minutes dur = next->second.time - start;
        nodes.push_back({std::move(next->second), static_cast<int>(id), {i, start, dur}, depth + 1});
        const auto & n = nodes.back();
        open.emplace(c_.unmet_goals(n.state), n.state.time, n.depth, nodes.size() - 1);
      }
    }
  }

  const Compiled & c_;
  PlannerConfig config_;
  task::Metric metric_;
  std::chrono::steady_clock::time_point started_;
  SearchStats stats_;
  std::unordered_map<Key, std::vector<Seen>, KeyHash> seen_;
  bool has_best_ = false;
  double best_metric_ = 0.0;
  std::vector<StepRef> best_path_;
};

}  // namespace

SolveResult solve(const PlanningTask & task, const PlannerConfig & config)
{
  if (config.node_budget == 0 || config.time_budget_ms <= 0) {
    throw std::invalid_argument("planner budgets must be positive");
  }
  const Compiled compiled(task);
  Search search(compiled, config, task.problem.effective_metric());
  return search.run();
}

SolveResult BuiltinPlanner::solve(const PlanningTask & task, const PlannerConfig & config)
{
  return planner::solve(task, config);
}

// ---------------------------------------------------------------------------
// Validation

namespace
{

void apply_tils_until(
  const task::Problem & p, std::size_t & next, Minutes until, task::AtomSet & atoms)
{
  while (next < p.tils.size() && p.tils[next].time <= until) {
    const auto & lit = p.tils[next].literal;
    if (lit.positive) {
      atoms.insert(lit.atom);
    } else {
      atoms.erase(lit.atom);
    }
    ++next;
  }
}

std::optional<std::string> failed_literal(
  const std::vector<task::Literal> & lits, const task::AtomSet & atoms)
{
  for (const auto & l : lits) {
    if (!task::holds(l, atoms)) {
      return l.str();
    }
  }
  return std::nullopt;
}

std::optional<std::string> failed_comparison(
  const std::vector<task::Comparison> & cmps, const task::AtomSet &, const task::FluentMap & fl,
  const task::Binding & b)
{
  task::EvalContext ctx;
  ctx.fluents = &fl;
  ctx.binding = &b;
  for (const auto & c : cmps) {
    const auto l = task::evaluate(c.lhs, ctx);
    const auto r = task::evaluate(c.rhs, ctx);
    if (!l || !r || !task::compare(c.op, *l, *r)) {
      return "(" + c.op + " " + c.lhs.str() + " " + c.rhs.str() + ")";
    }
  }
  return std::nullopt;
}

}  // namespace

ValidationResult validate(const task::Plan & plan, const PlanningTask & t)
{
  const auto & p = t.problem;
  ValidationResult r;
  task::AtomSet atoms = p.init;
  task::FluentMap fluents = p.fluents;
  std::size_t next_til = 0;
  Minutes now = p.horizon.start;
  apply_tils_until(p, next_til, now, atoms);

  auto fail = [&](int step, Minutes time, std::string what) {
      r.valid = false;
      r.violation = Violation{step, time, std::move(what)};
      r.final_atoms = atoms;
      r.final_fluents = fluents;
      r.end_time = now;
      return r;
    };

  for (std::size_t i = 0; i < plan.steps.size(); ++i) {
    const auto & step = plan.steps[i];
    const int si = static_cast<int>(i);
    const std::string label = "step " + std::to_string(i) + " " + step.action_str();
    if (step.start < now) {
      return fail(si, step.start, label + " starts before time " + std::to_string(now));
    }
    task::GroundAction g;
    try {
      g = task::ground(t.domain, step.action, step.args);
    } catch (const task::TaskError & e) {
      return fail(si, step.start, label + ": " + e.what());
    }
    for (std::size_t k = 0; k < step.args.size(); ++k) {
      const auto type = p.type_of(step.args[k]);
      if (!type || !task::type_compatible(*type, g.schema->params[k].types, t.domain.types)) {
        return fail(si, step.start, label + ": argument " + step.args[k] + " has the wrong type");
      }
    }
    apply_tils_until(p, next_til, step.start, atoms);
    now = step.start;
    if (auto bad = failed_literal(g.conditions(TimeSpec::AtStart), atoms)) {
      return fail(si, step.start, label + ": condition " + *bad + " does not hold at start");
    }
    if (auto bad = failed_literal(g.conditions(TimeSpec::OverAll), atoms)) {
      return fail(si, step.start, label + ": invariant " + *bad + " does not hold at start");
    }
    for (auto when : {TimeSpec::AtStart, TimeSpec::OverAll}) {
      if (auto bad = failed_comparison(g.comparisons(when), atoms, fluents, g.binding)) {
        return fail(si, step.start, label + ": condition " + *bad + " does not hold at start");
      }
    }
    task::EvalContext ctx;
    ctx.fluents = &fluents;
    ctx.binding = &g.binding;
    const auto dv = task::evaluate(g.schema->duration, ctx);
    const auto d = dv ? to_minutes(*dv) : std::nullopt;
    if (!d) {
      return fail(si, step.start, label + ": duration is undefined");
    }
    if (*d != step.duration) {
      return fail(
        si, step.start,
        label + ": duration " + std::to_string(step.duration) + " differs from " +
        std::to_string(*d));
    }
    const Minutes end = step.start + *d;
    if (end > p.horizon.end) {
      return fail(si, step.start, label + ": ends after the horizon");
    }
    const double dd = static_cast<double>(*d);
    task::apply_effects(g, TimeSpec::AtStart, atoms, fluents, dd);
    const auto invariant = g.conditions(TimeSpec::OverAll);
    while (next_til < p.tils.size() && p.tils[next_til].time <= end) {
      const Minutes tt = p.tils[next_til].time;
      apply_tils_until(p, next_til, tt, atoms);
      now = tt;
      if (auto bad = failed_literal(invariant, atoms)) {
        return fail(si, tt, label + ": invariant " + *bad + " violated at " + std::to_string(tt));
      }
    }
    now = end;
    if (auto bad = failed_literal(invariant, atoms)) {
      return fail(si, end, label + ": invariant " + *bad + " does not hold at end");
    }
    if (auto bad = failed_literal(g.conditions(TimeSpec::AtEnd), atoms)) {
      return fail(si, end, label + ": condition " + *bad + " does not hold at end");
    }
    for (auto when : {TimeSpec::OverAll, TimeSpec::AtEnd}) {
      if (auto bad = failed_comparison(g.comparisons(when), atoms, fluents, g.binding)) {
        return fail(si, end, label + ": condition " + *bad + " does not hold at end");
      }
    }
    task::apply_effects(g, TimeSpec::AtEnd, atoms, fluents, dd);
  }

  for (const auto & goal : p.goals) {
    if (atoms.count(goal) == 0) {
      return fail(-1, now, "goal " + goal.str() + " does not hold at plan end");
    }
  }
  r.valid = true;
  r.final_atoms = std::move(atoms);
  r.final_fluents = std::move(fluents);
  r.end_time = now;
  return r;
}

double metric_value(const task::Plan & plan, const PlanningTask & t)
{
  const auto v = validate(plan, t);
  if (!v.valid) {
    throw task::TaskError("plan does not validate: " + v.violation->what);
  }
  task::EvalContext ctx;
  ctx.fluents = &v.final_fluents;
  ctx.total_time = static_cast<double>(v.end_time - t.problem.horizon.start);
  const auto m = task::evaluate(t.problem.effective_metric().expr, ctx);
  if (!m) {
    throw task::TaskError("metric is undefined at plan end");
  }
  return *m;
}

}  // namespace opportune::planner
