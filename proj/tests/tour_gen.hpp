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

// Random one-day tours over the bundled tourism domain, plus a
// permutation oracle that computes the best tour length directly from the
// numbers, without the task model.

#ifndef OPPORTUNE_TESTS__TOUR_GEN_HPP_
#define OPPORTUNE_TESTS__TOUR_GEN_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "opportune/task/pddl.hpp"

namespace tours
{

struct Poi
{
  std::string name;
  std::int64_t open = 0;
  std::int64_t close = 0;
  std::int64_t duration = 0;
};

/// Location 0 is the hotel; location i > 0 is pois[i - 1].
struct Tour
{
  std::vector<Poi> pois;
  std::vector<std::vector<std::int64_t>> walk;
  std::int64_t active_open = 600;
  std::int64_t active_close = 1380;
  std::int64_t horizon_start = 0;
  std::int64_t horizon_end = 1440;
};

inline Tour random_tour(std::mt19937 & rng, int max_pois)
{
  std::uniform_int_distribution<int> count(1, max_pois);
  std::uniform_int_distribution<int> coord(0, 40);
  std::uniform_int_distribution<int> open(560, 900);
  std::uniform_int_distribution<int> length(20, 320);
  std::uniform_int_distribution<int> dur(10, 90);
  std::uniform_int_distribution<int> coin(0, 4);
  Tour t;
  const int n = count(rng);
  std::vector<std::pair<int, int>> xy;
  xy.emplace_back(coord(rng), coord(rng));
  for (int i = 0; i < n; ++i) {
    Poi p;
    p.name = "poi" + std::to_string(i);
    p.open = open(rng);
    p.close = p.open + length(rng);
    p.duration = dur(rng);
    t.pois.push_back(p);
    xy.emplace_back(coord(rng), coord(rng));
  }
  const std::size_t m = xy.size();
  t.walk.assign(m, std::vector<std::int64_t>(m, 0));
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = 0; b < m; ++b) {
      const double dx = xy[a].first - xy[b].first;
      const double dy = xy[a].second - xy[b].second;
      t.walk[a][b] = 1 + static_cast<std::int64_t>(std::ceil(std::sqrt(dx * dx + dy * dy)));
    }
  }
  if (coin(rng) == 0) {
    t.active_close = 900 + coin(rng) * 60;
  }
  return t;
}

inline std::string problem_text(const Tour & t)
{
  std::ostringstream out;
  out << "(define (problem tour)\n  (:domain tourism)\n  (:objects tourist - person hotel - hotel";
  for (const auto & p : t.pois) {
    out << " " << p.name << " - museum";
  }
  out << ")\n  (:init\n    (be tourist hotel)\n    (= (visits_done tourist) 0)\n";
  out << "    (at " << t.active_open << " (active tourist))\n";
  out << "    (at " << t.active_close << " (not (active tourist)))\n";
  std::vector<std::string> names{"hotel"};
  for (const auto & p : t.pois) {
    names.push_back(p.name);
    out << "    (= (visit_duration " << p.name << ") " << p.duration << ")\n";
    out << "    (at " << p.open << " (open " << p.name << "))\n";
    out << "    (at " << p.close << " (not (open " << p.name << ")))\n";
  }
  for (std::size_t a = 0; a < names.size(); ++a) {
    for (std::size_t b = 0; b < names.size(); ++b) {
      if (a != b) {
        out << "    (= (walk_time " << names[a] << " " << names[b] << ") " << t.walk[a][b] << ")\n";
      }
    }
  }
  out << "  )\n  (:goal (and (be tourist hotel)";
  for (const auto & p : t.pois) {
    out << " (visited tourist " << p.name << ")";
  }
  out << "))\n  (:metric minimize (total-time))\n  (:horizon " << t.horizon_start << " "
      << t.horizon_end << "))\n";
  return out.str();
}

inline opportune::task::PlanningTask to_task(const Tour & t)
{
  static const auto domain =
    opportune::task::parse_domain(opportune::task::read_file(fixtures::valencia("domain.pddl")));
  opportune::task::PlanningTask task;
  task.domain = domain;
  task.problem = opportune::task::parse_problem(problem_text(t), domain);
  return task;
}

/// Best tour length over every visiting order. Each walk starts as soon
/// as the tourist is free and the day is active; each visit starts at
/// arrival or at opening, whichever is later. A visit or walk that is
/// still running when its window closes fails.
inline std::optional<std::int64_t> oracle_best(const Tour & t)
{
  std::vector<int> order(t.pois.size());
  std::iota(order.begin(), order.end(), 1);
  std::optional<std::int64_t> best;
  auto walk = [&](std::int64_t now, int from, int to) -> std::optional<std::int64_t> {
      const std::int64_t start = std::max(now, t.active_open);
      if (start >= t.active_close) {
        return std::nullopt;
      }
      const std::int64_t end = start + t.walk[static_cast<std::size_t>(from)][static_cast<std::size_t>(to)];
      if (end >= t.active_close || end > t.horizon_end) {
        return std::nullopt;
      }
      return end;
    };
  do {
    std::int64_t now = t.horizon_start;
    int at = 0;
    bool ok = true;
    for (int poi : order) {
      const auto arrive = walk(now, at, poi);
      if (!arrive) {
        ok = false;
        break;
      }
      const auto & p = t.pois[static_cast<std::size_t>(poi - 1)];
      const std::int64_t start = std::max({*arrive, p.open, t.active_open});
      const std::int64_t end = start + p.duration;
      if (end >= p.close || end >= t.active_close || end > t.horizon_end) {
        ok = false;
        break;
      }
      now = end;
      at = poi;
    }
    if (!ok) {
      continue;
    }
    const auto back = walk(now, at, 0);
    if (!back) {
      continue;
    }
    const std::int64_t total = *back - t.horizon_start;
    if (!best || total < *best) {
      best = total;
    }
  } while (std::next_permutation(order.begin(), order.end()));
  return best;
}

}  // namespace tours

#endif  // OPPORTUNE_TESTS__TOUR_GEN_HPP_
