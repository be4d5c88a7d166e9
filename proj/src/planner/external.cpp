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

#include <array>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <regex>
#include <sstream>

#include "opportune/planner/planner.hpp"
#include "opportune/task/pddl.hpp"

namespace opportune::planner
{

namespace
{

std::filesystem::path scratch_dir()
{
  std::random_device rd;
  const auto base = std::filesystem::temp_directory_path();
  for (int attempt = 0; attempt < 16; ++attempt) {
    const auto dir = base / ("opportune-ext-" + std::to_string(rd()));
    if (std::filesystem::create_directory(dir)) {
      return dir;
    }
  }
  throw task::TaskError("cannot create a scratch directory for the external planner");
}

std::string shell_quote(const std::string & s)
{
  std::string out = "'";
  for (char c : s) {
    if (c == '\'') {
      out += "'\\''";
    } else {
      out.push_back(c);
    }
  }
  return out + "'";
}

}  // namespace

ExternalPlanner::ExternalPlanner(std::string command)
: command_(std::move(command))
{}

SolveResult ExternalPlanner::solve(const task::PlanningTask & t, const PlannerConfig &)
{
  const auto started = std::chrono::steady_clock::now();
  const auto dir = scratch_dir();
  const auto domain_path = dir / "domain.pddl";
  const auto problem_path = dir / "problem.pddl";
  std::ofstream(domain_path) << task::write_domain(t.domain);
  std::ofstream(problem_path) << task::write_problem(t.problem);

  const std::string cmd = command_ + " " + shell_quote(domain_path.string()) + " " +
    shell_quote(problem_path.string()) + " 2>/dev/null";
  std::string output;
  int status = -1;
  if (FILE * pipe = popen(cmd.c_str(), "r")) {
    std::array<char, 4096> buf{};
    std::size_t n = 0;
    while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) {
      output.append(buf.data(), n);
    }
    status = pclose(pipe);
  }
  std::filesystem::remove_all(dir);

  static const std::regex step_line(R"(^\s*\d+(\.\d+)?\s*:\s*\(.*\)\s*\[\s*\d+(\.\d+)?\s*\]\s*$)");
  std::ostringstream plan_text;
  std::istringstream lines(output);
  std::string line;
  bool any = false;
  while (std::getline(lines, line)) {
    if (std::regex_match(line, step_line)) {
      plan_text << line << "\n";
      any = true;
    }
  }

  SolveResult r;
  r.stats.elapsed_ms = std::chrono::duration<double, std::milli>(
    std::chrono::steady_clock::now() - started).count();
  if (!any) {
    bool trivially_done = true;
    for (const auto & g : t.problem.goals) {
      trivially_done = trivially_done && t.problem.init.count(g) > 0;
    }
    if (status != 0 || !trivially_done) {
      r.status = SolveStatus::Unsolvable;
      r.message = "external planner produced no plan (exit status " + std::to_string(status) + ")";
      return r;
    }
  }
  try {
    r.plan = task::parse_plan(plan_text.str());
  } catch (const task::TaskError & e) {
    r.status = SolveStatus::Unsolvable;
    r.message = std::string("cannot read external plan: ") + e.what();
    return r;
  }
  const auto v = validate(r.plan, t);
  if (!v.valid) {
    r.status = SolveStatus::Unsolvable;
    r.message = "external plan does not validate: " + v.violation->what;
    r.plan = {};
    return r;
  }
  r.status = SolveStatus::Solved;
  r.has_plan = true;
  r.metric = metric_value(r.plan, t);
  return r;
}

}  // namespace opportune::planner
