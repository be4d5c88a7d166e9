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

#include "doctest.h"
#include "fixtures.hpp"
#include "opportune/cli/commands.hpp"
#include "opportune/cli/config.hpp"

using namespace opportune;
using cli::ConfigError;

TEST_CASE("defaults")
{
  const cli::Config c;
  CHECK(c.match.filter_threshold == 0.5);
  CHECK(c.match.class_threshold == 0.85);
  CHECK(c.match.inner_theta == 0.9);
  CHECK(c.planner.strategy == planner::Strategy::Optimal);
  CHECK_FALSE(c.knowledge_online);
  CHECK(c.squared_sv);
  CHECK_FALSE(c.charge_planning_time);
  CHECK(cli::to_json(c).size() == cli::config_keys().size());
}

TEST_CASE("values")
{
  CHECK(std::get<std::string>(cli::parse_value(R"("a \"b\"\n")")) == "a \"b\"\n");
  CHECK(std::get<std::string>(cli::parse_value("'C:\\dir'")) == "C:\\dir");
  CHECK(std::get<bool>(cli::parse_value("true")));
  CHECK(std::get<long long>(cli::parse_value("2_000_000")) == 2000000);
  CHECK(std::get<double>(cli::parse_value("0.75")) == 0.75);
  CHECK(std::get<double>(cli::parse_value("-1e-3")) == -0.001);
  for (const char * bad : {"", "\"open", "'a'b'", "yes", "1.2.3", "\"\\q\""}) {
    CHECK_THROWS_AS(cli::parse_value(bad), ConfigError);
  }
}

TEST_CASE("tables, dotted keys and comments")
{
  const auto c = cli::parse_config(
    "# top\n"
    "match.filter_threshold = 0.4  # inline\n"
    "[planner]\n"
    "strategy = \"greedy\"\n"
    "node_budget = 1000\n"
    "[ provider ]\n"
    "path = \"facts.json\"\n"
    "window_predicate = 'available#1'\n",
    "/data");
  CHECK(c.match.filter_threshold == 0.4);
  CHECK(c.planner.strategy == planner::Strategy::Greedy);
  CHECK(c.planner.node_budget == 1000);
  CHECK(c.provider_path == std::filesystem::path("/data/facts.json"));
  CHECK(c.bindings.window_predicate == "available#1");
}

TEST_CASE("bad files name the line")
{
  for (const char * bad : {
      "[match]\nunknown = 1\n",
      "match.filter_threshold = 1.5\n",
      "planner.node_budget = 0\n",
      "planner.node_budget = 1.5\n",
      "planner.strategy = \"fastest\"\n",
      "knowledge.online = \"yes\"\n",
      "ontology.repository = 3\n",
      "[planner\n",
      "[[planner]]\n",
      "just words\n",
      "a..b = 1\n"})
  {
    CHECK_THROWS_AS(cli::parse_config(bad), ConfigError);
  }
  try {
    cli::parse_config("\n\n[match]\nbogus = 2\n");
    FAIL("accepted an unknown key");
  } catch (const ConfigError & e) {
    CHECK(std::string(e.what()).find("line 4") == 0);
  }
}

TEST_CASE("overrides")
{
  cli::Config c;
  cli::apply_override(c, "planner.strategy=greedy");
  CHECK(c.planner.strategy == planner::Strategy::Greedy);
  cli::apply_override(c, "provider.window_predicate=true");
  CHECK(c.bindings.window_predicate == "true");
  cli::apply_override(c, "execution.report_only=true");
  CHECK(c.report_only);
  cli::apply_override(c, " match.inner_theta = 0.8 ");
  CHECK(c.match.inner_theta == 0.8);
  CHECK_THROWS_AS(cli::apply_override(c, "planner.node_budget=-5"), ConfigError);
  CHECK_THROWS_AS(cli::apply_override(c, "no_equals"), ConfigError);
  CHECK_THROWS_AS(cli::apply_override(c, "nope.key=1"), ConfigError);
}

TEST_CASE("the bundled configuration")
{
  const auto c = cli::load_config(fixtures::valencia("config.toml"));
  CHECK(c.store_path == fixtures::valencia("conceptnet.tsv"));
  CHECK(c.repository == fixtures::valencia("repo"));
  CHECK(c.provider_path == fixtures::valencia("provider.json"));
  CHECK_THROWS_AS(cli::load_config("/nonexistent.toml"), ConfigError);
}

TEST_CASE("simulation report on the valencia scenario")
{
  cli::Options opt;
  opt.config = cli::load_config(fixtures::valencia("config.toml"));
  cli::SimulateArgs args{
    fixtures::valencia("domain.pddl"), fixtures::valencia("problem.pddl"), std::nullopt,
    fixtures::valencia("scenario.json")};
  const auto out = cli::cmd_simulate(opt, args);
  REQUIRE(out.code == cli::kOk);
  const auto r = nlohmann::json::parse(out.out);
  std::vector<int> visits;
  for (const auto & p : r["plans"]) {
    visits.push_back(p["visits"].get<int>());
  }
  CHECK(visits == std::vector<int>{5, 6, 7});
  CHECK(r["summary"] == "7 attractions visited, ate once, ends at hotel");
  CHECK(r["returned_to_start"] == true);
  CHECK_FALSE(r.contains("timings"));
  CHECK(cli::cmd_simulate(opt, args).log == out.log);

  args.scenario = fixtures::data_dir() / "valencia" / "missing.json";
  CHECK(cli::cmd_simulate(opt, args).code == cli::kInputError);
}
