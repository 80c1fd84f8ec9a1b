// Copyright 2026 The ltlgame Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include "ltlgame/config.hpp"
#include "ltlgame/hoa.hpp"
#include "ltlgame/inspect.hpp"
#include "test_util.hpp"

namespace ltlgame {
namespace {

using testing_util::read_data;

TEST(Config, SectionsAndTypes) {
  const auto values = parse_config_text(
      "# comment\n[game]\ngrid = grids/a.grid\n[prm]\nepsilon = 0.05 ; trailing\n"
      "[learn]\nepisodes = 10\nsteps=20\nrandom_start_episodes = 5\ndecay = exponential\n"
      "[output]\nsvg = yes\nthreads = 2\n",
      "/base");
  EXPECT_EQ(values.at("game.grid"), "/base/grids/a.grid");
  const auto c = make_run_config(values);
  EXPECT_EQ(c.grid_file, "/base/grids/a.grid");
  EXPECT_DOUBLE_EQ(c.epsilon, 0.05);
  EXPECT_EQ(c.schedule.episodes, 10U);
  EXPECT_EQ(c.schedule.steps, 20U);
  EXPECT_EQ(c.schedule.random_start_episodes, 5U);
  EXPECT_EQ(c.schedule.decay, Decay::kExponential);
  EXPECT_TRUE(c.svg);
  EXPECT_EQ(c.threads, 2U);
}

TEST(Config, DefaultsFollowTheReferenceSchedule) {
  const auto c = make_run_config({});
  EXPECT_DOUBLE_EQ(c.epsilon, 0.01);
  EXPECT_EQ(c.schedule.steps, 8192U);
  EXPECT_EQ(c.schedule.episodes, 131072U);
  EXPECT_EQ(c.schedule.random_start_episodes, 122880U);
}

TEST(Config, OverridesReplaceFileValues) {
  auto values = parse_config_text("[learn]\nseed = 4\n[output]\ndir = out/x\n", "/base");
  EXPECT_EQ(values.at("output.dir"), "out/x");
  apply_overrides(values, {"learn.seed=9", "prm.epsilon = 0.2"});
  const auto c = make_run_config(values);
  EXPECT_EQ(c.schedule.seed, 9U);
  EXPECT_DOUBLE_EQ(c.epsilon, 0.2);
  EXPECT_THROW(apply_overrides(values, {"seed=1"}), ValidationError);
}

TEST(Config, Errors) {
  EXPECT_THROW(parse_config_text("[bogus]\n"), ParseError);
  EXPECT_THROW(parse_config_text("[game\n"), ParseError);
  EXPECT_THROW(parse_config_text("x = 1\n"), ParseError);
  EXPECT_THROW(parse_config_text("[game]\njust words\n"), ParseError);
  EXPECT_THROW(make_run_config({{"prm.epsilon", "0"}}), ValidationError);
  EXPECT_THROW(make_run_config({{"prm.epsilon", "1.5"}}), ValidationError);
  EXPECT_THROW(make_run_config({{"prm.epsilon", "abc"}}), ValidationError);
  EXPECT_THROW(make_run_config({{"learn.colour", "1"}}), ValidationError);
  EXPECT_THROW(make_run_config({{"game.game", "a"}, {"game.grid", "b"}}), ValidationError);
  EXPECT_THROW(make_run_config({{"learn.random_start_episodes", "200000"}}), ValidationError);
  EXPECT_THROW(load_config_file("/no/such/file.ini"), IoError);
}

GridGame grid_from(const std::string& text) { return build_gridworld(parse_grid_spec(text)); }

WorstCaseEvaluation first_action_evaluation(const GridGame& gw, const Dpa& d) {
  const auto p = build_product(gw.game, d);
  const Prm m(p.k, 0.1);
  const auto pg = build_priority(p, m);
  const auto induced = induce_strategy(gw.game, d, m, p, pg, first_action_pair(pg.graph));
  return evaluate_worst_case(gw.game, d, m, induced.controller);
}

TEST(Render, EmptyGridIsASquareBlock) {
  const auto gw = grid_from("grid 2 2\ninit 0 0\n");
  const auto ev = first_action_evaluation(gw, universal_dpa(gw.game.ap));
  std::set<Cell> recurrent;
  for (const auto& b : worst_case_bscc_cells(ev, gw)) recurrent.insert(b.begin(), b.end());
  const auto text = render_ascii(gw, recurrent);
  ASSERT_EQ(text.size(), 6U);
  EXPECT_EQ(text[2], '\n');
  EXPECT_EQ(text[5], '\n');
  EXPECT_FALSE(recurrent.empty());
}

TEST(Render, ObstaclesAndLabels) {
  const auto gw = grid_from("grid 3 2\ninit 0 0\nobstacle 1 1\nlabel 0 2 goal\n");
  EXPECT_EQ(render_ascii(gw), ".#.\nS.g\n");
  EXPECT_EQ(render_ascii(gw, {{0, 1}}), ".#.\nS*g\n");
  const auto svg = render_svg(gw, {{0, 1}});
  EXPECT_NE(svg.find("fill=\"#333333\""), std::string::npos);
  EXPECT_NE(svg.find("fill=\"#9be59b\""), std::string::npos);
  EXPECT_NE(svg.find(">goal<"), std::string::npos);
}

TEST(Inspect, RepeatedVisitsAreDetected) {
  // The first enabled action shuttles between the two ends through a.
  const auto gw = grid_from("grid 3 1\ninit 0 0\nlabel 0 1 a\n");
  const auto ev = first_action_evaluation(gw, universal_dpa(gw.game.ap));
  EXPECT_FALSE(visited_at_most_once(ev, gw, "a"));
  // Starting on a, the walk leaves it for the right pair and never returns.
  const auto once = grid_from("grid 3 1\ninit 0 0\nlabel 0 0 a\n");
  EXPECT_TRUE(visited_at_most_once(first_action_evaluation(once, universal_dpa(once.game.ap)), once, "a"));
}

TEST(Inspect, OptimalNurseryStrategyStaysInTheRoom) {
  const auto gw = build_gridworld(parse_grid_spec(read_data("grids/nursery.grid")));
  const auto d = parse_hoa(read_data("automata/nursery.hoa"));
  const auto p = build_product(gw.game, d);
  const auto cv = certified_parity_value(p);
  ASSERT_TRUE(cv.certified);
  EXPECT_NEAR(cv.lower, 1.0, 1e-9);
  const Prm m(p.k, cv.epsilon);
  const auto pg = build_priority(p, m);
  const auto induced = induce_strategy(gw.game, d, m, p, pg, cv.greedy);
  const auto ev = evaluate_worst_case(gw.game, d, m, induced.controller);
  const auto d_cells = cells_labelled(gw, "d");
  const auto e_cells = cells_labelled(gw, "e");
  for (const auto& cells : worst_case_bscc_cells(ev, gw))
    for (const auto& c : cells) {
      EXPECT_FALSE(d_cells.count(c));
      EXPECT_TRUE(e_cells.count(c));
    }
  EXPECT_TRUE(visited_at_most_once(ev, gw, "a"));
}

}  // namespace
}  // namespace ltlgame
