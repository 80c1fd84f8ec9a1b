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

#include "ltlgame/hoa.hpp"
#include "ltlgame/learner.hpp"
#include "ltlgame/strategy.hpp"
#include "random_games.hpp"
#include "test_util.hpp"

namespace ltlgame {
namespace {

using testing_util::read_data;

PriorityGame loops(double eps) {
  // State 0 picks between a rewarding loop (state 1) and a barren one (state 2).
  PriorityGame pg;
  pg.graph.owner = {Player::kController, Player::kController, Player::kController};
  pg.graph.action_names = {"a", "b"};
  pg.graph.choices = {{{0, {{1, 1.0}}}, {1, {{2, 1.0}}}}, {{0, {{1, 1.0}}}}, {{0, {{2, 1.0}}}}};
  pg.product_state = {0, 1, 2};
  pg.priority = {0, 2, 1};
  pg.reward = {0.0, eps, 0.0};
  pg.epsilon = eps;
  return pg;
}

LearnSchedule small_schedule(std::size_t episodes, std::size_t steps, std::uint64_t seed = 1) {
  LearnSchedule s;
  s.episodes = episodes;
  s.steps = steps;
  s.random_start_episodes = episodes / 2;
  s.seed = seed;
  return s;
}

TEST(Schedule, LinearDecayThenFlat) {
  auto s = small_schedule(1000, 1);
  EXPECT_DOUBLE_EQ(s.alpha(0), 0.5);
  EXPECT_NEAR(s.alpha(450), 0.275, 1e-12);
  EXPECT_NEAR(s.alpha(900), 0.05, 1e-12);
  EXPECT_NEAR(s.explore(999), 0.05, 1e-12);
  s.decay = Decay::kExponential;
  EXPECT_DOUBLE_EQ(s.alpha(0), 0.5);
  EXPECT_NEAR(s.alpha(450), 0.5 * std::sqrt(0.1), 1e-12);
  EXPECT_NEAR(s.alpha(950), 0.05, 1e-12);
}

TEST(Schedule, Validation) {
  auto s = small_schedule(10, 10);
  EXPECT_NO_THROW(s.validate());
  s.alpha_start = 0;
  EXPECT_THROW(s.validate(), ValidationError);
  s = small_schedule(10, 10);
  s.explore_end = 1.5;
  EXPECT_THROW(s.validate(), ValidationError);
  s = small_schedule(10, 10);
  s.random_start_episodes = 11;
  EXPECT_THROW(s.validate(), ValidationError);
  s = small_schedule(0, 10);
  EXPECT_THROW(s.validate(), ValidationError);
}

TEST(Learner, SelfLoopConvergesToOne) {
  PriorityGame pg;
  pg.graph.owner = {Player::kController};
  pg.graph.action_names = {"stay"};
  pg.graph.choices = {{{0, {{0, 1.0}}}}};
  pg.product_state = {0};
  pg.priority = {2};
  pg.reward = {0.1};
  pg.epsilon = 0.1;
  const auto r = minimax_q_train(pg, small_schedule(20, 1000));
  EXPECT_NEAR(r.q.at(0, 0), 1.0, 1e-3);
}

TEST(Learner, PrefersTheRewardingLoop) {
  const auto pg = loops(0.1);
  const auto r = minimax_q_train(pg, small_schedule(200, 200));
  EXPECT_EQ(greedy_strategy(pg.graph, r.q).action[0], 0U);
  EXPECT_GT(r.q.at(0, 0), r.q.at(0, 1) + 0.5);
}

TEST(Learner, GreedyRules) {
  auto pg = loops(0.1);
  QTable q(pg.graph);
  q.at(0, 0) = 0.9;
  q.at(0, 1) = 0.1;
  EXPECT_EQ(greedy_strategy(pg.graph, q).action[0], 0U);
  q.at(0, 0) = 0.1;
  q.at(0, 1) = 0.9;
  EXPECT_EQ(greedy_strategy(pg.graph, q).action[0], 1U);
  q.at(0, 0) = q.at(0, 1) = 0.5;
  EXPECT_EQ(greedy_strategy(pg.graph, q).action[0], 0U);
  pg.graph.owner[0] = Player::kAdversary;
  q.at(0, 0) = 0.2;
  q.at(0, 1) = 0.7;
  EXPECT_EQ(greedy_strategy(pg.graph, q).action[0], 0U);
  q.at(0, 0) = 0.7;
  q.at(0, 1) = 0.2;
  EXPECT_EQ(greedy_strategy(pg.graph, q).action[0], 1U);
}

TEST(Learner, DeterministicPerSeedAndBounded) {
  Rng rng(41);
  for (int trial = 0; trial < 10; ++trial) {
    const auto p = testing_util::random_product(rng);
    const auto pg = build_priority(p, Prm(p.k, 0.1));
    const auto a = minimax_q_train(pg, small_schedule(40, 200, 5));
    const auto b = minimax_q_train(pg, small_schedule(40, 200, 5));
    EXPECT_EQ(a.q, b.q);
    for (double v : a.q.values()) {
      EXPECT_GE(v, 0.0);
      EXPECT_LE(v, 1.0 + 1e-9);
    }
  }
  const auto pg = loops(0.1);
  EXPECT_FALSE(minimax_q_train(pg, small_schedule(5, 50, 1)).q == minimax_q_train(pg, small_schedule(5, 50, 2)).q);
}

TEST(Learner, LearningCurveAndCsv) {
  const auto pg = loops(0.1);
  auto s = small_schedule(100, 50);
  s.curve_interval = 25;
  const auto r = minimax_q_train(pg, s);
  ASSERT_EQ(r.curve.size(), 4U);
  EXPECT_EQ(r.curve.back().episode, 100U);
  EXPECT_NEAR(r.curve.back().value_estimate, 0.9, 1e-9);
  EXPECT_EQ(curve_csv(r.curve).rfind("episode,value_estimate\n25,", 0), 0U);
  const auto csv = qtable_csv(pg.graph, r.q, {"x", "y", "z"});
  EXPECT_EQ(csv.rfind("state,action,value\nx,a,", 0), 0U);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 5);
}

TEST(Learner, ExampleGameScaledSchedule) {
  const auto g = load_game(read_data("games/example.game"));
  const auto d = parse_hoa(read_data("automata/example.hoa"));
  const auto p = build_product(g, d);
  const Prm m(p.k, 0.01);
  const auto pg = build_priority(p, m);
  LearnSchedule s;
  s.steps = 1024;
  s.episodes = 2048;
  s.random_start_episodes = 1792;
  s.seed = 1;
  const auto r = minimax_q_train(pg, s);
  const auto induced = induce_strategy(g, d, m, p, pg, greedy_strategy(pg.graph, r.q));
  EXPECT_NEAR(evaluate_worst_case(g, d, m, induced.controller).value, parity_value_exact(p).value, 0.05);
}

}  // namespace
}  // namespace ltlgame
