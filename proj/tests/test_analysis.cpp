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

#include <cmath>

#include "ltlgame/analysis.hpp"
#include "ltlgame/hoa.hpp"
#include "ltlgame/priority.hpp"
#include "random_games.hpp"
#include "test_util.hpp"

namespace ltlgame {
namespace {

using testing_util::read_data;

MarkovChain chain(std::vector<std::vector<Outcome>> trans, std::vector<Color> color = {}) {
  MarkovChain mc;
  mc.trans = std::move(trans);
  mc.color = std::move(color);
  return mc;
}

TEST(InduceMc, SingleSelfLoop) {
  GameGraph g;
  g.owner = {Player::kController};
  g.choices = {{{0, {{0, 1.0}}}}};
  g.action_names = {"stay"};
  const auto mc = induce_mc(g, first_action_pair(g));
  ASSERT_EQ(mc.size(), 1U);
  EXPECT_EQ(mc.trans[0][0].target, 0U);
  EXPECT_THROW(induce_mc(g, PureStrategyPair{}), ValidationError);
  EXPECT_THROW(induce_mc(g, PureStrategyPair{{5}}), ValidationError);
}

class ExampleAnalysis : public ::testing::Test {
 protected:
  StochasticGame g = load_game(read_data("games/example.game"));
  Dpa d = parse_hoa(read_data("automata/example.hoa"));
  ProductGame p = build_product(g, d);

  StateId at(const std::string& s, DpaState q) const {
    for (StateId x = 0; x < p.size(); ++x)
      if (p.game_state[x] == g.state(s) && p.dpa_state[x] == q) return x;
    throw std::runtime_error("missing product state");
  }
  PureStrategyPair alternating_adversary() const {
    auto pair = first_action_pair(p.graph);
    pair.action[at("s1", 1)] = g.action("beta3");
    pair.action[at("s1", 0)] = g.action("beta4");
    return pair;
  }
};

TEST_F(ExampleAnalysis, AdversaryCycleIsARejectingBscc) {
  const auto mc = induce_mc(p, alternating_adversary());
  const std::vector<StateId> cycle = [&] {
    std::vector<StateId> c{at("s1", 1), at("s2", 1), at("s1", 0), at("s3", 0)};
    std::sort(c.begin(), c.end());
    return c;
  }();
  const auto b = bsccs(mc);
  EXPECT_NE(std::find(b.begin(), b.end(), cycle), b.end());
  EXPECT_EQ(classify_bscc(mc, cycle), BsccClass::kRejecting);
}

TEST_F(ExampleAnalysis, UnreachableChoiceDoesNotChangeTheReachableChain) {
  // With beta1 chosen at s0, the s0 copy with q1 is never entered.
  auto pair = alternating_adversary();
  const auto base = induce_mc(p, pair);
  const auto reach = base.reachable();
  for (StateId x = 0; x < p.size(); ++x) {
    if (reach[x] || p.graph.choices[x].size() < 2) continue;
    auto other = pair;
    other.action[x] = p.graph.choices[x].back().action;
    const auto changed = induce_mc(p, other);
    for (StateId y = 0; y < p.size(); ++y)
      if (reach[y]) {
        EXPECT_EQ(changed.trans[y].size(), base.trans[y].size());
      }
    EXPECT_DOUBLE_EQ(parity_probability(changed)[p.graph.initial], parity_probability(base)[p.graph.initial]);
  }
}

TEST(Bscc, Examples) {
  EXPECT_EQ(bsccs(chain({{{1, 1.0}}, {{0, 1.0}}})), (std::vector<std::vector<StateId>>{{0, 1}}));
  EXPECT_EQ(bsccs(chain({{{1, 1.0}}, {{1, 1.0}}})), (std::vector<std::vector<StateId>>{{1}}));
  EXPECT_EQ(bsccs(chain({{{1, 0.5}, {2, 0.5}}, {{1, 1.0}}, {{2, 1.0}}})),
            (std::vector<std::vector<StateId>>{{1}, {2}}));
}

TEST(Bscc, Classification) {
  EXPECT_EQ(classify_bscc(std::vector<Color>{2}, {0}), BsccClass::kAccepting);
  EXPECT_EQ(classify_bscc(std::vector<Color>{1, 2, 3, 4}, {0, 1, 2, 3}), BsccClass::kAccepting);
  EXPECT_EQ(classify_bscc(std::vector<Color>{2, 5, 4, 5}, {0, 1, 2, 3}), BsccClass::kRejecting);
}

TEST(Bscc, RandomChainsPartitionStates) {
  Rng rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const auto p = testing_util::random_product(rng);
    const auto mc = induce_mc(p, testing_util::random_pair(rng, p.graph));
    const auto b = bsccs(mc);
    std::vector<int> owner(mc.size(), -1);
    for (std::size_t i = 0; i < b.size(); ++i)
      for (StateId s : b[i]) {
        EXPECT_EQ(owner[s], -1);
        owner[s] = static_cast<int>(i);
      }
    ASSERT_FALSE(b.empty());
    // Closed, and every member reaches every other member.
    for (const auto& comp : b)
      for (StateId s : comp) {
        for (const auto& o : mc.trans[s]) EXPECT_EQ(owner[o.target], owner[s]);
        MarkovChain from = mc;
        from.initial = s;
        const auto r = from.reachable();
        for (StateId t : comp) EXPECT_TRUE(r[t]);
      }
    // Every state reaches some BSCC.
    std::vector<bool> any(mc.size(), false);
    for (const auto& comp : b)
      for (StateId s : comp) any[s] = true;
    const auto pr = reach_prob(mc, any);
    for (double v : pr) EXPECT_NEAR(v, 1.0, 1e-9);
  }
}

TEST(ReachProb, Examples) {
  const auto all = reach_prob(chain({{{1, 1.0}}, {{0, 1.0}}}), {true, true});
  EXPECT_EQ(all, (std::vector<double>{1.0, 1.0}));
  const auto as = reach_prob(chain({{{0, 0.5}, {1, 0.5}}, {{1, 1.0}}}), {false, true});
  EXPECT_NEAR(as[0], 1.0, 1e-12);
  const auto split = reach_prob(chain({{{1, 0.3}, {2, 0.7}}, {{1, 1.0}}, {{2, 1.0}}}), {false, true, false});
  EXPECT_NEAR(split[0], 0.3, 1e-12);
  EXPECT_EQ(split[2], 0.0);
}

TEST(ReachProb, GamblersRuinUsesTheSparseSolver) {
  // Fair random walk on 0..n with absorbing ends: Pr(reach n from i) = i/n.
  const std::size_t n = kDenseSolveLimit + 500;
  MarkovChain mc;
  mc.trans.resize(n + 1);
  mc.trans[0] = {{0, 1.0}};
  mc.trans[n] = {{n, 1.0}};
  for (StateId i = 1; i < n; ++i) mc.trans[i] = {{i - 1, 0.5}, {i + 1, 0.5}};
  std::vector<bool> target(n + 1, false);
  target[n] = true;
  const auto v = reach_prob(mc, target);
  for (StateId i : {StateId{1}, n / 3, n / 2, n - 1})
    EXPECT_NEAR(v[i], static_cast<double>(i) / static_cast<double>(n), 1e-9);
}

// ---------------------------------------------------------------------------
// Exact parity values

TEST(ExactValue, UniversalAndAllOdd) {
  Rng rng(9);
  for (int trial = 0; trial < 20; ++trial) {
    auto p = testing_util::random_product(rng);
    std::fill(p.color.begin(), p.color.end(), 2);
    EXPECT_NEAR(parity_value_exact(p).value, 1.0, 1e-12);
    for (Color& c : p.color) c = 1 + 2 * static_cast<Color>(rng.below(2));
    EXPECT_NEAR(parity_value_exact(p).value, 0.0, 1e-12);
  }
}

TEST_F(ExampleAnalysis, ExampleGameValue) {
  // The controller leaves s0 by beta1: 0.9 reaches the a-loop through s4 and
  // s5 where b recurs; 0.1 reaches s1, where alternating beta3 and beta4
  // keeps the top recurring color odd.
  const auto r = parity_value_exact(p, {.enumeration_cap = 10'000'000, .threads = 1, .record_outcomes = true});
  EXPECT_NEAR(r.value, 0.9, 1e-12);
  EXPECT_EQ(r.optimal.action[p.graph.initial], g.action("beta1"));
  EXPECT_EQ(r.outcomes.size(), r.pairs);
  EXPECT_NEAR(worst_case_exact(p.graph, p.color, r.optimal).value, 0.9, 1e-12);

  const auto csv = pair_outcomes_csv(r.outcomes);
  EXPECT_EQ(csv.rfind("controller_map,adversary_map,value\n", 0), 0U);
}

TEST_F(ExampleAnalysis, ThreadedEnumerationAgrees) {
  const auto serial = parity_value_exact(p);
  const auto threaded = parity_value_exact(p, {.enumeration_cap = 10'000'000, .threads = 4, .record_outcomes = false});
  EXPECT_EQ(serial.value, threaded.value);
  EXPECT_EQ(serial.optimal.action, threaded.optimal.action);
}

TEST(ExactValue, CapIsEnforced) {
  Rng rng(2);
  testing_util::RandomGameShape shape;
  shape.min_states = shape.max_states = 8;
  shape.max_actions = 3;
  const auto p = testing_util::random_product(rng, shape);
  EXPECT_THROW(parity_value_exact(p, {.enumeration_cap = 1, .threads = 1, .record_outcomes = false}),
               CapExceeded);
}

TEST(ExactValue, RandomGamesThreadedMatchesSerial) {
  Rng rng(17);
  for (int trial = 0; trial < 30; ++trial) {
    const auto p = testing_util::random_product(rng);
    const auto a = parity_value_exact(p);
    const auto b = parity_value_exact(p, {.enumeration_cap = 10'000'000, .threads = 3, .record_outcomes = false});
    EXPECT_NEAR(a.value, b.value, 1e-15);
    EXPECT_NEAR(worst_case_exact(p.graph, p.color, a.optimal).value, a.value, 1e-12);
  }
}

// ---------------------------------------------------------------------------
// One-player parity against enumeration

TEST(MdpParity, MatchesEnumerationOnRandomMdps) {
  Rng rng(23);
  for (int trial = 0; trial < 150; ++trial) {
    auto p = testing_util::random_product(rng);
    for (auto& o : p.graph.owner) o = Player::kController;
    const auto even = mdp_max_parity(p.graph, p.color, true);
    const auto exact = parity_value_exact(p);
    EXPECT_NEAR(even.value[p.graph.initial], exact.value, 1e-9) << "trial " << trial;
    // The returned policy achieves the value.
    PureStrategyPair pol;
    for (StateId s = 0; s < p.size(); ++s) pol.action.push_back(p.graph.choices[s][even.policy[s]].action);
    EXPECT_NEAR(parity_probability(induce_mc(p, pol))[p.graph.initial], exact.value, 1e-9);

    // Minimizing: the adversary owns everything.
    for (auto& o : p.graph.owner) o = Player::kAdversary;
    const auto odd = mdp_max_parity(p.graph, p.color, false);
    EXPECT_NEAR(1.0 - odd.value[p.graph.initial], parity_value_exact(p).value, 1e-9) << "trial " << trial;
  }
}

TEST(MdpParity, WorstCaseMatchesAdversaryEnumeration) {
  Rng rng(29);
  for (int trial = 0; trial < 100; ++trial) {
    const auto p = testing_util::random_product(rng);
    const auto ctrl = testing_util::random_pair(rng, p.graph);
    GameGraph mdp = p.graph;
    for (StateId s = 0; s < p.size(); ++s)
      if (mdp.owner[s] == Player::kController) mdp.choices[s] = {p.graph.choices[s][*p.graph.choice_index(s, ctrl.action[s])]};
    const auto odd = mdp_max_parity(mdp, p.color, false);
    EXPECT_NEAR(1.0 - odd.value[p.graph.initial], worst_case_exact(p.graph, p.color, ctrl).value, 1e-9);
  }
}

// ---------------------------------------------------------------------------
// Discounted values

PriorityGame one_state(double reward, double eps) {
  PriorityGame pg;
  pg.graph.owner = {Player::kController};
  pg.graph.choices = {{{0, {{0, 1.0}}}}};
  pg.graph.action_names = {"stay"};
  pg.product_state = {0};
  pg.priority = {2};
  pg.reward = {reward};
  pg.epsilon = eps;
  return pg;
}

TEST(Discounted, GeometricSeries) {
  EXPECT_NEAR(discounted_value_vi(one_state(0.01, 0.01), 1e-9).value[0], 1.0, 1e-8);
  EXPECT_EQ(discounted_value_vi(one_state(0.0, 0.01), 1e-9).value[0], 0.0);
  EXPECT_NEAR(discounted_value_of_pair(one_state(0.01, 0.01), {{0}})[0], 1.0, 1e-12);
  EXPECT_THROW(discounted_value_vi(one_state(0.01, 0.01), 0.0), ValidationError);
}

TEST_F(ExampleAnalysis, DiscountedValueApproachesTheParityValue) {
  // Baselines from value iteration at tolerance 1e-9. The gap to 0.9 shrinks
  // roughly like sqrt(eps): the priority-0 phase lasts about 1/sqrt(eps)
  // steps and earns nothing.
  const std::vector<std::pair<double, double>> baseline = {
      {0.2, 0.306239}, {0.1, 0.403613}, {0.05, 0.547712}, {0.01, 0.750717}, {0.001, 0.855684}};
  double previous_gap = 1;
  for (const auto& [eps, expected] : baseline) {
    const auto pg = build_priority(p, Prm(p.k, eps));
    const auto sol = discounted_value_vi(pg, 1e-9);
    const double v = sol.value[pg.graph.initial];
    EXPECT_NEAR(v, expected, 1e-6) << "eps " << eps;
    EXPECT_LT(std::abs(v - 0.9), previous_gap);
    previous_gap = std::abs(v - 0.9);
    // The greedy pair's exact discounted value agrees with the iterate.
    EXPECT_NEAR(discounted_value_of_pair(pg, sol.greedy)[pg.graph.initial], v, 1e-6);
  }
  EXPECT_LE(previous_gap, 0.05);
}

TEST(Discounted, VIMatchesPairEnumerationOnRandomGames) {
  Rng rng(31);
  for (int trial = 0; trial < 40; ++trial) {
    testing_util::RandomGameShape shape;
    shape.max_states = 4;
    shape.max_actions = 2;
    shape.k = 3;
    const auto p = testing_util::random_product(rng, shape);
    const auto pg = build_priority(p, Prm(p.k, 0.2));
    const auto sol = discounted_value_vi(pg, 1e-10);
    // Brute force max-min of the exact pair values at the initial state.
    detail::MapSpace ctrl(pg.graph, Player::kController), adv(pg.graph, Player::kAdversary);
    ctrl.size_with_cap(1'000'000);
    adv.size_with_cap(1'000'000);
    if (ctrl.count * adv.count > 200'000) continue;
    auto pair = first_action_pair(pg.graph);
    double best = -1;
    for (std::uint64_t ci = 0; ci < ctrl.count; ++ci) {
      ctrl.apply(pg.graph, ci, pair);
      double worst = 2;
      for (std::uint64_t ai = 0; ai < adv.count; ++ai) {
        adv.apply(pg.graph, ai, pair);
        worst = std::min(worst, discounted_value_of_pair(pg, pair)[pg.graph.initial]);
      }
      best = std::max(best, worst);
    }
    EXPECT_NEAR(sol.value[pg.graph.initial], best, 1e-7) << "trial " << trial;
  }
}

// ---------------------------------------------------------------------------
// BSCC correspondence

TEST(Bijection, SingleStateSelfLoop) {
  const auto p = testing_util::chain_product({2}, 0);
  const auto pg = build_priority(p, Prm(2, 0.1));
  const auto pair = first_action_pair(pg.graph);
  std::vector<StateId> proj(pg.product_state);
  const auto r = bscc_bijection_check(induce_mc(pg, pair), induce_mc(p, first_action_pair(p.graph)), proj);
  EXPECT_TRUE(r.ok) << r.witness;
}

TEST(Bijection, RandomProductsAndPairs) {
  Rng rng(37);
  for (int trial = 0; trial < 200; ++trial) {
    const auto p = testing_util::random_product(rng);
    const auto product_pair = testing_util::random_pair(rng, p.graph);
    for (double eps : {0.3, 0.1}) {
      const auto pg = build_priority(p, Prm(p.k, eps));
      // The projection of a priority chain is the product chain only when
      // the priority pair ignores the priority.
      const auto pair = testing_util::lift_pair(pg, product_pair);
      const auto r = bscc_bijection_check(induce_mc(pg, pair), induce_mc(p, product_pair), pg.product_state);
      EXPECT_TRUE(r.ok) << "trial " << trial << ": " << r.witness;
    }
  }
}

TEST(Bijection, CorruptedChainIsCaught) {
  // 0 (color 1) -> 1 (color 3) -> 2 (color 1, self-loop). Priority 3 at state
  // 2 only leaves through its reset move; dropping it strands a second BSCC
  // over the product's single one.
  const auto p = testing_util::chain_product({1, 3, 1}, 2);
  const auto pg = build_priority(p, Prm(3, 0.1));
  const auto pair = first_action_pair(pg.graph);
  auto mc = induce_mc(pg, pair);
  const auto product_mc = induce_mc(p, first_action_pair(p.graph));
  EXPECT_TRUE(bscc_bijection_check(mc, product_mc, pg.product_state).ok);
  StateId victim = pg.size();
  for (StateId x = 0; x < pg.size(); ++x)
    if (pg.product_state[x] == 2 && pg.priority[x] == 3) victim = x;
  ASSERT_LT(victim, pg.size());
  testing_util::drop_reset_edges(mc, pg, victim);
  const auto r = bscc_bijection_check(mc, product_mc, pg.product_state);
  EXPECT_FALSE(r.ok);
  EXPECT_FALSE(r.witness.empty());
}

TEST(Csv, ValuesHeader) {
  EXPECT_EQ(values_csv({0.5, 1}, {"a", "b"}), "state,value\na,0.5\nb,1\n");
}

}  // namespace
}  // namespace ltlgame
