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

// Product game composed with the priority reward machine. From <x, j> under
// action a the successor <x', j'> has probability P(x, a, x') * theta(j, c, j')
// where c is the color of the source product state x.

#pragma once

#include <deque>
#include <string>
#include <unordered_map>
#include <vector>

#include "ltlgame/common.hpp"
#include "ltlgame/game.hpp"
#include "ltlgame/prm.hpp"
#include "ltlgame/product.hpp"

namespace ltlgame {

struct PriorityGame {
  GameGraph graph;
  std::vector<StateId> product_state;
  std::vector<Priority> priority;
  std::vector<double> reward;
  double epsilon = 0;

  std::size_t size() const { return graph.size(); }
  double discount() const { return 1.0 - epsilon; }
};

inline double priority_reward(const PriorityGame& pg, StateId s) { return pg.reward.at(s); }
inline double priority_discount(const PriorityGame& pg) { return pg.discount(); }

inline PriorityGame build_priority(const ProductGame& p, const Prm& m) {
  if (m.k() < p.max_color())
    throw ValidationError("reward machine has " + std::to_string(m.k()) +
                          " colors but the product uses color " + std::to_string(p.max_color()));
  PriorityGame pg;
  pg.epsilon = m.epsilon();
  pg.graph.action_names = p.graph.action_names;
  const std::uint64_t width = static_cast<std::uint64_t>(m.k()) + 1;
  std::unordered_map<std::uint64_t, StateId> index;
  std::deque<StateId> queue;
  auto intern = [&](StateId x, Priority j) {
    auto [it, inserted] = index.emplace(x * width + static_cast<std::uint64_t>(j), pg.size());
    if (inserted) {
      pg.graph.owner.push_back(p.graph.owner[x]);
      pg.graph.choices.emplace_back();
      pg.product_state.push_back(x);
      pg.priority.push_back(j);
      pg.reward.push_back(m.reward(j));
      queue.push_back(it->second);
    }
    return it->second;
  };

  pg.graph.initial = intern(p.graph.initial, 0);
  while (!queue.empty()) {
    const StateId s = queue.front();
    queue.pop_front();
    const StateId x = pg.product_state[s];
    const auto& theta = m.transition(pg.priority[s], p.color[x]);
    std::vector<Choice> choices;
    for (const auto& c : p.graph.choices[x]) {
      Choice pc{c.action, {}};
      for (const auto& o : c.outcomes)
        for (const auto& t : theta) pc.outcomes.push_back({intern(o.target, t.target), o.prob * t.prob});
      choices.push_back(std::move(pc));
    }
    pg.graph.choices[s] = std::move(choices);
  }
  pg.graph.validate();
  return pg;
}

inline std::vector<std::string> priority_state_names(const PriorityGame& pg, const ProductGame& p,
                                                     const StochasticGame& g) {
  std::vector<std::string> names;
  for (StateId s = 0; s < pg.size(); ++s)
    names.push_back(p.name(pg.product_state[s], g) + "|j" + std::to_string(pg.priority[s]));
  return names;
}

inline std::string write_priority(const PriorityGame& pg, const ProductGame& p,
                                  const StochasticGame& g) {
  const auto names = priority_state_names(pg, p, g);
  std::vector<LabelSet> labels;
  std::vector<int> colors;
  for (StateId s = 0; s < pg.size(); ++s) {
    labels.push_back(g.labels[p.game_state[pg.product_state[s]]]);
    colors.push_back(p.color[pg.product_state[s]]);
  }
  GameExport ex;
  ex.state_names = &names;
  ex.ap = &g.ap;
  ex.labels = &labels;
  ex.colors = &colors;
  ex.rewards = &pg.reward;
  ex.discount = pg.discount();
  return write_game(pg.graph, ex);
}

}  // namespace ltlgame
