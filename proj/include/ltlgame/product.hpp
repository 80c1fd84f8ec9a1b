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

// Synchronous product of a labeled game with a parity automaton. Product
// state <s,q> moves to <s',q'> with q' = delta(q, L(s)) and is colored
// C(q, L(s)): the color of the automaton transition taken on leaving it.
// On silent game states the automaton stays put and the color is 1.

#pragma once

#include <deque>
#include <string>
#include <unordered_map>
#include <vector>

#include "ltlgame/common.hpp"
#include "ltlgame/dpa.hpp"
#include "ltlgame/game.hpp"

namespace ltlgame {

enum class LabelConvention {
  kSource,  // q' = delta(q, L(s)); the default, coherent with the coloring
  kTarget,  // q' = delta(q, L(s')); for experiments only
};

struct ProductOptions {
  LabelConvention convention = LabelConvention::kSource;
};

struct ProductGame {
  GameGraph graph;
  std::vector<StateId> game_state;
  std::vector<DpaState> dpa_state;
  std::vector<Color> color;
  Color k = 1;

  std::size_t size() const { return graph.size(); }
  std::string name(StateId s, const StochasticGame& g) const {
    return g.state_names[game_state[s]] + "|q" + std::to_string(dpa_state[s]);
  }
  Color max_color() const {
    Color m = 1;
    for (Color c : color) m = std::max(m, c);
    return m;
  }
};

inline ProductGame build_product(const StochasticGame& g, const Dpa& d,
                                 const ProductOptions& opt = {}) {
  if (!d.ap().includes(g.ap))
    throw ValidationError("game propositions are not a subset of the automaton's");
  std::vector<Letter> letter(g.size());
  for (StateId s = 0; s < g.size(); ++s) letter[s] = d.ap().translate(g.labels[s].bits(), g.ap);

  auto step = [&](StateId s, DpaState q) -> DpaStep {
    if (g.silent[s]) return {q, 1};
    return d.step(q, letter[s]);
  };

  ProductGame p;
  p.k = d.k();
  p.graph.action_names = g.graph.action_names;
  std::unordered_map<std::uint64_t, StateId> index;
  std::deque<StateId> queue;
  const std::uint64_t nq = d.num_states();
  auto intern = [&](StateId s, DpaState q) {
    const std::uint64_t key = s * nq + q;
    auto [it, inserted] = index.emplace(key, p.size());
    if (inserted) {
      p.graph.owner.push_back(g.graph.owner[s]);
      p.graph.choices.emplace_back();
      p.game_state.push_back(s);
      p.dpa_state.push_back(q);
      p.color.push_back(step(s, q).color);
      queue.push_back(it->second);
    }
    return it->second;
  };

  p.graph.initial = intern(g.graph.initial, d.initial());
  while (!queue.empty()) {
    const StateId x = queue.front();
    queue.pop_front();
    const StateId s = p.game_state[x];
    const DpaState q = p.dpa_state[x];
    const DpaState q_src = step(s, q).state;
    std::vector<Choice> choices;
    for (const auto& c : g.graph.choices[s]) {
      Choice pc{c.action, {}};
      for (const auto& o : c.outcomes) {
        const DpaState q_next =
            opt.convention == LabelConvention::kSource ? q_src : step(o.target, q).state;
        pc.outcomes.push_back({intern(o.target, q_next), o.prob});
      }
      choices.push_back(std::move(pc));
    }
    p.graph.choices[x] = std::move(choices);
  }
  p.graph.validate();
  return p;
}

// Drops the automaton component of a product path.
inline std::vector<StateId> project_path(const ProductGame& p, const std::vector<StateId>& path) {
  std::vector<StateId> out;
  out.reserve(path.size());
  for (StateId x : path) out.push_back(p.game_state.at(x));
  return out;
}

inline std::vector<std::string> product_state_names(const ProductGame& p, const StochasticGame& g) {
  std::vector<std::string> names;
  for (StateId x = 0; x < p.size(); ++x) names.push_back(p.name(x, g));
  return names;
}

inline std::string write_product(const ProductGame& p, const StochasticGame& g) {
  const auto names = product_state_names(p, g);
  std::vector<LabelSet> labels;
  for (StateId x = 0; x < p.size(); ++x) labels.push_back(g.labels[p.game_state[x]]);
  GameExport ex;
  ex.state_names = &names;
  ex.ap = &g.ap;
  ex.labels = &labels;
  ex.colors = &p.color;
  return write_game(p.graph, ex);
}

}  // namespace ltlgame
