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

// Finite-memory strategies on the plain game, induced from pure memoryless
// strategies on the priority game: the automaton state and the priority
// together form the memory.
//
// Text format:
//   strategy <mu|nu>
//   modes <count>
//   initial (q=<q>,j=<j>)
//   mode (q=<q>,j=<j>) state <s> action <a>[:<p> ...]
//   next (q=<q>,j=<j>) state <s> (q=<q'>,j=<j'>):<p> ...

#pragma once

#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "ltlgame/analysis.hpp"
#include "ltlgame/common.hpp"
#include "ltlgame/dpa.hpp"
#include "ltlgame/game.hpp"
#include "ltlgame/priority.hpp"
#include "ltlgame/prm.hpp"
#include "ltlgame/product.hpp"

namespace ltlgame {

struct Mode {
  DpaState q;
  Priority j;
  auto operator<=>(const Mode&) const = default;
};

inline std::string mode_label(const Mode& m) {
  return "(q=" + std::to_string(m.q) + ",j=" + std::to_string(m.j) + ")";
}

struct FiniteMemoryStrategy {
  using ModeId = std::size_t;

  Player player = Player::kController;
  std::size_t num_states = 0;  // game states
  std::vector<Mode> modes;
  ModeId initial = 0;
  // Indexed by mode * num_states + state. Actions are only defined on the
  // player's own states and only where the memory can be.
  std::vector<std::vector<std::pair<ModeId, double>>> next_mode;
  std::vector<std::vector<std::pair<ActionId, double>>> action;

  std::size_t slot(ModeId m, StateId s) const { return m * num_states + s; }

  ModeId find_mode(const Mode& m) const {
    for (ModeId i = 0; i < modes.size(); ++i)
      if (modes[i] == m) return i;
    throw ValidationError("unknown mode " + mode_label(m));
  }

  void validate(const StochasticGame& g) const {
    if (num_states != g.size()) throw ValidationError("strategy is for a game of another size");
    if (initial >= modes.size()) throw ValidationError("initial mode out of range");
    const std::size_t cells = modes.size() * num_states;
    if (next_mode.size() != cells || action.size() != cells)
      throw ValidationError("strategy tables have the wrong size");
    for (std::size_t i = 0; i < cells; ++i) {
      double sum = 0;
      for (const auto& [m, p] : next_mode[i]) {
        if (m >= modes.size() || !(p > 0) || p > 1) throw ValidationError("bad mode transition");
        sum += p;
      }
      if (!next_mode[i].empty() && std::abs(sum - 1) > kProbabilityTolerance)
        throw ValidationError("mode transition does not sum to 1");
      const StateId s = i % num_states;
      sum = 0;
      for (const auto& [a, p] : action[i]) {
        if (!g.graph.choice_index(s, a))
          throw ValidationError("strategy uses an action not enabled in " + g.state_names[s]);
        if (!(p > 0) || p > 1) throw ValidationError("bad action probability");
        sum += p;
      }
      if (!action[i].empty() && std::abs(sum - 1) > kProbabilityTolerance)
        throw ValidationError("action distribution does not sum to 1");
      if (!action[i].empty() && g.graph.owner[s] != player)
        throw ValidationError("strategy acts at a state owned by the other player");
    }
  }
};

struct InducedStrategies {
  FiniteMemoryStrategy controller;
  FiniteMemoryStrategy adversary;
};

namespace detail {

// Automaton step and color on visiting s, as in the product construction.
inline DpaStep memory_step(const StochasticGame& g, const Dpa& d, StateId s, DpaState q) {
  if (g.silent[s]) return {q, 1};
  return d.step(q, d.ap().translate(g.labels[s].bits(), g.ap));
}

}  // namespace detail

// Modes are the (q, j) pairs reachable from (q0, 0) on any game state.
inline InducedStrategies induce_strategy(const StochasticGame& g, const Dpa& d, const Prm& m,
                                         const ProductGame& p, const PriorityGame& pg,
                                         const PureStrategyPair& pair) {
  if (pair.action.size() != pg.size())
    throw ValidationError("priority strategy does not cover the priority game");
  std::vector<Mode> modes{{d.initial(), 0}};
  std::map<Mode, std::size_t> index{{modes[0], 0}};
  for (std::size_t i = 0; i < modes.size(); ++i)
    for (StateId s = 0; s < g.size(); ++s) {
      const auto step = detail::memory_step(g, d, s, modes[i].q);
      for (const auto& t : m.transition(modes[i].j, step.color)) {
        const Mode next{step.state, t.target};
        if (index.emplace(next, modes.size()).second) modes.push_back(next);
      }
    }

  FiniteMemoryStrategy base;
  base.num_states = g.size();
  base.modes = modes;
  base.initial = 0;
  base.next_mode.resize(modes.size() * g.size());
  base.action.resize(modes.size() * g.size());
  for (std::size_t i = 0; i < modes.size(); ++i)
    for (StateId s = 0; s < g.size(); ++s) {
      const auto step = detail::memory_step(g, d, s, modes[i].q);
      for (const auto& t : m.transition(modes[i].j, step.color))
        base.next_mode[base.slot(i, s)].emplace_back(index.at(Mode{step.state, t.target}), t.prob);
    }

  InducedStrategies out{base, base};
  out.controller.player = Player::kController;
  out.adversary.player = Player::kAdversary;
  for (StateId x = 0; x < pg.size(); ++x) {
    const StateId px = pg.product_state[x];
    const StateId s = p.game_state[px];
    const std::size_t mode = index.at(Mode{p.dpa_state[px], pg.priority[x]});
    auto& target = g.graph.owner[s] == Player::kController ? out.controller : out.adversary;
    target.action[target.slot(mode, s)] = {{pair.action[x], 1.0}};
  }
  return out;
}

// A pure memoryless priority strategy read back from an induced strategy.
inline PureStrategyPair priority_pair_from(const FiniteMemoryStrategy& fms, const ProductGame& p,
                                           const PriorityGame& pg,
                                           const PureStrategyPair* fallback = nullptr) {
  PureStrategyPair pair;
  pair.action.resize(pg.size());
  for (StateId x = 0; x < pg.size(); ++x) {
    const StateId px = pg.product_state[x];
    const StateId s = p.game_state[px];
    if (pg.graph.owner[x] != fms.player) {
      pair.action[x] = fallback ? fallback->action[x] : pg.graph.choices[x].front().action;
      continue;
    }
    const auto& dist = fms.action[fms.slot(fms.find_mode({p.dpa_state[px], pg.priority[x]}), s)];
    if (dist.size() != 1)
      throw ValidationError("strategy is not pure at a reachable augmented state");
    pair.action[x] = dist[0].first;
  }
  return pair;
}

// ---------------------------------------------------------------------------
// Worst-case evaluation

struct WorstCaseEvaluation {
  double value = 0;         // satisfaction probability from the initial state
  ProductGame product;
  PriorityGame priority;
  MdpSolution adversary;    // optimal adversary on the priority states
  MarkovChain chain;        // priority states under both strategies, with colors
};

namespace detail {

inline void check_structure(const FiniteMemoryStrategy& c, const Dpa& d, const Prm& m) {
  if (c.player != Player::kController)
    throw ValidationError("worst-case evaluation needs a controller strategy");
  for (const auto& mode : c.modes)
    if (mode.q >= d.num_states() || mode.j < 0 || mode.j > m.k())
      throw ValidationError("strategy memory is not made of automaton states and priorities");
  if (c.modes.at(c.initial) != Mode{d.initial(), 0})
    throw ValidationError("strategy memory does not start in (q0, 0)");
}

}  // namespace detail

// Fixes the controller in the priority game and lets an adversary that also
// sees the memory minimize the parity probability exactly. Such an adversary
// is at least as strong as one restricted to product states, so the result
// is a lower bound on the worst case over memoryless product adversaries.
inline WorstCaseEvaluation evaluate_worst_case(const StochasticGame& g, const Dpa& d, const Prm& m,
                                               const FiniteMemoryStrategy& controller) {
  detail::check_structure(controller, d, m);
  WorstCaseEvaluation ev;
  ev.product = build_product(g, d);
  ev.priority = build_priority(ev.product, m);
  const auto& pg = ev.priority;

  GameGraph mdp = pg.graph;
  std::vector<Color> color(pg.size());
  for (StateId x = 0; x < pg.size(); ++x) {
    const StateId px = pg.product_state[x];
    color[x] = ev.product.color[px];
    if (mdp.owner[x] != Player::kController) continue;
    const StateId s = ev.product.game_state[px];
    const auto& dist =
        controller.action[controller.slot(controller.find_mode({ev.product.dpa_state[px], pg.priority[x]}), s)];
    if (dist.empty())
      throw ValidationError("controller strategy is undefined at a reachable augmented state");
    Choice merged{dist.front().first, {}};
    std::map<StateId, double> mass;
    for (const auto& [a, pa] : dist)
      for (const auto& o : pg.graph.choices[x][*pg.graph.choice_index(x, a)].outcomes)
        mass[o.target] += pa * o.prob;
    for (const auto& [t, pr] : mass) merged.outcomes.push_back({t, pr});
    mdp.choices[x] = {merged};
  }
  ev.adversary = mdp_max_parity(mdp, color, /*want_even=*/false);
  ev.value = 1.0 - ev.adversary.value[pg.graph.initial];

  ev.chain.initial = pg.graph.initial;
  ev.chain.color = color;
  ev.chain.trans.resize(pg.size());
  for (StateId x = 0; x < pg.size(); ++x) ev.chain.trans[x] = mdp.choices[x][ev.adversary.policy[x]].outcomes;
  return ev;
}

// The optimal adversary of an evaluation as a strategy sharing the
// controller's memory, so the two can be simulated together.
inline FiniteMemoryStrategy worst_case_adversary(const WorstCaseEvaluation& ev,
                                                 const FiniteMemoryStrategy& controller) {
  FiniteMemoryStrategy adv = controller;
  adv.player = Player::kAdversary;
  for (auto& a : adv.action) a.clear();
  const auto& p = ev.product;
  const auto& pg = ev.priority;
  for (StateId x = 0; x < pg.size(); ++x) {
    if (pg.graph.owner[x] != Player::kAdversary) continue;
    const StateId px = pg.product_state[x];
    const auto mode = adv.find_mode({p.dpa_state[px], pg.priority[x]});
    const auto& choice = pg.graph.choices[x][ev.adversary.policy[x]];
    adv.action[adv.slot(mode, p.game_state[px])] = {{choice.action, 1.0}};
  }
  return adv;
}

// Worst case over adversaries that see only the product state, by
// enumeration of their pure memoryless maps.
inline double worst_case_over_product_adversaries(const WorstCaseEvaluation& ev,
                                                  const PureStrategyPair& controller_on_priority,
                                                  std::uint64_t cap = 1'000'000) {
  const auto& p = ev.product;
  const auto& pg = ev.priority;
  detail::MapSpace adv(p.graph, Player::kAdversary);
  adv.size_with_cap(cap);
  if (adv.count > cap) throw CapExceeded("too many product adversary maps to enumerate");
  PureStrategyPair product_pair = first_action_pair(p.graph);
  PureStrategyPair pair = controller_on_priority;
  std::vector<Color> color(pg.size());
  for (StateId x = 0; x < pg.size(); ++x) color[x] = p.color[pg.product_state[x]];
  double worst = 2.0;
  for (std::uint64_t ai = 0; ai < adv.count; ++ai) {
    adv.apply(p.graph, ai, product_pair);
    for (StateId x = 0; x < pg.size(); ++x)
      if (pg.graph.owner[x] == Player::kAdversary) pair.action[x] = product_pair.action[pg.product_state[x]];
    worst = std::min(worst, detail::parity_at_initial(pg.graph, color, pair));
  }
  return worst;
}

// ---------------------------------------------------------------------------
// Simulation

struct Trace {
  std::vector<StateId> states;
  std::vector<ActionId> actions;
  std::vector<Letter> labels;
  std::vector<FiniteMemoryStrategy::ModeId> modes;  // shared memory of both strategies
};

namespace detail {

template <class T>
inline T sample_discrete(const std::vector<std::pair<T, double>>& dist, double u) {
  for (const auto& [x, p] : dist) {
    if (u < p) return x;
    u -= p;
  }
  return dist.back().first;
}

inline StateId sample_outcome_with(const std::vector<Outcome>& outs, double u) {
  for (const auto& o : outs) {
    if (u < o.prob) return o.target;
    u -= o.prob;
  }
  return outs.back().target;
}

}  // namespace detail

// Rolls out the game under two induced strategies. Each step draws one
// number for the successor and one for the memory update, which both
// strategies share, so the run matches simulate_priority step for step.
inline Trace simulate(const StochasticGame& g, const FiniteMemoryStrategy& controller,
                      const FiniteMemoryStrategy& adversary, std::size_t steps, Rng& rng) {
  if (controller.modes != adversary.modes)
    throw ValidationError("coupled simulation needs strategies with the same memory");
  Trace t;
  StateId s = g.graph.initial;
  auto mode = controller.initial;
  for (std::size_t i = 0; i < steps; ++i) {
    t.states.push_back(s);
    t.labels.push_back(g.labels[s].bits());
    t.modes.push_back(mode);
    const auto& who = g.graph.owner[s] == Player::kController ? controller : adversary;
    const auto& dist = who.action[who.slot(mode, s)];
    if (dist.empty())
      throw ValidationError("strategy undefined at state " + g.state_names[s] + " in mode " +
                            mode_label(who.modes[mode]));
    const ActionId a = dist.size() == 1 ? dist[0].first : detail::sample_discrete(dist, rng.uniform());
    t.actions.push_back(a);
    const auto& outs = g.graph.choices[s][*g.graph.choice_index(s, a)].outcomes;
    const StateId next = detail::sample_outcome_with(outs, rng.uniform());
    mode = detail::sample_discrete(controller.next_mode[controller.slot(mode, s)], rng.uniform());
    s = next;
  }
  return t;
}

// The same rollout on the priority game, sampling the product successor
// and then the priority.
inline std::vector<StateId> simulate_priority(const ProductGame& p, const PriorityGame& pg,
                                              const Prm& m, const PureStrategyPair& pair,
                                              std::size_t steps, Rng& rng) {
  std::map<std::pair<StateId, Priority>, StateId> index;
  for (StateId x = 0; x < pg.size(); ++x) index[{pg.product_state[x], pg.priority[x]}] = x;
  std::vector<StateId> path;
  StateId x = pg.graph.initial;
  for (std::size_t i = 0; i < steps; ++i) {
    path.push_back(x);
    const StateId px = pg.product_state[x];
    const auto& outs = p.graph.choices[px][*p.graph.choice_index(px, pair.action[x])].outcomes;
    const StateId next_px = detail::sample_outcome_with(outs, rng.uniform());
    std::vector<std::pair<Priority, double>> theta;
    for (const auto& o : m.transition(pg.priority[x], p.color[px])) theta.emplace_back(o.target, o.prob);
    const Priority j = detail::sample_discrete(theta, rng.uniform());
    x = index.at({next_px, j});
  }
  return path;
}

// ---------------------------------------------------------------------------
// Text format

inline std::string write_strategy(const FiniteMemoryStrategy& fms, const StochasticGame& g) {
  std::ostringstream os;
  os << "strategy " << to_string(fms.player) << "\n";
  os << "modes " << fms.modes.size() << "\n";
  os << "initial " << mode_label(fms.modes[fms.initial]) << "\n";
  for (std::size_t mi = 0; mi < fms.modes.size(); ++mi)
    for (StateId s = 0; s < fms.num_states; ++s) {
      const auto& dist = fms.action[fms.slot(mi, s)];
      if (dist.empty()) continue;
      os << "mode " << mode_label(fms.modes[mi]) << " state " << g.state_names[s] << " action";
      if (dist.size() == 1) {
        os << ' ' << g.graph.action_names[dist[0].first];
      } else {
        for (const auto& [a, p] : dist) os << ' ' << g.graph.action_names[a] << ':' << detail::format_double(p);
      }
      os << "\n";
    }
  for (std::size_t mi = 0; mi < fms.modes.size(); ++mi)
    for (StateId s = 0; s < fms.num_states; ++s) {
      const auto& dist = fms.next_mode[fms.slot(mi, s)];
      if (dist.empty()) continue;
      os << "next " << mode_label(fms.modes[mi]) << " state " << g.state_names[s];
      for (const auto& [m, p] : dist) os << ' ' << mode_label(fms.modes[m]) << ':' << detail::format_double(p);
      os << "\n";
    }
  return os.str();
}

namespace detail {

inline Mode parse_mode(const std::string& text, std::size_t line_no) {
  unsigned long q = 0;
  long j = 0;
  char tail = 0;
  if (std::sscanf(text.c_str(), "(q=%lu,j=%ld%c", &q, &j, &tail) != 3 || tail != ')' ||
      text.back() != ')')
    throw ParseError("line " + std::to_string(line_no) + ": bad mode label '" + text + "'");
  return {q, static_cast<Priority>(j)};
}

}  // namespace detail

inline FiniteMemoryStrategy read_strategy(std::string_view text, const StochasticGame& g) {
  FiniteMemoryStrategy fms;
  fms.num_states = g.size();
  std::optional<Mode> initial;
  std::size_t declared = 0;
  bool have_header = false;
  std::map<Mode, std::size_t> index;
  auto mode_id = [&](const Mode& m) {
    auto [it, inserted] = index.emplace(m, fms.modes.size());
    if (inserted) fms.modes.push_back(m);
    return it->second;
  };
  struct Row {
    std::size_t line;
    bool is_action;
    Mode mode;
    StateId state;
    std::vector<std::string> items;
  };
  std::vector<Row> rows;
  std::size_t line_no = 0;
  for (auto raw : detail::lines(text)) {
    ++line_no;
    const auto w = detail::split_ws(detail::strip_comment(raw));
    if (w.empty()) continue;
    auto fail = [&](const std::string& what) {
      return ParseError("line " + std::to_string(line_no) + ": " + what);
    };
    if (w[0] == "strategy") {
      if (w.size() != 2 || (w[1] != "mu" && w[1] != "nu")) throw fail("strategy needs mu or nu");
      fms.player = w[1] == "mu" ? Player::kController : Player::kAdversary;
      have_header = true;
    } else if (w[0] == "modes") {
      if (w.size() != 2) throw fail("modes needs a count");
      declared = static_cast<std::size_t>(detail::parse_long(w[1], line_no));
    } else if (w[0] == "initial") {
      if (w.size() != 2) throw fail("initial needs a mode");
      initial = detail::parse_mode(w[1], line_no);
    } else if (w[0] == "mode" || w[0] == "next") {
      const bool is_action = w[0] == "mode";
      if (w.size() < 5 || w[2] != "state" || (is_action && w[4] != "action"))
        throw fail(is_action ? "expected: mode <m> state <s> action <a>..."
                             : "expected: next <m> state <s> <m'>:<p>...");
      Row r{line_no, is_action, detail::parse_mode(w[1], line_no), g.state(w[3]), {}};
      r.items.assign(w.begin() + (is_action ? 5 : 4), w.end());
      if (r.items.empty()) throw fail("empty distribution");
      rows.push_back(std::move(r));
    } else {
      throw fail("unknown keyword '" + w[0] + "'");
    }
  }
  if (!have_header) throw ParseError("missing strategy header");
  if (!initial) throw ParseError("missing initial mode");
  fms.initial = mode_id(*initial);
  for (const auto& r : rows) {
    mode_id(r.mode);
    if (!r.is_action)
      for (const auto& item : r.items) mode_id(detail::parse_mode(item.substr(0, item.rfind(':')), r.line));
  }
  if (declared != 0 && declared != fms.modes.size())
    throw ParseError("modes line says " + std::to_string(declared) + " but " +
                     std::to_string(fms.modes.size()) + " modes are used");
  fms.next_mode.assign(fms.modes.size() * g.size(), {});
  fms.action.assign(fms.modes.size() * g.size(), {});
  for (const auto& r : rows) {
    const std::size_t slot = fms.slot(index.at(r.mode), r.state);
    if (r.is_action) {
      if (r.items.size() == 1 && r.items[0].find(':') == std::string::npos) {
        fms.action[slot] = {{g.action(r.items[0]), 1.0}};
        continue;
      }
      for (const auto& item : r.items) {
        const auto c = item.rfind(':');
        if (c == std::string::npos) throw ParseError("line " + std::to_string(r.line) + ": expected <a>:<p>");
        fms.action[slot].emplace_back(g.action(item.substr(0, c)),
                                      detail::parse_double(item.substr(c + 1), r.line));
      }
    } else {
      for (const auto& item : r.items) {
        const auto c = item.rfind(':');
        if (c == std::string::npos) throw ParseError("line " + std::to_string(r.line) + ": expected <mode>:<p>");
        fms.next_mode[slot].emplace_back(index.at(detail::parse_mode(item.substr(0, c), r.line)),
                                         detail::parse_double(item.substr(c + 1), r.line));
      }
    }
  }
  fms.validate(g);
  return fms;
}

}  // namespace ltlgame
