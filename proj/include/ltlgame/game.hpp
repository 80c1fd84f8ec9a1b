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

// Turn-based stochastic games: a shared sparse graph representation used by
// every layer (plain game, product game, priority game), the labeled game
// itself, and its line-oriented text format.
//
//   game
//   ap a b c
//   state <id> <mu|nu> [labels...]
//   silent <id>                       # optional, see StochasticGame::silent
//   init <id>
//   t <state> <action> <succ>:<prob> [<succ>:<prob> ...]
//
// `#` starts a comment. Derived games add `color <state> <c>`,
// `reward <state> <r>` and `discount <d>` lines when exported.

#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "ltlgame/common.hpp"
#include "ltlgame/labels.hpp"

namespace ltlgame {

using StateId = std::size_t;
using ActionId = std::size_t;

inline constexpr double kProbabilityTolerance = 1e-12;

struct Outcome {
  StateId target;
  double prob;
};

struct Choice {
  ActionId action;
  std::vector<Outcome> outcomes;
};

// States, owners and per-state enabled actions with their successor
// distributions. Choices of a state are kept sorted by action id, so "lowest
// action index" and "first choice" coincide.
struct GameGraph {
  std::vector<Player> owner;
  std::vector<std::vector<Choice>> choices;
  StateId initial = 0;
  std::vector<std::string> action_names;

  std::size_t size() const { return owner.size(); }

  // Position of `a` among the choices of `s`, if enabled.
  std::optional<std::size_t> choice_index(StateId s, ActionId a) const {
    const auto& cs = choices.at(s);
    for (std::size_t i = 0; i < cs.size(); ++i)
      if (cs[i].action == a) return i;
    return std::nullopt;
  }

  std::vector<ActionId> enabled_actions(StateId s) const {
    std::vector<ActionId> out;
    for (const auto& c : choices.at(s)) out.push_back(c.action);
    return out;
  }

  std::size_t num_choices() const {
    std::size_t n = 0;
    for (const auto& cs : choices) n += cs.size();
    return n;
  }

  void validate() const {
    if (owner.size() != choices.size()) throw ValidationError("owner/choice size mismatch");
    if (owner.empty()) throw ValidationError("game has no states");
    if (initial >= size()) throw ValidationError("initial state out of range");
    for (StateId s = 0; s < size(); ++s) {
      if (choices[s].empty())
        throw ValidationError("state " + std::to_string(s) + " has no enabled action");
      for (std::size_t i = 0; i < choices[s].size(); ++i) {
        const auto& c = choices[s][i];
        if (i > 0 && choices[s][i - 1].action >= c.action)
          throw ValidationError("choices of state " + std::to_string(s) +
                                " are not sorted by action");
        if (c.action >= action_names.size()) throw ValidationError("action id out of range");
        double sum = 0;
        for (const auto& o : c.outcomes) {
          if (o.target >= size()) throw ValidationError("successor out of range");
          if (!(o.prob > 0.0) || o.prob > 1.0)
            throw ValidationError("probability outside (0,1] at state " + std::to_string(s));
          sum += o.prob;
        }
        if (std::abs(sum - 1.0) > kProbabilityTolerance)
          throw ValidationError("distribution of state " + std::to_string(s) + " action '" +
                                action_names[c.action] + "' sums to " +
                                detail::format_double(sum));
      }
    }
  }
};

inline StateId sample_outcome(const std::vector<Outcome>& outcomes, Rng& rng) {
  double u = rng.uniform();
  for (const auto& o : outcomes) {
    if (u < o.prob) return o.target;
    u -= o.prob;
  }
  return outcomes.back().target;
}

// A labeled turn-based game. States flagged `silent` are not observed by the
// specification: a product with an automaton leaves the automaton state
// unchanged there. The grid-world encoding uses this for the adversary's
// half-step so that each physical move produces exactly one letter.
struct StochasticGame {
  GameGraph graph;
  std::vector<std::string> state_names;
  ApUniverse ap;
  std::vector<LabelSet> labels;
  std::vector<bool> silent;

  std::size_t size() const { return graph.size(); }

  StateId state(std::string_view name) const {
    for (StateId s = 0; s < state_names.size(); ++s)
      if (state_names[s] == name) return s;
    throw ValidationError("unknown state '" + std::string(name) + "'");
  }
  ActionId action(std::string_view name) const {
    for (ActionId a = 0; a < graph.action_names.size(); ++a)
      if (graph.action_names[a] == name) return a;
    throw ValidationError("unknown action '" + std::string(name) + "'");
  }

  void validate() const {
    graph.validate();
    if (state_names.size() != size() || labels.size() != size() || silent.size() != size())
      throw ValidationError("game annotation sizes disagree with the state count");
    const Letter mask = static_cast<Letter>(ap.letter_count() - 1);
    for (const auto& l : labels)
      if (l.bits() & ~mask) throw ValidationError("label outside the AP universe");
  }

  // States reachable from the initial state under some choice of actions.
  std::vector<bool> reachable() const {
    std::vector<bool> seen(size(), false);
    std::vector<StateId> stack{graph.initial};
    seen[graph.initial] = true;
    while (!stack.empty()) {
      const StateId s = stack.back();
      stack.pop_back();
      for (const auto& c : graph.choices[s])
        for (const auto& o : c.outcomes)
          if (!seen[o.target]) {
            seen[o.target] = true;
            stack.push_back(o.target);
          }
    }
    return seen;
  }
};

inline std::vector<ActionId> enabled_actions(const StochasticGame& g, StateId s) {
  return g.graph.enabled_actions(s);
}

inline StateId sample_successor(const GameGraph& g, StateId s, ActionId a, Rng& rng) {
  const auto idx = g.choice_index(s, a);
  if (!idx)
    throw ValidationError("action '" + g.action_names.at(a) + "' is not enabled in state " +
                          std::to_string(s));
  return sample_outcome(g.choices[s][*idx].outcomes, rng);
}

inline StateId sample_successor(const StochasticGame& g, StateId s, ActionId a, Rng& rng) {
  return sample_successor(g.graph, s, a, rng);
}

// ---------------------------------------------------------------------------
// Text format

inline StochasticGame load_game(std::string_view text) {
  using detail::split_ws;
  struct PendingTransition {
    std::size_t line;
    std::string state, action;
    std::vector<std::pair<std::string, double>> outcomes;
  };
  std::vector<std::string> ap_names;
  bool have_ap = false, have_header = false;
  std::vector<std::string> names;
  std::vector<Player> owners;
  std::vector<std::vector<std::string>> label_names;
  std::map<std::string, StateId, std::less<>> index;
  std::vector<std::pair<std::size_t, std::string>> silent_refs;
  std::optional<std::pair<std::size_t, std::string>> init;
  std::vector<PendingTransition> pending;

  std::size_t line_no = 0;
  for (auto raw : detail::lines(text)) {
    ++line_no;
    const auto w = split_ws(detail::strip_comment(raw));
    if (w.empty()) continue;
    auto fail = [&](const std::string& what) -> ParseError {
      return ParseError("line " + std::to_string(line_no) + ": " + what);
    };
    const auto& kw = w[0];
    if (kw == "game") {
      have_header = true;
    } else if (kw == "ap") {
      if (have_ap) throw fail("duplicate ap line");
      ap_names.assign(w.begin() + 1, w.end());
      have_ap = true;
    } else if (kw == "state") {
      if (w.size() < 3) throw fail("state needs <id> <mu|nu>");
      if (w[2] != "mu" && w[2] != "nu") throw fail("owner must be mu or nu");
      if (index.count(w[1])) throw fail("duplicate state '" + w[1] + "'");
      index.emplace(w[1], names.size());
      names.push_back(w[1]);
      owners.push_back(w[2] == "mu" ? Player::kController : Player::kAdversary);
      label_names.emplace_back(w.begin() + 3, w.end());
    } else if (kw == "silent") {
      if (w.size() != 2) throw fail("silent needs <id>");
      silent_refs.emplace_back(line_no, w[1]);
    } else if (kw == "init") {
      if (w.size() != 2) throw fail("init needs <id>");
      if (init) throw fail("duplicate init");
      init.emplace(line_no, w[1]);
    } else if (kw == "t") {
      if (w.size() < 4) throw fail("transition needs <state> <action> <succ>:<prob>...");
      PendingTransition t{line_no, w[1], w[2], {}};
      for (std::size_t i = 3; i < w.size(); ++i) {
        const auto colon = w[i].rfind(':');
        if (colon == std::string::npos || colon == 0) throw fail("expected <succ>:<prob>");
        t.outcomes.emplace_back(w[i].substr(0, colon),
                                detail::parse_double(w[i].substr(colon + 1), line_no));
      }
      pending.push_back(std::move(t));
    } else if (kw == "color" || kw == "reward" || kw == "discount") {
      // Annotations of exported derived games; not part of a plain game.
    } else {
      throw fail("unknown keyword '" + kw + "'");
    }
  }
  if (!have_header) throw ParseError("missing 'game' header");
  if (names.empty()) throw ParseError("game has no states");
  if (!init) throw ParseError("missing init line");

  StochasticGame g;
  g.ap = ApUniverse(ap_names);
  g.state_names = names;
  g.graph.owner = owners;
  g.graph.choices.assign(names.size(), {});
  g.silent.assign(names.size(), false);
  for (std::size_t s = 0; s < names.size(); ++s) {
    for (const auto& l : label_names[s])
      if (!g.ap.contains(l))
        throw ParseError("state '" + names[s] + "' uses label '" + l + "' missing from ap line");
    g.labels.emplace_back(g.ap, label_names[s]);
  }
  auto resolve = [&](const std::string& name, std::size_t line) {
    const auto it = index.find(name);
    if (it == index.end())
      throw ParseError("line " + std::to_string(line) + ": unknown state '" + name + "'");
    return it->second;
  };
  g.graph.initial = resolve(init->second, init->first);
  for (const auto& [line, name] : silent_refs) g.silent[resolve(name, line)] = true;

  std::map<std::string, ActionId, std::less<>> actions;
  for (const auto& t : pending) {
    const StateId s = resolve(t.state, t.line);
    auto [it, inserted] = actions.emplace(t.action, g.graph.action_names.size());
    if (inserted) g.graph.action_names.push_back(t.action);
    Choice c{it->second, {}};
    double sum = 0;
    for (const auto& [succ, p] : t.outcomes) {
      const StateId to = resolve(succ, t.line);
      if (!(p > 0.0) || p > 1.0)
        throw ValidationError("line " + std::to_string(t.line) + ": probability " +
                              detail::format_double(p) + " outside (0,1]");
      for (const auto& o : c.outcomes)
        if (o.target == to)
          throw ParseError("line " + std::to_string(t.line) + ": successor '" + succ +
                           "' listed twice");
      c.outcomes.push_back({to, p});
      sum += p;
    }
    if (std::abs(sum - 1.0) > kProbabilityTolerance)
      throw ValidationError("line " + std::to_string(t.line) + ": distribution of state '" +
                            t.state + "' action '" + t.action + "' sums to " +
                            detail::format_double(sum));
    for (const auto& existing : g.graph.choices[s])
      if (existing.action == c.action)
        throw ParseError("line " + std::to_string(t.line) + ": duplicate transition for state '" +
                         t.state + "' action '" + t.action + "'");
    g.graph.choices[s].push_back(std::move(c));
  }
  for (StateId s = 0; s < names.size(); ++s) {
    if (g.graph.choices[s].empty())
      throw ValidationError("state '" + names[s] + "' has no enabled action");
    std::sort(g.graph.choices[s].begin(), g.graph.choices[s].end(),
              [](const Choice& a, const Choice& b) { return a.action < b.action; });
  }
  g.validate();
  return g;
}

// Optional annotations for exporting derived games.
struct GameExport {
  const std::vector<std::string>* state_names = nullptr;
  const ApUniverse* ap = nullptr;
  const std::vector<LabelSet>* labels = nullptr;
  const std::vector<bool>* silent = nullptr;
  const std::vector<int>* colors = nullptr;
  const std::vector<double>* rewards = nullptr;
  std::optional<double> discount;
};

inline std::string write_game(const GameGraph& g, const GameExport& ex) {
  std::ostringstream os;
  auto name = [&](StateId s) {
    return ex.state_names ? (*ex.state_names)[s] : "s" + std::to_string(s);
  };
  os << "game\n";
  if (ex.discount) os << "discount " << detail::format_double(*ex.discount) << "\n";
  os << "ap";
  if (ex.ap)
    for (const auto& n : ex.ap->names()) os << ' ' << n;
  os << "\n";
  for (StateId s = 0; s < g.size(); ++s) {
    os << "state " << name(s) << ' ' << to_string(g.owner[s]);
    if (ex.ap && ex.labels)
      for (const auto& l : (*ex.labels)[s].names(*ex.ap)) os << ' ' << l;
    os << "\n";
  }
  if (ex.silent)
    for (StateId s = 0; s < g.size(); ++s)
      if ((*ex.silent)[s]) os << "silent " << name(s) << "\n";
  os << "init " << name(g.initial) << "\n";
  if (ex.colors)
    for (StateId s = 0; s < g.size(); ++s) os << "color " << name(s) << ' ' << (*ex.colors)[s] << "\n";
  if (ex.rewards)
    for (StateId s = 0; s < g.size(); ++s)
      os << "reward " << name(s) << ' ' << detail::format_double((*ex.rewards)[s]) << "\n";
  for (StateId s = 0; s < g.size(); ++s) {
    for (const auto& c : g.choices[s]) {
      os << "t " << name(s) << ' ' << g.action_names[c.action];
      for (const auto& o : c.outcomes) os << ' ' << name(o.target) << ':' << detail::format_double(o.prob);
      os << "\n";
    }
  }
  return os.str();
}

inline std::string write_game(const StochasticGame& g) {
  GameExport ex;
  ex.state_names = &g.state_names;
  ex.ap = &g.ap;
  ex.labels = &g.labels;
  ex.silent = &g.silent;
  return write_game(g.graph, ex);
}

}  // namespace ltlgame
