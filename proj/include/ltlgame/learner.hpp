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

// Tabular minimax-Q on a priority game. One table serves both players: the
// controller maximizes and the adversary minimizes over its entries.

#pragma once

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "ltlgame/analysis.hpp"
#include "ltlgame/common.hpp"
#include "ltlgame/priority.hpp"

namespace ltlgame {

enum class Decay { kLinear, kExponential };

struct LearnSchedule {
  std::size_t episodes = 131072;
  std::size_t steps = 8192;
  double alpha_start = 0.5;
  double alpha_end = 0.05;
  double explore_start = 0.5;
  double explore_end = 0.05;
  std::size_t random_start_episodes = 122880;
  std::uint64_t seed = 1;
  Decay decay = Decay::kLinear;
  // Rates reach their end values after this fraction of the episodes.
  double decay_fraction = 0.9;
  // Learning-curve sampling period in episodes; 0 disables the curve.
  std::size_t curve_interval = 0;

  void validate() const {
    auto rate_ok = [](double r) { return r > 0 && r <= 1; };
    if (episodes == 0 || steps == 0) throw ValidationError("episodes and steps must be positive");
    if (!rate_ok(alpha_start) || !rate_ok(alpha_end))
      throw ValidationError("learning rates must lie in (0, 1]");
    if (!rate_ok(explore_start) || !rate_ok(explore_end))
      throw ValidationError("exploration rates must lie in (0, 1]");
    if (random_start_episodes > episodes)
      throw ValidationError("random-start episodes exceed the episode count");
    if (!(decay_fraction > 0 && decay_fraction <= 1))
      throw ValidationError("decay fraction must lie in (0, 1]");
  }

  double rate(double start, double end, std::size_t episode) const {
    const double horizon = decay_fraction * static_cast<double>(episodes);
    const double t = std::min(1.0, static_cast<double>(episode) / horizon);
    if (decay == Decay::kLinear) return start + (end - start) * t;
    return start * std::pow(end / start, t);
  }
  double alpha(std::size_t episode) const { return rate(alpha_start, alpha_end, episode); }
  double explore(std::size_t episode) const { return rate(explore_start, explore_end, episode); }
};

// Q values stored per (state, choice index); choice order is action order.
class QTable {
 public:
  explicit QTable(const GameGraph& g) : offset_(g.size() + 1, 0) {
    for (StateId s = 0; s < g.size(); ++s) offset_[s + 1] = offset_[s] + g.choices[s].size();
    value_.assign(offset_.back(), 0.0);
  }

  std::size_t num_states() const { return offset_.size() - 1; }
  std::size_t num_choices(StateId s) const { return offset_[s + 1] - offset_[s]; }
  double& at(StateId s, std::size_t choice) { return value_[offset_[s] + choice]; }
  double at(StateId s, std::size_t choice) const { return value_[offset_[s] + choice]; }
  const std::vector<double>& values() const { return value_; }

  // Best choice for the state's owner; ties go to the lowest action.
  std::size_t greedy(StateId s, Player owner) const {
    const double* q = value_.data() + offset_[s];
    std::size_t best = 0;
    for (std::size_t i = 1; i < num_choices(s); ++i)
      if (owner == Player::kController ? q[i] > q[best] : q[i] < q[best]) best = i;
    return best;
  }
  double best_value(StateId s, Player owner) const { return at(s, greedy(s, owner)); }

  bool operator==(const QTable&) const = default;

 private:
  std::vector<std::size_t> offset_;
  std::vector<double> value_;
};

struct CurvePoint {
  std::size_t episode;
  double value_estimate;  // exact discounted value of the greedy pair at the initial state
};

struct TrainingResult {
  QTable q;
  std::vector<CurvePoint> curve;
};

inline PureStrategyPair greedy_strategy(const GameGraph& g, const QTable& q) {
  PureStrategyPair pair;
  pair.action.resize(g.size());
  for (StateId s = 0; s < g.size(); ++s) pair.action[s] = g.choices[s][q.greedy(s, g.owner[s])].action;
  return pair;
}

inline TrainingResult minimax_q_train(const PriorityGame& pg, const LearnSchedule& sch) {
  sch.validate();
  const GameGraph& g = pg.graph;
  const double gamma = pg.discount();
  TrainingResult out{QTable(g), {}};
  QTable& q = out.q;
  Rng rng(sch.seed);
  for (std::size_t ep = 0; ep < sch.episodes; ++ep) {
    const double alpha = sch.alpha(ep);
    const double explore = sch.explore(ep);
    StateId s = ep < sch.random_start_episodes ? rng.below(g.size()) : g.initial;
    for (std::size_t t = 0; t < sch.steps; ++t) {
      const auto& choices = g.choices[s];
      const std::size_t i = rng.uniform() < explore ? rng.below(choices.size()) : q.greedy(s, g.owner[s]);
      const StateId next = sample_outcome(choices[i].outcomes, rng);
      const double target = pg.reward[s] + gamma * q.best_value(next, g.owner[next]);
      double& entry = q.at(s, i);
      entry = (1 - alpha) * entry + alpha * target;
      s = next;
    }
    if (sch.curve_interval && ((ep + 1) % sch.curve_interval == 0 || ep + 1 == sch.episodes))
      out.curve.push_back({ep + 1, discounted_value_of_pair(pg, greedy_strategy(g, q))[g.initial]});
  }
  return out;
}

inline std::string qtable_csv(const GameGraph& g, const QTable& q, const std::vector<std::string>& names) {
  std::ostringstream os;
  os << "state,action,value\n";
  for (StateId s = 0; s < g.size(); ++s)
    for (std::size_t i = 0; i < g.choices[s].size(); ++i)
      os << names.at(s) << ',' << g.action_names[g.choices[s][i].action] << ','
         << detail::format_double(q.at(s, i)) << "\n";
  return os.str();
}

inline std::string curve_csv(const std::vector<CurvePoint>& curve) {
  std::ostringstream os;
  os << "episode,value_estimate\n";
  for (const auto& p : curve) os << p.episode << ',' << detail::format_double(p.value_estimate) << "\n";
  return os.str();
}

}  // namespace ltlgame
