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

// The priority reward machine: priorities 0..k, a color-driven stochastic
// transition table parameterized by epsilon, and reward epsilon on positive
// even priorities.
//
//   j = 0            -> {0: 1 - sqrt(eps), 1: sqrt(eps)}
//   j >= 1, j >= c   -> {j: 1 - eps, 1: eps}   (targets merged when j = 1)
//   j >= 1, j < c    -> {c: 1}

#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "ltlgame/common.hpp"
#include "ltlgame/dpa.hpp"

namespace ltlgame {

using Priority = int;

struct PriorityOutcome {
  Priority target;
  double prob;
};

class Prm {
 public:
  Prm(Color k, double epsilon) : k_(k), epsilon_(epsilon), sqrt_epsilon_(std::sqrt(epsilon)) {
    if (k < 1) throw ValidationError("number of colors must be at least 1");
    if (!(epsilon > 0.0 && epsilon <= 1.0)) throw ValidationError("epsilon must lie in (0, 1]");
    table_.resize(static_cast<std::size_t>((k + 1) * k));
    for (Priority j = 0; j <= k; ++j)
      for (Color c = 1; c <= k; ++c) table_[slot(j, c)] = compute(j, c);
  }

  Color k() const { return k_; }
  double epsilon() const { return epsilon_; }

  const std::vector<PriorityOutcome>& transition(Priority j, Color c) const {
    if (j < 0 || j > k_) throw ValidationError("priority " + std::to_string(j) + " out of range");
    if (c < 1 || c > k_)
      throw ValidationError("color " + std::to_string(c) + " outside 1.." + std::to_string(k_));
    return table_[slot(j, c)];
  }

  double reward(Priority j) const { return j >= 2 && j % 2 == 0 ? epsilon_ : 0.0; }

 private:
  std::size_t slot(Priority j, Color c) const {
    return static_cast<std::size_t>(j * k_ + (c - 1));
  }

  std::vector<PriorityOutcome> compute(Priority j, Color c) const {
    std::vector<PriorityOutcome> out;
    auto add = [&](Priority t, double p) {
      if (p <= 0.0) return;
      for (auto& o : out)
        if (o.target == t) {
          o.prob += p;
          return;
        }
      out.push_back({t, p});
    };
    if (j == 0) {
      add(0, 1.0 - sqrt_epsilon_);
      add(1, sqrt_epsilon_);
    } else if (j >= c) {
      add(j, 1.0 - epsilon_);
      add(1, epsilon_);
    } else {
      add(c, 1.0);
    }
    if (out.size() == 1) out[0].prob = 1.0;
    return out;
  }

  Color k_;
  double epsilon_;
  double sqrt_epsilon_;
  std::vector<std::vector<PriorityOutcome>> table_;
};

}  // namespace ltlgame
