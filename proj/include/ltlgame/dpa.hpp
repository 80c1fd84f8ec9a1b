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

// Deterministic parity automata with transition-based colors in 1..k.
// Acceptance is "max even": a run is accepting when the largest color seen
// infinitely often is even.

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "ltlgame/common.hpp"
#include "ltlgame/labels.hpp"

namespace ltlgame {

using DpaState = std::size_t;
using Color = int;

struct DpaStep {
  DpaState state;
  Color color;
};

class Dpa {
 public:
  Dpa() = default;

  // `next` and `color` are indexed by state * 2^|ap| + letter and must cover
  // every (state, letter) pair.
  Dpa(ApUniverse ap, std::size_t num_states, DpaState initial, Color k,
      std::vector<DpaState> next, std::vector<Color> color)
      : ap_(std::move(ap)),
        num_states_(num_states),
        initial_(initial),
        k_(k),
        next_(std::move(next)),
        color_(std::move(color)) {
    validate();
  }

  // An automaton with `num_states` states and every transition undefined;
  // fill with set() and call finalize().
  static Dpa builder(ApUniverse ap, std::size_t num_states, DpaState initial, Color k) {
    Dpa d;
    d.ap_ = std::move(ap);
    d.num_states_ = num_states;
    d.initial_ = initial;
    d.k_ = k;
    d.next_.assign(num_states * d.ap_.letter_count(), kUnset);
    d.color_.assign(num_states * d.ap_.letter_count(), 0);
    return d;
  }
  void set(DpaState q, Letter l, DpaState to, Color c) {
    next_.at(index(q, l)) = to;
    color_.at(index(q, l)) = c;
  }
  bool is_set(DpaState q, Letter l) const { return next_.at(index(q, l)) != kUnset; }
  void finalize() { validate(); }

  const ApUniverse& ap() const { return ap_; }
  std::size_t num_states() const { return num_states_; }
  DpaState initial() const { return initial_; }
  Color k() const { return k_; }

  DpaStep step(DpaState q, Letter l) const {
    const auto i = index(q, l);
    return {next_[i], color_[i]};
  }

  Color max_color_used() const {
    Color m = 0;
    for (Color c : color_) m = std::max(m, c);
    return m;
  }

 private:
  static constexpr DpaState kUnset = static_cast<DpaState>(-1);

  std::size_t index(DpaState q, Letter l) const {
    if (q >= num_states_) throw ValidationError("DPA state out of range");
    if (l >= ap_.letter_count()) throw ValidationError("label outside the DPA's AP universe");
    return q * ap_.letter_count() + l;
  }

  void validate() const {
    if (num_states_ == 0) throw ValidationError("DPA has no states");
    if (initial_ >= num_states_) throw ValidationError("DPA initial state out of range");
    if (k_ < 1) throw ValidationError("DPA needs at least one color");
    const std::size_t want = num_states_ * ap_.letter_count();
    if (next_.size() != want || color_.size() != want)
      throw ValidationError("DPA transition table has the wrong size");
    for (std::size_t i = 0; i < want; ++i) {
      const auto q = i / ap_.letter_count();
      const auto l = static_cast<Letter>(i % ap_.letter_count());
      if (next_[i] == kUnset)
        throw ValidationError("DPA is incomplete: state " + std::to_string(q) +
                              " has no transition on " + ap_.format(l));
      if (next_[i] >= num_states_) throw ValidationError("DPA successor out of range");
      if (color_[i] < 1 || color_[i] > k_)
        throw ValidationError("DPA color " + std::to_string(color_[i]) + " outside 1.." +
                              std::to_string(k_));
    }
  }

  ApUniverse ap_;
  std::size_t num_states_ = 0;
  DpaState initial_ = 0;
  Color k_ = 1;
  std::vector<DpaState> next_;
  std::vector<Color> color_;
};

// The automaton accepting every word: one state, every transition colored 2.
inline Dpa universal_dpa(const ApUniverse& ap) {
  Dpa d = Dpa::builder(ap, 1, 0, 2);
  for (Letter l = 0; l < ap.letter_count(); ++l) d.set(0, l, 0, 2);
  d.finalize();
  return d;
}

inline DpaStep run_step(const Dpa& d, DpaState q, const LabelSet& l) {
  return d.step(q, l.bits());
}

// Result of running the loop of a lasso to its periodic regime from state q.
struct LoopOutcome {
  bool accepting;
  Color max_recurring_color;
};

// Simulates loop^omega from state q, tracking (state, loop position) pairs
// until one repeats; the colors on the detected cycle are the ones seen
// infinitely often.
inline LoopOutcome run_loop(const Dpa& d, DpaState q, const std::vector<Letter>& loop) {
  const std::size_t len = loop.size();
  std::vector<std::size_t> seen(d.num_states() * len, static_cast<std::size_t>(-1));
  std::vector<Color> colors;
  std::size_t pos = 0;
  while (seen[q * len + pos] == static_cast<std::size_t>(-1)) {
    seen[q * len + pos] = colors.size();
    const auto s = d.step(q, loop[pos]);
    colors.push_back(s.color);
    q = s.state;
    pos = (pos + 1) % len;
  }
  Color best = 0;
  for (std::size_t i = seen[q * len + pos]; i < colors.size(); ++i) best = std::max(best, colors[i]);
  return {best % 2 == 0, best};
}

inline bool accepts_lasso(const Dpa& d, const LassoWord& w) {
  w.validate(d.ap());
  DpaState q = d.initial();
  for (Letter l : w.stem) q = d.step(q, l).state;
  return run_loop(d, q, w.loop).accepting;
}

}  // namespace ltlgame
