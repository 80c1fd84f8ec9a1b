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

#pragma once

#include <algorithm>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

#include "ltlgame/common.hpp"

namespace ltlgame {

// A letter of 2^AP encoded as a bitmask over an ApUniverse. Bit i is set when
// the i-th proposition of the universe holds.
using Letter = std::uint32_t;

inline constexpr std::size_t kMaxPropositions = 16;

// Ordered set of atomic proposition names. The order fixes the bit layout of
// letters, so two universes with the same names in a different order are
// different universes.
class ApUniverse {
 public:
  ApUniverse() = default;
  explicit ApUniverse(std::vector<std::string> names) : names_(std::move(names)) {
    if (names_.size() > kMaxPropositions)
      throw ValidationError("at most " + std::to_string(kMaxPropositions) +
                            " atomic propositions are supported");
    for (std::size_t i = 0; i < names_.size(); ++i)
      for (std::size_t j = i + 1; j < names_.size(); ++j)
        if (names_[i] == names_[j])
          throw ValidationError("duplicate atomic proposition '" + names_[i] + "'");
  }
  ApUniverse(std::initializer_list<std::string> names)
      : ApUniverse(std::vector<std::string>(names)) {}

  std::size_t size() const { return names_.size(); }
  std::size_t letter_count() const { return std::size_t{1} << names_.size(); }
  const std::vector<std::string>& names() const { return names_; }
  const std::string& name(std::size_t i) const { return names_.at(i); }

  // Index of a proposition, or size() if absent.
  std::size_t find(std::string_view name) const {
    for (std::size_t i = 0; i < names_.size(); ++i)
      if (names_[i] == name) return i;
    return names_.size();
  }
  bool contains(std::string_view name) const { return find(name) < size(); }

  std::size_t index_of(std::string_view name) const {
    const auto i = find(name);
    if (i == size())
      throw ValidationError("atomic proposition '" + std::string(name) +
                            "' is not in the universe");
    return i;
  }

  Letter letter(const std::vector<std::string>& props) const {
    Letter l = 0;
    for (const auto& p : props) l |= Letter{1} << index_of(p);
    return l;
  }

  bool includes(const ApUniverse& other) const {
    return std::all_of(other.names_.begin(), other.names_.end(),
                       [&](const std::string& n) { return contains(n); });
  }

  // Re-encodes a letter of `from` into this universe; every proposition of
  // `from` that holds must exist here.
  Letter translate(Letter l, const ApUniverse& from) const {
    Letter out = 0;
    for (std::size_t i = 0; i < from.size(); ++i)
      if (l & (Letter{1} << i)) out |= Letter{1} << index_of(from.name(i));
    return out;
  }

  // Canonical rendering "{a,c}" with names in universe order.
  std::string format(Letter l) const {
    std::string s = "{";
    bool first = true;
    for (std::size_t i = 0; i < names_.size(); ++i) {
      if (l & (Letter{1} << i)) {
        if (!first) s += ',';
        s += names_[i];
        first = false;
      }
    }
    return s + "}";
  }

  bool operator==(const ApUniverse&) const = default;

 private:
  std::vector<std::string> names_;
};

// A set of propositions tied to a universe; the semantic domain 2^AP.
class LabelSet {
 public:
  LabelSet() = default;
  LabelSet(const ApUniverse& ap, const std::vector<std::string>& props)
      : bits_(ap.letter(props)) {}
  static LabelSet from_bits(const ApUniverse& ap, Letter bits) {
    if (ap.size() < 32 && (bits >> ap.size()) != 0)
      throw ValidationError("label uses propositions outside the universe");
    LabelSet s;
    s.bits_ = bits;
    return s;
  }

  Letter bits() const { return bits_; }
  bool has(std::size_t index) const { return (bits_ >> index) & 1U; }
  std::vector<std::string> names(const ApUniverse& ap) const {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < ap.size(); ++i)
      if (has(i)) out.push_back(ap.name(i));
    return out;
  }

  bool operator==(const LabelSet&) const = default;

 private:
  Letter bits_ = 0;
};

// The ultimately periodic word stem . loop^omega.
struct LassoWord {
  std::vector<Letter> stem;
  std::vector<Letter> loop;

  std::size_t length() const { return stem.size() + loop.size(); }

  // Letter at absolute position t of the infinite word.
  Letter at(std::size_t t) const {
    if (t < stem.size()) return stem[t];
    return loop[(t - stem.size()) % loop.size()];
  }

  void validate(const ApUniverse& ap) const {
    if (loop.empty()) throw ValidationError("lasso loop must be nonempty");
    const Letter mask = static_cast<Letter>(ap.letter_count() - 1);
    for (Letter l : stem)
      if (l & ~mask) throw ValidationError("lasso letter outside the AP universe");
    for (Letter l : loop)
      if (l & ~mask) throw ValidationError("lasso letter outside the AP universe");
  }

  std::string format(const ApUniverse& ap) const {
    std::string s = "stem=[";
    for (std::size_t i = 0; i < stem.size(); ++i) s += (i ? "," : "") + ap.format(stem[i]);
    s += "] loop=[";
    for (std::size_t i = 0; i < loop.size(); ++i) s += (i ? "," : "") + ap.format(loop[i]);
    return s + "]";
  }

  bool operator==(const LassoWord&) const = default;
};

}  // namespace ltlgame
