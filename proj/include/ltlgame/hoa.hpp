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

// Reading and writing deterministic parity automata in a subset of the Hanoi
// Omega-Automata format (HOA v1).
//
// Supported: explicit AP lists, `Start:` with one state, `acc-name: parity
// <min|max> <even|odd> <n>` (or the same words after `Acceptance:`), edge
// labels that are `t` or conjunctions of possibly negated AP indices
// (disjunctions of such cubes are accepted too), and acceptance marks on
// either states or transitions.
//
// Colors are normalized to 1-based "max even". Each mark is first mapped to
// an integer under max-even semantics (max even: c, max odd: c+1, min even:
// -c, min odd: 1-c; an unmarked edge sits below or beyond every mark as the
// convention dictates), then compacted to the smallest parity- and
// order-preserving range starting at 1.

#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "ltlgame/common.hpp"
#include "ltlgame/dpa.hpp"
#include "ltlgame/labels.hpp"

namespace ltlgame {

enum class ParityKind : std::uint8_t { kMaxEven, kMaxOdd, kMinEven, kMinOdd };

namespace detail {

struct HoaCube {
  Letter pos = 0;
  Letter neg = 0;
};

class HoaReader {
 public:
  explicit HoaReader(std::string_view text) : text_(text) {}

  Dpa read() {
    header();
    body();
    return build();
  }

 private:
  struct Edge {
    std::vector<HoaCube> label;
    std::size_t target;
    std::vector<int> marks;
  };

  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError("HOA: " + what + " (line " + std::to_string(line_no_) + ")");
  }

  bool next_line(std::string_view& out) {
    while (cursor_ < text_.size()) {
      auto end = text_.find('\n', cursor_);
      if (end == std::string_view::npos) end = text_.size();
      out = trim(text_.substr(cursor_, end - cursor_));
      cursor_ = end + 1;
      ++line_no_;
      if (!out.empty() && !out.starts_with("/*")) return true;
    }
    return false;
  }

  void header() {
    std::string_view line;
    if (!next_line(line) || !line.starts_with("HOA:")) fail("missing 'HOA: v1' header");
    if (trim(line.substr(4)) != "v1") fail("only HOA v1 is supported");
    while (next_line(line)) {
      if (line == "--BODY--") return;
      const auto colon = line.find(':');
      if (colon == std::string_view::npos) fail("malformed header line");
      const std::string key(trim(line.substr(0, colon)));
      const std::string_view rest = trim(line.substr(colon + 1));
      if (key == "States") {
        num_states_ = static_cast<std::size_t>(parse_long(std::string(rest), line_no_));
      } else if (key == "Start") {
        if (start_) fail("multiple initial states are not supported");
        if (rest.find('&') != std::string_view::npos) fail("alternating start is not supported");
        start_ = static_cast<std::size_t>(parse_long(std::string(rest), line_no_));
      } else if (key == "AP") {
        aps(rest);
      } else if (key == "acc-name") {
        acc_name(rest);
      } else if (key == "Acceptance") {
        acceptance(rest);
      }
      // name, tool, properties and unknown headers are informational.
    }
    fail("missing --BODY--");
  }

  void aps(std::string_view rest) {
    std::size_t i = 0;
    auto skip = [&] {
      while (i < rest.size() && (rest[i] == ' ' || rest[i] == '\t')) ++i;
    };
    std::size_t j = i;
    while (j < rest.size() && rest[j] >= '0' && rest[j] <= '9') ++j;
    if (j == i) fail("AP count expected");
    const long count = parse_long(std::string(rest.substr(i, j - i)), line_no_);
    i = j;
    std::vector<std::string> names;
    for (long n = 0; n < count; ++n) {
      skip();
      if (i >= rest.size() || rest[i] != '"') fail("quoted AP name expected");
      const auto close = rest.find('"', i + 1);
      if (close == std::string_view::npos) fail("unterminated AP name");
      names.emplace_back(rest.substr(i + 1, close - i - 1));
      i = close + 1;
    }
    skip();
    if (i != rest.size()) fail("trailing text after AP list");
    ap_ = ApUniverse(std::move(names));
    have_ap_ = true;
  }

  void parity_words(const std::vector<std::string>& w, std::size_t from) {
    if (w.size() < from + 3) fail("parity acceptance needs <min|max> <even|odd> <n>");
    const bool is_max = w[from] == "max";
    const bool is_even = w[from + 1] == "even";
    if ((!is_max && w[from] != "min") || (!is_even && w[from + 1] != "odd"))
      fail("unsupported parity variant");
    kind_ = is_max ? (is_even ? ParityKind::kMaxEven : ParityKind::kMaxOdd)
                   : (is_even ? ParityKind::kMinEven : ParityKind::kMinOdd);
    num_sets_ = static_cast<int>(parse_long(w[from + 2], line_no_));
  }

  void acc_name(std::string_view rest) {
    const auto w = split_ws(rest);
    if (w.empty() || w[0] != "parity")
      fail("unsupported acceptance '" + std::string(rest) + "' (only parity)");
    parity_words(w, 1);
  }

  void acceptance(std::string_view rest) {
    const auto w = split_ws(rest);
    if (w.empty()) fail("empty Acceptance");
    if (w[0] == "parity") {
      parity_words(w, 1);
      return;
    }
    // "<n> <condition>": the acc-name line carries the parity variant.
    declared_sets_ = static_cast<int>(parse_long(w[0], line_no_));
  }

  std::vector<int> marks(std::string_view& s) {
    std::vector<int> out;
    s = trim(s);
    if (!s.starts_with("{")) return out;
    const auto close = s.find('}');
    if (close == std::string_view::npos) fail("unterminated acceptance marks");
    for (const auto& tok : split_ws(s.substr(1, close - 1)))
      out.push_back(static_cast<int>(parse_long(tok, line_no_)));
    s = trim(s.substr(close + 1));
    for (int m : out)
      if (m < 0 || (num_sets_ > 0 && m >= num_sets_)) fail("acceptance mark out of range");
    return out;
  }

  std::vector<HoaCube> label(std::string_view s) {
    std::vector<HoaCube> cubes;
    for (auto part : split_on(s, '|')) {
      part = trim(part);
      HoaCube cube;
      bool is_false = false;
      for (auto lit : split_on(part, '&')) {
        lit = trim(lit);
        if (lit == "t") continue;
        if (lit == "f") {
          is_false = true;
          continue;
        }
        bool neg = false;
        if (lit.starts_with("!")) {
          neg = true;
          lit = trim(lit.substr(1));
        }
        const long idx = parse_long(std::string(lit), line_no_);
        if (idx < 0 || static_cast<std::size_t>(idx) >= ap_.size()) fail("AP index out of range");
        (neg ? cube.neg : cube.pos) |= Letter{1} << idx;
      }
      if (!is_false && !(cube.pos & cube.neg)) cubes.push_back(cube);
    }
    return cubes;
  }

  static std::vector<std::string_view> split_on(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
      const auto p = s.find(sep, start);
      if (p == std::string_view::npos) {
        out.push_back(s.substr(start));
        return out;
      }
      out.push_back(s.substr(start, p - start));
      start = p + 1;
    }
  }

  void body() {
    if (!have_ap_) fail("missing AP header");
    if (!kind_) fail("missing parity acceptance (acc-name: parity ...)");
    if (declared_sets_ && *declared_sets_ != num_sets_)
      fail("Acceptance set count disagrees with acc-name");
    if (num_states_ == 0) fail("missing or zero States");
    if (!start_) fail("missing Start");
    edges_.assign(num_states_, {});
    state_marks_.assign(num_states_, {});
    std::string_view line;
    std::optional<std::size_t> current;
    while (next_line(line)) {
      if (line == "--END--") return;
      if (line.starts_with("State:")) {
        auto rest = trim(line.substr(6));
        std::size_t j = 0;
        while (j < rest.size() && rest[j] >= '0' && rest[j] <= '9') ++j;
        const auto q = static_cast<std::size_t>(parse_long(std::string(rest.substr(0, j)), line_no_));
        if (q >= num_states_) fail("state index out of range");
        rest = trim(rest.substr(j));
        if (rest.starts_with("\"")) {
          const auto close = rest.find('"', 1);
          if (close == std::string_view::npos) fail("unterminated state name");
          rest = trim(rest.substr(close + 1));
        }
        state_marks_[q] = marks(rest);
        current = q;
        continue;
      }
      if (!current) fail("edge before any State:");
      if (!line.starts_with("[")) fail("implicit edge labels are not supported");
      const auto close = line.find(']');
      if (close == std::string_view::npos) fail("unterminated edge label");
      Edge e;
      e.label = label(line.substr(1, close - 1));
      auto rest = trim(line.substr(close + 1));
      std::size_t j = 0;
      while (j < rest.size() && rest[j] >= '0' && rest[j] <= '9') ++j;
      if (j == 0) fail("edge target expected");
      e.target = static_cast<std::size_t>(parse_long(std::string(rest.substr(0, j)), line_no_));
      if (e.target >= num_states_) fail("edge target out of range");
      rest = trim(rest.substr(j));
      if (rest.starts_with("&")) fail("universal branching is not supported");
      e.marks = marks(rest);
      if (!rest.empty()) fail("trailing text on edge");
      edges_[*current].push_back(std::move(e));
    }
    fail("missing --END--");
  }

  // Max-even rank of a set of marks (empty = unmarked).
  long rank(const std::vector<int>& m) const {
    const bool is_max = *kind_ == ParityKind::kMaxEven || *kind_ == ParityKind::kMaxOdd;
    if (m.empty()) {
      switch (*kind_) {
        case ParityKind::kMaxEven:
        case ParityKind::kMaxOdd: return -1;
        case ParityKind::kMinEven: return -static_cast<long>(num_sets_);
        case ParityKind::kMinOdd: return 1 - static_cast<long>(num_sets_);
      }
    }
    const int c = is_max ? *std::max_element(m.begin(), m.end())
                         : *std::min_element(m.begin(), m.end());
    switch (*kind_) {
      case ParityKind::kMaxEven: return c;
      case ParityKind::kMaxOdd: return c + 1;
      case ParityKind::kMinEven: return -c;
      case ParityKind::kMinOdd: return 1 - c;
    }
    return 0;
  }

  Dpa build() const {
    const std::size_t letters = ap_.letter_count();
    std::vector<std::size_t> next(num_states_ * letters, static_cast<std::size_t>(-1));
    std::vector<long> ranks(num_states_ * letters, 0);
    for (std::size_t q = 0; q < num_states_; ++q) {
      for (const Edge& e : edges_[q]) {
        auto m = e.marks;
        m.insert(m.end(), state_marks_[q].begin(), state_marks_[q].end());
        const long r = rank(m);
        for (const HoaCube& cube : e.label) {
          for (Letter l = 0; l < letters; ++l) {
            if ((l & cube.pos) != cube.pos || (l & cube.neg) != 0) continue;
            auto& slot = next[q * letters + l];
            if (slot != static_cast<std::size_t>(-1) &&
                (slot != e.target || ranks[q * letters + l] != r))
              throw ValidationError("HOA automaton is nondeterministic: state " +
                                    std::to_string(q) + " on " + ap_.format(l));
            slot = e.target;
            ranks[q * letters + l] = r;
          }
        }
      }
      for (Letter l = 0; l < letters; ++l)
        if (next[q * letters + l] == static_cast<std::size_t>(-1))
          throw ValidationError("HOA automaton is incomplete: state " + std::to_string(q) +
                                " has no edge for " + ap_.format(l));
    }
    // Compact ranks into 1..k keeping order and parity.
    std::set<long> distinct(ranks.begin(), ranks.end());
    std::map<long, Color> compact;
    Color cur = 0;
    for (long r : distinct) {
      const int parity = static_cast<int>(((r % 2) + 2) % 2);
      Color x = cur + 1;
      if (x % 2 != parity) ++x;
      compact[r] = x;
      cur = x;
    }
    std::vector<Color> colors(ranks.size());
    for (std::size_t i = 0; i < ranks.size(); ++i) colors[i] = compact[ranks[i]];
    return Dpa(ap_, num_states_, *start_, std::max(cur, 1), std::move(next), std::move(colors));
  }

  std::string_view text_;
  std::size_t cursor_ = 0;
  std::size_t line_no_ = 0;
  std::size_t num_states_ = 0;
  std::optional<std::size_t> start_;
  ApUniverse ap_;
  bool have_ap_ = false;
  std::optional<ParityKind> kind_;
  int num_sets_ = 0;
  std::optional<int> declared_sets_;
  std::vector<std::vector<Edge>> edges_;
  std::vector<std::vector<int>> state_marks_;
};

inline std::string parity_max_even_condition(int n) {
  std::string s;
  int open = 0;
  for (int i = n - 1; i >= 0; --i) {
    s += (i % 2 == 0 ? "Inf(" : "Fin(") + std::to_string(i) + ")";
    if (i > 0) {
      s += (i % 2 == 0 ? " | (" : " & (");
      ++open;
    }
  }
  return s + std::string(static_cast<std::size_t>(open), ')');
}

}  // namespace detail

inline Dpa parse_hoa(std::string_view text) { return detail::HoaReader(text).read(); }

// Writes `d` with marks equal to its colors under "parity max even k+1"; one
// edge per letter.
inline std::string write_hoa(const Dpa& d, const std::string& name = "") {
  std::ostringstream os;
  const int sets = d.k() + 1;
  os << "HOA: v1\n";
  if (!name.empty()) os << "name: \"" << name << "\"\n";
  os << "States: " << d.num_states() << "\n";
  os << "Start: " << d.initial() << "\n";
  os << "AP: " << d.ap().size();
  for (const auto& n : d.ap().names()) os << " \"" << n << "\"";
  os << "\n";
  os << "acc-name: parity max even " << sets << "\n";
  os << "Acceptance: " << sets << " " << detail::parity_max_even_condition(sets) << "\n";
  os << "properties: trans-labels explicit-labels trans-acc deterministic complete colored\n";
  os << "--BODY--\n";
  for (std::size_t q = 0; q < d.num_states(); ++q) {
    os << "State: " << q << "\n";
    for (Letter l = 0; l < d.ap().letter_count(); ++l) {
      os << "[";
      if (d.ap().size() == 0) os << "t";
      for (std::size_t i = 0; i < d.ap().size(); ++i) {
        if (i) os << "&";
        if (!(l & (Letter{1} << i))) os << "!";
        os << i;
      }
      const auto s = d.step(q, l);
      os << "] " << s.state << " {" << s.color << "}\n";
    }
  }
  os << "--END--\n";
  return os.str();
}

}  // namespace ltlgame
