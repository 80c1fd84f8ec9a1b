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

// Bounded exhaustive comparison of a DPA against an LTL formula on every
// lasso word stem . loop^omega with |stem| <= max_stem and
// 1 <= |loop| <= max_loop over the automaton's alphabet.
//
// The answer is exactly that of enumerating every lasso, but the work is
// factored. Loops are grouped by (formula values the stem needs at the loop
// entry, acceptance from each automaton state); stems by (automaton state
// after the stem, formula verdict for each loop group). Mismatches are found
// on the product of the groups, so the cost is |stems| + |loops| rather than
// |stems| * |loops|.

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "ltlgame/common.hpp"
#include "ltlgame/dpa.hpp"
#include "ltlgame/labels.hpp"
#include "ltlgame/ltl.hpp"

namespace ltlgame {

struct LassoMismatch {
  LassoWord word;
  bool automaton_accepts;
  bool formula_holds;
  // Number of lassos within the bounds that behave like this one.
  std::uint64_t multiplicity;
};

struct EquivalenceReport {
  std::uint64_t lassos_checked = 0;
  std::uint64_t mismatch_count = 0;
  // Representatives of every mismatching group, up to max_listed entries.
  std::vector<LassoMismatch> counterexamples;
  bool truncated = false;

  bool pass() const { return mismatch_count == 0; }
};

struct EquivalenceOptions {
  std::size_t max_stem = 3;
  std::size_t max_loop = 3;
  // Budget on the number of stems plus loops enumerated.
  std::uint64_t enumeration_cap = 50'000'000;
  bool allow_large = false;
  std::size_t max_listed = 100;
};

namespace detail {

inline std::uint64_t pow_u64(std::uint64_t b, std::size_t e) {
  std::uint64_t r = 1;
  for (std::size_t i = 0; i < e; ++i) r *= b;
  return r;
}

// Decodes the index-th word of length len over an alphabet of size a.
inline void decode_word(std::uint64_t index, std::size_t len, std::uint64_t a,
                        std::vector<Letter>& out) {
  out.resize(len);
  for (std::size_t i = len; i-- > 0;) {
    out[i] = static_cast<Letter>(index % a);
    index /= a;
  }
}

}  // namespace detail

inline std::uint64_t count_lasso_words(std::size_t alphabet, std::size_t max_stem,
                                       std::size_t max_loop) {
  std::uint64_t stems = 0, loops = 0;
  for (std::size_t l = 0; l <= max_stem; ++l) stems += detail::pow_u64(alphabet, l);
  for (std::size_t l = 1; l <= max_loop; ++l) loops += detail::pow_u64(alphabet, l);
  return stems * loops;
}

inline EquivalenceReport check_equivalence_bounded(const Dpa& d, const Formula& f,
                                                   const EquivalenceOptions& opt = {}) {
  for (const auto& a : atomic_propositions(f))
    if (!d.ap().contains(a))
      throw ValidationError("formula atom '" + a + "' is not in the automaton's AP set");
  if (opt.max_loop < 1) throw ValidationError("loop bound must be at least 1");

  const std::uint64_t alphabet = d.ap().letter_count();
  std::uint64_t num_stems = 0, num_loops = 0;
  for (std::size_t l = 0; l <= opt.max_stem; ++l) num_stems += detail::pow_u64(alphabet, l);
  for (std::size_t l = 1; l <= opt.max_loop; ++l) num_loops += detail::pow_u64(alphabet, l);
  if (!opt.allow_large && num_stems + num_loops > opt.enumeration_cap)
    throw CapExceeded("bounded check would enumerate " + std::to_string(num_stems + num_loops) +
                      " stems and loops (cap " + std::to_string(opt.enumeration_cap) +
                      "); raise the cap or allow large enumerations explicitly");

  const CompiledFormula cf(f, d.ap());
  const auto reads = cf.successor_reads();
  const std::size_t m = cf.size();
  const std::size_t nq = d.num_states();

  // Interfaces: the formula values at a position that its predecessor reads.
  std::map<std::vector<std::uint8_t>, std::uint32_t> iface_ids;
  std::vector<std::vector<std::uint8_t>> iface_full;  // size m, zeros off `reads`
  auto intern = [&](const std::uint8_t* full) {
    std::vector<std::uint8_t> key(reads.size());
    for (std::size_t i = 0; i < reads.size(); ++i) key[i] = full[reads[i]];
    auto [it, inserted] = iface_ids.emplace(key, static_cast<std::uint32_t>(iface_full.size()));
    if (inserted) {
      std::vector<std::uint8_t> v(m, 0);
      for (std::size_t i = 0; i < reads.size(); ++i) v[reads[i]] = key[i];
      iface_full.push_back(std::move(v));
    }
    return it->second;
  };

  struct LoopClass {
    std::uint32_t iface;
    bool root;
    std::vector<std::uint8_t> accepts;  // per automaton state
    std::uint64_t count;
    std::vector<Letter> example;
  };
  std::vector<LoopClass> loop_classes;
  {
    std::map<std::vector<std::uint8_t>, std::size_t> index;
    std::vector<Letter> loop;
    for (std::size_t len = 1; len <= opt.max_loop; ++len) {
      const auto total = detail::pow_u64(alphabet, len);
      for (std::uint64_t w = 0; w < total; ++w) {
        detail::decode_word(w, len, alphabet, loop);
        const auto table = lasso_truth_table(cf, LassoWord{{}, loop});
        const std::uint32_t iface = intern(table[0].data());
        std::vector<std::uint8_t> key;
        key.reserve(nq + 5);
        for (int b = 0; b < 4; ++b) key.push_back(static_cast<std::uint8_t>(iface >> (8 * b)));
        key.push_back(table[0][cf.root()]);
        std::vector<std::uint8_t> acc(nq);
        for (std::size_t q = 0; q < nq; ++q) acc[q] = run_loop(d, q, loop).accepting;
        key.insert(key.end(), acc.begin(), acc.end());
        auto [it, inserted] = index.emplace(std::move(key), loop_classes.size());
        if (inserted)
          loop_classes.push_back({iface, table[0][cf.root()] != 0, std::move(acc), 0, loop});
        ++loop_classes[it->second].count;
      }
    }
  }

  // Loop-entry interfaces that matter, each with a dense slot.
  std::vector<std::uint32_t> entry_ifaces;
  std::vector<std::int32_t> entry_slot(iface_full.size(), -1);
  for (const auto& lc : loop_classes)
    if (entry_slot[lc.iface] < 0) {
      entry_slot[lc.iface] = static_cast<std::int32_t>(entry_ifaces.size());
      entry_ifaces.push_back(lc.iface);
    }

  // Backward transfer over one letter, memoized: (letter, iface) -> (iface', root).
  std::vector<std::vector<std::int64_t>> memo(alphabet);
  std::vector<std::uint8_t> out(m);
  auto transfer = [&](Letter l, std::uint32_t iface) -> std::int64_t {
    auto& row = memo[l];
    if (row.size() <= iface) row.resize(iface_full.size() + 16, -1);
    if (row[iface] >= 0) return row[iface];
    cf.step(l, iface_full[iface].data(), out.data());
    const std::uint32_t next = intern(out.data());
    const std::int64_t packed = static_cast<std::int64_t>(next) * 2 + out[cf.root()];
    row[iface] = packed;
    return packed;
  };

  struct StemClass {
    DpaState end;
    std::vector<std::uint8_t> verdict;  // per entry iface slot; empty for the empty stem
    std::uint64_t count;
    std::vector<Letter> example;
  };
  std::vector<StemClass> stem_classes;
  {
    std::map<std::vector<std::uint8_t>, std::size_t> index;
    std::vector<Letter> stem;
    std::vector<std::uint8_t> verdict(entry_ifaces.size());
    for (std::size_t len = 0; len <= opt.max_stem; ++len) {
      const auto total = detail::pow_u64(alphabet, len);
      for (std::uint64_t w = 0; w < total; ++w) {
        detail::decode_word(w, len, alphabet, stem);
        DpaState q = d.initial();
        for (Letter l : stem) q = d.step(q, l).state;
        std::vector<std::uint8_t> key;
        key.push_back(len == 0 ? 1 : 0);
        for (int b = 0; b < 4; ++b) key.push_back(static_cast<std::uint8_t>(q >> (8 * b)));
        if (len > 0) {
          for (std::size_t s = 0; s < entry_ifaces.size(); ++s) {
            std::uint32_t cur = entry_ifaces[s];
            std::int64_t packed = 0;
            for (std::size_t i = len; i-- > 0;) {
              packed = transfer(stem[i], cur);
              cur = static_cast<std::uint32_t>(packed / 2);
            }
            verdict[s] = static_cast<std::uint8_t>(packed % 2);
          }
          key.insert(key.end(), verdict.begin(), verdict.end());
        }
        auto [it, inserted] = index.emplace(std::move(key), stem_classes.size());
        if (inserted)
          stem_classes.push_back(
              {q, len == 0 ? std::vector<std::uint8_t>{} : verdict, 0, stem});
        ++stem_classes[it->second].count;
      }
    }
  }

  EquivalenceReport report;
  report.lassos_checked = num_stems * num_loops;
  for (const auto& sc : stem_classes) {
    for (const auto& lc : loop_classes) {
      const bool holds = sc.verdict.empty()
                             ? lc.root
                             : sc.verdict[static_cast<std::size_t>(entry_slot[lc.iface])] != 0;
      const bool accepts = lc.accepts[sc.end] != 0;
      if (holds == accepts) continue;
      const std::uint64_t mult = sc.count * lc.count;
      report.mismatch_count += mult;
      if (report.counterexamples.size() < opt.max_listed)
        report.counterexamples.push_back({LassoWord{sc.example, lc.example}, accepts, holds, mult});
      else
        report.truncated = true;
    }
  }
  return report;
}

}  // namespace ltlgame
