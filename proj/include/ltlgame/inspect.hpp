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

// Grid-level views of a worst-case evaluation: which cells the recurrent
// behaviour occupies, structural visit bounds, and ASCII/SVG renderings.

#pragma once

#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "ltlgame/analysis.hpp"
#include "ltlgame/gridworld.hpp"
#include "ltlgame/strategy.hpp"

namespace ltlgame {

inline Cell cell_of(const WorstCaseEvaluation& ev, const GridGame& gw, StateId x) {
  return gw.cell[ev.product.game_state[ev.priority.product_state[x]]];
}

// Cells of each BSCC of the worst-case chain reachable from its initial state.
inline std::vector<std::set<Cell>> worst_case_bscc_cells(const WorstCaseEvaluation& ev,
                                                         const GridGame& gw) {
  const auto reach = ev.chain.reachable();
  std::vector<std::set<Cell>> out;
  for (const auto& b : bsccs(ev.chain)) {
    if (!reach[b.front()]) continue;
    std::set<Cell> cells;
    for (StateId x : b) cells.insert(cell_of(ev, gw, x));
    out.push_back(std::move(cells));
  }
  return out;
}

inline std::set<Cell> cells_labelled(const GridGame& gw, const std::string& prop) {
  std::set<Cell> out;
  const auto i = gw.game.ap.index_of(prop);
  for (const auto& [cell, s] : gw.cell_state)
    if (gw.game.labels[s].has(i)) out.insert(cell);
  return out;
}

// True when no path of the worst-case chain from its initial state enters a
// cell labelled `prop` twice. Entering means reaching the cell's controller
// state; adversary states repeat the label without emitting it.
inline bool visited_at_most_once(const WorstCaseEvaluation& ev, const GridGame& gw,
                                 const std::string& prop) {
  const auto reach = ev.chain.reachable();
  const auto cells = cells_labelled(gw, prop);
  const auto& g = ev.priority.graph;
  std::vector<bool> visit(ev.chain.size(), false);
  for (StateId x = 0; x < ev.chain.size(); ++x)
    visit[x] = reach[x] && g.owner[x] == Player::kController && cells.count(cell_of(ev, gw, x));
  for (StateId u = 0; u < ev.chain.size(); ++u) {
    if (!visit[u]) continue;
    std::vector<bool> seen(ev.chain.size(), false);
    std::vector<StateId> stack;
    for (const auto& o : ev.chain.trans[u]) stack.push_back(o.target);
    while (!stack.empty()) {
      const StateId x = stack.back();
      stack.pop_back();
      if (seen[x]) continue;
      seen[x] = true;
      if (visit[x]) return false;
      for (const auto& o : ev.chain.trans[x]) stack.push_back(o.target);
    }
  }
  return true;
}

// One character per cell, top row first: '#' obstacle, '*' recurrent cell,
// 'S' initial cell, otherwise the first letter of the first label or '.'.
inline std::string render_ascii(const GridGame& gw, const std::set<Cell>& highlight = {}) {
  const auto& spec = gw.spec;
  std::ostringstream os;
  for (int r = spec.height - 1; r >= 0; --r) {
    for (int c = 0; c < spec.width; ++c) {
      const Cell cell{r, c};
      char ch = '.';
      if (!spec.free(cell)) {
        ch = '#';
      } else if (highlight.count(cell)) {
        ch = '*';
      } else if (cell == spec.initial) {
        ch = 'S';
      } else if (auto it = spec.labels.find(cell); it != spec.labels.end() && !it->second.empty()) {
        ch = it->second.front().front();
      }
      os << ch;
    }
    os << '\n';
  }
  return os.str();
}

inline std::string render_svg(const GridGame& gw, const std::set<Cell>& highlight = {},
                              int cell_px = 48) {
  const auto& spec = gw.spec;
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << spec.width * cell_px
     << "\" height=\"" << spec.height * cell_px << "\" font-family=\"monospace\" font-size=\""
     << cell_px / 4 << "\">\n";
  for (int r = 0; r < spec.height; ++r)
    for (int c = 0; c < spec.width; ++c) {
      const Cell cell{r, c};
      const int x = c * cell_px;
      const int y = (spec.height - 1 - r) * cell_px;
      const char* fill = !spec.free(cell) ? "#333333" : highlight.count(cell) ? "#9be59b" : "#ffffff";
      os << "  <rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << cell_px << "\" height=\""
         << cell_px << "\" fill=\"" << fill << "\" stroke=\"#888888\"/>\n";
      std::string text;
      if (cell == spec.initial) text = "S";
      if (auto it = spec.labels.find(cell); it != spec.labels.end())
        for (const auto& l : it->second) text += (text.empty() ? "" : ",") + l;
      if (!text.empty())
        os << "  <text x=\"" << x + cell_px / 2 << "\" y=\"" << y + cell_px / 2
           << "\" text-anchor=\"middle\" dominant-baseline=\"middle\">" << text << "</text>\n";
    }
  os << "</svg>\n";
  return os.str();
}

}  // namespace ltlgame
