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

// Grid worlds as turn-based games. The robot (controller) picks a direction,
// then the adversary, having seen it, picks a perturbation.
//
// Orientation: row 0 is the bottom row and "up" increases the row. Clockwise
// is taken on that picture, so clockwise of up is right.
//
// Config lines:
//   grid <width> <height>
//   obstacle <row> <col>
//   label <row> <col> <prop>...
//   init <row> <col>
//   ap <prop>...                      # optional; defaults to the used labels
//   blocked stay|redistribute         # optional; defaults to stay

#pragma once

#include <array>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "ltlgame/common.hpp"
#include "ltlgame/game.hpp"
#include "ltlgame/labels.hpp"

namespace ltlgame {

struct Cell {
  int row = 0;
  int col = 0;
  auto operator<=>(const Cell&) const = default;
};

// Where a perturbation that points at an obstacle or the edge goes.
enum class BlockedMove { kStay, kRedistribute };

struct GridSpec {
  int width = 0;
  int height = 0;
  std::set<Cell> obstacles;
  std::map<Cell, std::vector<std::string>> labels;
  Cell initial;
  std::vector<std::string> ap;  // empty: sorted union of the labels
  BlockedMove blocked = BlockedMove::kStay;

  bool inside(Cell c) const { return c.row >= 0 && c.row < height && c.col >= 0 && c.col < width; }
  bool free(Cell c) const { return inside(c) && !obstacles.count(c); }

  void validate() const {
    if (width < 1 || height < 1) throw ValidationError("grid dimensions must be at least 1");
    for (const auto& o : obstacles)
      if (!inside(o)) throw ValidationError("obstacle outside the grid");
    if (!free(initial)) throw ValidationError("initial cell is outside the grid or an obstacle");
    for (const auto& [c, names] : labels)
      if (!free(c))
        throw ValidationError("labeled cell (" + std::to_string(c.row) + "," +
                              std::to_string(c.col) + ") is outside the grid or an obstacle");
  }

  ApUniverse universe() const {
    if (!ap.empty()) return ApUniverse(ap);
    std::set<std::string> used;
    for (const auto& [c, names] : labels) used.insert(names.begin(), names.end());
    return ApUniverse(std::vector<std::string>(used.begin(), used.end()));
  }
};

enum Direction : int { kUp = 0, kDown = 1, kRight = 2, kLeft = 3 };
enum Perturbation : int { kNone = 0, kClockwise = 1, kCounterClockwise = 2, kBoth = 3 };

inline constexpr std::array<const char*, 4> kDirectionNames = {"up", "down", "right", "left"};
inline constexpr std::array<const char*, 4> kPerturbationNames = {"none", "cw", "ccw", "both"};

inline Cell move(Cell c, Direction d) {
  switch (d) {
    case kUp: return {c.row + 1, c.col};
    case kDown: return {c.row - 1, c.col};
    case kRight: return {c.row, c.col + 1};
    case kLeft: return {c.row, c.col - 1};
  }
  return c;
}

inline Direction clockwise(Direction d) {
  switch (d) {
    case kUp: return kRight;
    case kRight: return kDown;
    case kDown: return kLeft;
    case kLeft: return kUp;
  }
  return d;
}

inline Direction counter_clockwise(Direction d) { return clockwise(clockwise(clockwise(d))); }

inline std::string cell_name(Cell c) {
  return "r" + std::to_string(c.row) + "c" + std::to_string(c.col);
}

inline GridSpec parse_grid_spec(std::string_view text) {
  GridSpec g;
  bool have_grid = false, have_init = false;
  std::size_t line_no = 0;
  for (auto raw : detail::lines(text)) {
    ++line_no;
    const auto w = detail::split_ws(detail::strip_comment(raw));
    if (w.empty()) continue;
    auto fail = [&](const std::string& what) {
      return ParseError("line " + std::to_string(line_no) + ": " + what);
    };
    auto cell = [&](std::size_t i) {
      if (w.size() < i + 2) throw fail("expected <row> <col>");
      return Cell{static_cast<int>(detail::parse_long(w[i], line_no)),
                  static_cast<int>(detail::parse_long(w[i + 1], line_no))};
    };
    if (w[0] == "grid") {
      if (w.size() != 3) throw fail("grid needs <width> <height>");
      g.width = static_cast<int>(detail::parse_long(w[1], line_no));
      g.height = static_cast<int>(detail::parse_long(w[2], line_no));
      have_grid = true;
    } else if (w[0] == "obstacle") {
      g.obstacles.insert(cell(1));
    } else if (w[0] == "label") {
      const Cell c = cell(1);
      auto& names = g.labels[c];
      names.insert(names.end(), w.begin() + 3, w.end());
    } else if (w[0] == "init") {
      g.initial = cell(1);
      have_init = true;
    } else if (w[0] == "ap") {
      g.ap.assign(w.begin() + 1, w.end());
    } else if (w[0] == "blocked") {
      if (w.size() != 2 || (w[1] != "stay" && w[1] != "redistribute"))
        throw fail("blocked must be stay or redistribute");
      g.blocked = w[1] == "stay" ? BlockedMove::kStay : BlockedMove::kRedistribute;
    } else {
      throw fail("unknown keyword '" + w[0] + "'");
    }
  }
  if (!have_grid) throw ParseError("missing grid line");
  if (!have_init) throw ParseError("missing init line");
  g.validate();
  return g;
}

// Result of the encoding, with the geometry needed to map states back.
struct GridGame {
  StochasticGame game;
  GridSpec spec;
  std::vector<Cell> cell;            // per state
  std::vector<int> intended;         // per state; -1 on controller states
  std::map<Cell, StateId> cell_state;  // controller state of each free cell
};

// Controller states are free cells; adversary states are (cell, intended
// direction) pairs. Adversary states repeat their cell's label and are
// silent, so a round of two half-steps emits the cell's label once.
inline GridGame build_gridworld(const GridSpec& spec) {
  spec.validate();
  GridGame out;
  out.spec = spec;
  auto& g = out.game;
  g.ap = spec.universe();
  g.graph.action_names = {"up", "down", "right", "left", "none", "cw", "ccw", "both"};
  const ActionId kFirstPerturbation = 4;

  auto label_of = [&](Cell c) {
    const auto it = spec.labels.find(c);
    return it == spec.labels.end() ? LabelSet{} : LabelSet(g.ap, it->second);
  };
  auto add_state = [&](Cell c, int dir, Player p, std::string name) {
    const StateId id = g.graph.owner.size();
    g.graph.owner.push_back(p);
    g.graph.choices.emplace_back();
    g.state_names.push_back(std::move(name));
    g.labels.push_back(label_of(c));
    g.silent.push_back(p == Player::kAdversary);
    out.cell.push_back(c);
    out.intended.push_back(dir);
    return id;
  };

  for (int r = 0; r < spec.height; ++r)
    for (int c = 0; c < spec.width; ++c) {
      const Cell cell{r, c};
      if (spec.free(cell))
        out.cell_state[cell] = add_state(cell, -1, Player::kController, cell_name(cell));
    }
  g.graph.initial = out.cell_state.at(spec.initial);

  for (const auto& [cell, s] : std::map<Cell, StateId>(out.cell_state)) {
    for (int d = 0; d < 4; ++d) {
      const auto dir = static_cast<Direction>(d);
      const Cell target = move(cell, dir);
      if (!spec.free(target)) continue;
      const StateId adv = add_state(cell, d, Player::kAdversary,
                                    cell_name(cell) + "_" + kDirectionNames[static_cast<std::size_t>(d)]);
      g.graph.choices[s].push_back({static_cast<ActionId>(d), {{adv, 1.0}}});

      // Perpendicular outcome: the neighbour if free, else per `blocked`.
      auto side = [&](Direction p) {
        const Cell n = move(cell, p);
        if (spec.free(n)) return out.cell_state.at(n);
        return spec.blocked == BlockedMove::kStay ? s : out.cell_state.at(target);
      };
      const StateId ahead = out.cell_state.at(target);
      const StateId cw = side(clockwise(dir));
      const StateId ccw = side(counter_clockwise(dir));
      const std::array<std::vector<std::pair<StateId, double>>, 4> dists = {{
          {{ahead, 1.0}},
          {{ahead, 0.8}, {cw, 0.2}},
          {{ahead, 0.8}, {ccw, 0.2}},
          {{ahead, 0.8}, {cw, 0.1}, {ccw, 0.1}},
      }};
      for (std::size_t p = 0; p < dists.size(); ++p) {
        Choice choice{kFirstPerturbation + p, {}};
        for (const auto& [to, prob] : dists[p]) {
          auto it = std::find_if(choice.outcomes.begin(), choice.outcomes.end(),
                                 [&](const Outcome& o) { return o.target == to; });
          if (it == choice.outcomes.end())
            choice.outcomes.push_back({to, prob});
          else
            it->prob += prob;
        }
        g.graph.choices[adv].push_back(std::move(choice));
      }
    }
    if (g.graph.choices[s].empty())
      throw ValidationError("cell " + cell_name(cell) + " has no free neighbour");
  }
  g.validate();
  return out;
}

}  // namespace ltlgame
