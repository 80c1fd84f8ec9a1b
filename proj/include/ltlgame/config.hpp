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

// Run configuration. The file format is flat `key = value` lines under
// section headers; '#' and ';' start comments. Example:
//
//   [game]
//   grid = ../data/grids/nursery.grid
//   [automaton]
//   hoa = ../data/automata/nursery.hoa
//   [prm]
//   epsilon = 0.01
//   [learn]
//   episodes = 16384
//   [output]
//   dir = out/nursery
//
// Relative input paths in a file resolve against the file's directory;
// the output directory stays relative to the working directory. Overrides
// given as `section.key=value` replace file values.

#pragma once

#include <charconv>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "ltlgame/common.hpp"
#include "ltlgame/learner.hpp"
#include "ltlgame/product.hpp"

namespace ltlgame {

struct RunConfig {
  // [game]: exactly one of game_file and grid_file.
  std::string game_file;
  std::string grid_file;
  LabelConvention convention = LabelConvention::kSource;
  // [automaton]
  std::string hoa_file;
  std::string formula;
  std::size_t max_stem = 3;
  std::size_t max_loop = 3;
  // [prm]
  double epsilon = 0.01;
  // [learn]
  LearnSchedule schedule;
  // [output]
  std::string out_dir = "out";
  std::string strategy_file;  // input for render and simulate
  bool svg = false;
  std::size_t simulate_steps = 100;
  std::uint64_t enumeration_cap = 10'000'000;
  unsigned threads = 1;

  void validate() const {
    if (!(epsilon > 0.0 && epsilon <= 1.0)) throw ValidationError("epsilon must lie in (0, 1]");
    if (!game_file.empty() && !grid_file.empty())
      throw ValidationError("give either a game file or a grid file, not both");
    schedule.validate();
    if (threads == 0) throw ValidationError("threads must be positive");
  }
  bool has_game() const { return !game_file.empty() || !grid_file.empty(); }
};

namespace detail {

template <typename T>
T parse_number(const std::string& key, const std::string& v) {
  T out{};
  const auto* end = v.data() + v.size();
  const auto [ptr, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || ptr != end)
    throw ValidationError("config key " + key + ": '" + v + "' is not a valid number");
  return out;
}

inline bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "yes" || v == "1") return true;
  if (v == "false" || v == "no" || v == "0") return false;
  throw ValidationError("config key " + key + ": '" + v + "' is not a boolean");
}

inline std::string trimmed(std::string_view s) { return std::string(trim(s)); }

}  // namespace detail

// Values keyed by "section.key"; paths already resolved.
using ConfigValues = std::map<std::string, std::string>;

inline const std::set<std::string>& path_keys() {
  static const std::set<std::string> keys = {"game.game", "game.grid", "automaton.hoa",
                                             "output.strategy"};
  return keys;
}

inline ConfigValues parse_config_text(std::string_view text, const std::filesystem::path& base = {}) {
  static const std::set<std::string> sections = {"game", "automaton", "prm", "learn", "output"};
  ConfigValues out;
  std::string section;
  std::size_t line_no = 0;
  auto fail = [&](const std::string& what) {
    return ParseError("config line " + std::to_string(line_no) + ": " + what);
  };
  std::istringstream in{std::string(text)};
  for (std::string raw; std::getline(in, raw);) {
    ++line_no;
    const auto cut = raw.find_first_of("#;");
    const std::string line = detail::trimmed(cut == std::string::npos ? raw : raw.substr(0, cut));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw fail("unterminated section header");
      section = detail::trimmed(line.substr(1, line.size() - 2));
      if (!sections.count(section)) throw fail("unknown section [" + section + "]");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw fail("expected key = value");
    if (section.empty()) throw fail("key outside a section");
    const std::string key = section + "." + detail::trimmed(line.substr(0, eq));
    std::string value = detail::trimmed(line.substr(eq + 1));
    if (path_keys().count(key) && !base.empty() && !value.empty() &&
        std::filesystem::path(value).is_relative())
      value = (base / value).lexically_normal().string();
    out[key] = value;
  }
  return out;
}

inline ConfigValues load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str(), std::filesystem::path(path).parent_path());
}

// Applies `section.key=value` overrides on top of file values.
inline void apply_overrides(ConfigValues& values, const std::vector<std::string>& overrides) {
  for (const auto& o : overrides) {
    const auto eq = o.find('=');
    const auto dot = o.find('.');
    if (eq == std::string::npos || dot == std::string::npos || dot > eq)
      throw ValidationError("override '" + o + "' is not of the form section.key=value");
    values[detail::trimmed(o.substr(0, eq))] = detail::trimmed(o.substr(eq + 1));
  }
}

inline RunConfig make_run_config(const ConfigValues& values) {
  RunConfig c;
  auto& s = c.schedule;
  for (const auto& [key, v] : values) {
    using detail::parse_number;
    if (key == "game.game") c.game_file = v;
    else if (key == "game.grid") c.grid_file = v;
    else if (key == "game.label_convention") {
      if (v != "source" && v != "target") throw ValidationError("label_convention must be source or target");
      c.convention = v == "source" ? LabelConvention::kSource : LabelConvention::kTarget;
    } else if (key == "automaton.hoa") c.hoa_file = v;
    else if (key == "automaton.formula") c.formula = v;
    else if (key == "automaton.max_stem") c.max_stem = parse_number<std::size_t>(key, v);
    else if (key == "automaton.max_loop") c.max_loop = parse_number<std::size_t>(key, v);
    else if (key == "prm.epsilon") c.epsilon = parse_number<double>(key, v);
    else if (key == "learn.episodes") s.episodes = parse_number<std::size_t>(key, v);
    else if (key == "learn.steps") s.steps = parse_number<std::size_t>(key, v);
    else if (key == "learn.alpha_start") s.alpha_start = parse_number<double>(key, v);
    else if (key == "learn.alpha_end") s.alpha_end = parse_number<double>(key, v);
    else if (key == "learn.explore_start") s.explore_start = parse_number<double>(key, v);
    else if (key == "learn.explore_end") s.explore_end = parse_number<double>(key, v);
    else if (key == "learn.random_start_episodes") s.random_start_episodes = parse_number<std::size_t>(key, v);
    else if (key == "learn.seed") s.seed = parse_number<std::uint64_t>(key, v);
    else if (key == "learn.decay") {
      if (v != "linear" && v != "exponential") throw ValidationError("decay must be linear or exponential");
      s.decay = v == "linear" ? Decay::kLinear : Decay::kExponential;
    } else if (key == "learn.decay_fraction") s.decay_fraction = parse_number<double>(key, v);
    else if (key == "learn.curve_interval") s.curve_interval = parse_number<std::size_t>(key, v);
    else if (key == "output.dir") c.out_dir = v;
    else if (key == "output.strategy") c.strategy_file = v;
    else if (key == "output.svg") c.svg = detail::parse_bool(key, v);
    else if (key == "output.simulate_steps") c.simulate_steps = parse_number<std::size_t>(key, v);
    else if (key == "output.enumeration_cap") c.enumeration_cap = parse_number<std::uint64_t>(key, v);
    else if (key == "output.threads") c.threads = parse_number<unsigned>(key, v);
    else throw ValidationError("unknown config key " + key);
  }
  c.validate();
  return c;
}

}  // namespace ltlgame
