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

// Command-line front end. Exit codes: 0 success, 1 usage or I/O error,
// 2 verification failure, 3 resource cap exceeded.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <thread>

#include "ltlgame.hpp"

namespace fs = std::filesystem;
using namespace ltlgame;
using ltlgame::detail::format_double;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitVerification = 2;
constexpr int kExitCap = 3;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& dir, const std::string& name, const std::string& content) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
  std::ofstream out(dir / name, std::ios::binary);
  if (!out || !(out << content)) throw IoError("cannot write " + (dir / name).string());
}

struct Inputs {
  StochasticGame game;
  std::optional<GridGame> grid;
  Dpa dpa;
};

Inputs load_inputs(const RunConfig& c, bool need_automaton = true) {
  if (!c.has_game()) throw ValidationError("no game given; set game.game or game.grid");
  Inputs in;
  if (!c.grid_file.empty()) {
    in.grid = build_gridworld(parse_grid_spec(read_file(c.grid_file)));
    in.game = in.grid->game;
  } else {
    in.game = load_game(read_file(c.game_file));
  }
  if (!c.hoa_file.empty())
    in.dpa = parse_hoa(read_file(c.hoa_file));
  else if (need_automaton)
    throw ValidationError("no automaton given; set automaton.hoa");
  else
    in.dpa = universal_dpa(in.game.ap);
  return in;
}

// Settings shared by every subcommand; flags override the config file.
struct CommonFlags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string game, grid, automaton, formula, strategy;
  std::optional<double> epsilon;
  std::vector<std::string> overrides;

  void attach(CLI::App* app) {
    app->add_option("--config", config, "Config file with [game] [automaton] [prm] [learn] [output]");
    app->add_option("--seed", seed, "Random seed");
    app->add_option("--out", out, "Output directory");
    app->add_option("--game", game, "Explicit game file");
    app->add_option("--grid", grid, "Grid specification file");
    app->add_option("--automaton", automaton, "Parity automaton in HOA format");
    app->add_option("--formula", formula, "LTL formula");
    app->add_option("--strategy", strategy, "Controller strategy file");
    app->add_option("--epsilon", epsilon, "Reward machine parameter in (0, 1]");
    app->add_option("--set", overrides, "Override a config value: section.key=value");
  }

  RunConfig resolve() const {
    ConfigValues values;
    if (!config.empty()) values = load_config_file(config);
    auto put = [&](const char* key, const std::string& v) {
      if (!v.empty()) values[key] = v;
    };
    apply_overrides(values, overrides);
    if (!game.empty()) {
      values.erase("game.grid");
      values["game.game"] = game;
    }
    if (!grid.empty()) {
      values.erase("game.game");
      values["game.grid"] = grid;
    }
    put("automaton.hoa", automaton);
    put("automaton.formula", formula);
    put("output.strategy", strategy);
    put("output.dir", out);
    if (seed) values["learn.seed"] = std::to_string(*seed);
    if (epsilon) values["prm.epsilon"] = format_double(*epsilon);
    return make_run_config(values);
  }
};

int cmd_check_automaton(const RunConfig& c) {
  if (c.hoa_file.empty() || c.formula.empty())
    throw ValidationError("check-automaton needs automaton.hoa and automaton.formula");
  const Dpa d = parse_hoa(read_file(c.hoa_file));
  const Formula f = parse_ltl(c.formula);
  EquivalenceOptions opt;
  opt.max_stem = c.max_stem;
  opt.max_loop = c.max_loop;
  const auto r = check_equivalence_bounded(d, f, opt);
  std::ostringstream os;
  os << "automaton " << c.hoa_file << "\nformula " << to_string(f) << "\nbounds stem<=" << c.max_stem
     << " loop<=" << c.max_loop << "\nlassos " << r.lassos_checked << "\nmismatches "
     << r.mismatch_count << "\nresult " << (r.pass() ? "pass" : "fail") << '\n';
  for (const auto& m : r.counterexamples)
    os << "counterexample " << m.word.format(d.ap()) << " automaton="
       << (m.automaton_accepts ? "accepts" : "rejects") << " formula="
       << (m.formula_holds ? "holds" : "fails") << " multiplicity=" << m.multiplicity << '\n';
  if (r.truncated) os << "counterexamples truncated\n";
  write_file(c.out_dir, "check_automaton.txt", os.str());
  std::cout << os.str();
  return r.pass() ? kExitOk : kExitVerification;
}

int cmd_solve(const RunConfig& c) {
  const auto in = load_inputs(c);
  const auto p = build_product(in.game, in.dpa, {c.convention});
  ExactOptions opt;
  opt.enumeration_cap = c.enumeration_cap;
  opt.threads = c.threads;
  const auto pairs = count_strategy_pairs(p.graph, c.enumeration_cap);
  if (pairs > c.enumeration_cap) {
    std::cerr << "strategy space exceeds the enumeration cap of " << c.enumeration_cap
              << " pairs; use the learn command instead\n";
    return kExitCap;
  }
  opt.record_outcomes = pairs <= 1'000'000;
  const auto exact = parity_value_exact(p, opt);

  const Prm m(p.k, c.epsilon);
  const auto pg = build_priority(p, m);
  PureStrategyPair lifted;
  for (StateId x = 0; x < pg.size(); ++x) lifted.action.push_back(exact.optimal.action[pg.product_state[x]]);
  const auto induced = induce_strategy(in.game, in.dpa, m, p, pg, lifted);

  std::ostringstream os;
  os << "value " << format_double(exact.value) << "\npairs " << exact.pairs << '\n';
  write_file(c.out_dir, "value.txt", os.str());
  write_file(c.out_dir, "strategy.txt", write_strategy(induced.controller, in.game));
  write_file(c.out_dir, "adversary.txt", write_strategy(induced.adversary, in.game));
  if (opt.record_outcomes) write_file(c.out_dir, "pairs.csv", pair_outcomes_csv(exact.outcomes));
  std::cout << os.str();
  return kExitOk;
}

struct LearnRun {
  std::uint64_t seed;
  double value;
};

LearnRun learn_one(const RunConfig& c, const Inputs& in, std::uint64_t seed, const fs::path& dir) {
  const auto p = build_product(in.game, in.dpa, {c.convention});
  const Prm m(p.k, c.epsilon);
  const auto pg = build_priority(p, m);
  LearnSchedule sch = c.schedule;
  sch.seed = seed;
  const auto trained = minimax_q_train(pg, sch);
  const auto induced = induce_strategy(in.game, in.dpa, m, p, pg, greedy_strategy(pg.graph, trained.q));
  const auto ev = evaluate_worst_case(in.game, in.dpa, m, induced.controller);

  write_file(dir, "qtable.csv", qtable_csv(pg.graph, trained.q, priority_state_names(pg, p, in.game)));
  write_file(dir, "strategy.txt", write_strategy(induced.controller, in.game));
  write_file(dir, "adversary.txt", write_strategy(induced.adversary, in.game));
  if (sch.curve_interval > 0) write_file(dir, "curve.csv", curve_csv(trained.curve));
  std::ostringstream os;
  os << "seed " << seed << "\nepsilon " << format_double(c.epsilon) << "\nepisodes " << sch.episodes
     << "\nsteps " << sch.steps << "\nworst_case_value " << format_double(ev.value) << '\n';
  write_file(dir, "evaluation.txt", os.str());
  return {seed, ev.value};
}

int cmd_learn(const RunConfig& c, unsigned parallel_seeds) {
  const auto in = load_inputs(c);
  if (parallel_seeds <= 1) {
    const auto r = learn_one(c, in, c.schedule.seed, c.out_dir);
    std::cout << "seed " << r.seed << " worst_case_value " << format_double(r.value) << '\n';
    return kExitOk;
  }
  std::vector<LearnRun> runs(parallel_seeds);
  std::vector<std::exception_ptr> errors(parallel_seeds);
  std::vector<std::thread> workers;
  for (unsigned i = 0; i < parallel_seeds; ++i)
    workers.emplace_back([&, i] {
      const std::uint64_t seed = c.schedule.seed + i;
      try {
        runs[i] = learn_one(c, in, seed, fs::path(c.out_dir) / ("seed-" + std::to_string(seed)));
      } catch (...) {
        errors[i] = std::current_exception();
      }
    });
  for (auto& w : workers) w.join();
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  std::ostringstream os;
  os << "seed,worst_case_value\n";
  for (const auto& r : runs) os << r.seed << ',' << format_double(r.value) << '\n';
  write_file(c.out_dir, "seeds.csv", os.str());
  std::cout << os.str();
  return kExitOk;
}

// The controller from the strategy file, or the first enabled action
// everywhere when none is given.
FiniteMemoryStrategy load_controller(const RunConfig& c, const Inputs& in, const Prm& m,
                                     const ProductGame& p, const PriorityGame& pg) {
  if (!c.strategy_file.empty()) return read_strategy(read_file(c.strategy_file), in.game);
  return induce_strategy(in.game, in.dpa, m, p, pg, first_action_pair(pg.graph)).controller;
}

int cmd_render(const RunConfig& c) {
  const auto in = load_inputs(c, /*need_automaton=*/false);
  if (!in.grid) throw ValidationError("render needs a grid game (game.grid)");
  const auto p = build_product(in.game, in.dpa, {c.convention});
  const Prm m(p.k, c.epsilon);
  const auto pg = build_priority(p, m);
  const auto controller = load_controller(c, in, m, p, pg);
  const auto ev = evaluate_worst_case(in.game, in.dpa, m, controller);
  std::set<Cell> recurrent;
  for (const auto& b : worst_case_bscc_cells(ev, *in.grid)) recurrent.insert(b.begin(), b.end());
  const auto ascii = render_ascii(*in.grid, recurrent);
  write_file(c.out_dir, "render.txt", ascii);
  if (c.svg) write_file(c.out_dir, "render.svg", render_svg(*in.grid, recurrent));
  std::cout << ascii << "worst_case_value " << format_double(ev.value) << '\n';
  return kExitOk;
}

int cmd_simulate(const RunConfig& c) {
  const auto in = load_inputs(c);
  const auto p = build_product(in.game, in.dpa, {c.convention});
  const Prm m(p.k, c.epsilon);
  const auto pg = build_priority(p, m);
  const auto controller = load_controller(c, in, m, p, pg);
  const auto ev = evaluate_worst_case(in.game, in.dpa, m, controller);
  const auto adversary = worst_case_adversary(ev, controller);
  Rng rng(c.schedule.seed);
  const auto trace = simulate(in.game, controller, adversary, c.simulate_steps, rng);
  std::ostringstream os;
  os << "step,state,action,mode,labels\n";
  for (std::size_t t = 0; t < trace.states.size(); ++t) {
    os << t << ',' << in.game.state_names[trace.states[t]] << ','
       << (t < trace.actions.size() ? in.game.graph.action_names[trace.actions[t]] : "") << ','
       << mode_label(controller.modes[trace.modes[t]]) << ",\"" << in.game.ap.format(trace.labels[t])
       << "\"\n";
  }
  write_file(c.out_dir, "trace.csv", os.str());
  std::cout << "steps " << trace.states.size() << " worst_case_value " << format_double(ev.value)
            << '\n';
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Learning strategies for LTL objectives in stochastic games"};
  app.require_subcommand(1);
  CommonFlags flags;
  unsigned parallel_seeds = 1;

  auto* check = app.add_subcommand("check-automaton", "Compare an automaton with a formula on bounded lassos");
  auto* solve = app.add_subcommand("solve", "Exact maximin satisfaction probability by enumeration");
  auto* learn = app.add_subcommand("learn", "Minimax-Q on the priority game, then exact evaluation");
  auto* render = app.add_subcommand("render", "Grid rendering with the recurrent cells highlighted");
  auto* sim = app.add_subcommand("simulate", "Roll out a strategy against the worst-case adversary");
  for (auto* sub : {check, solve, learn, render, sim}) flags.attach(sub);
  learn->add_option("--parallel-seeds", parallel_seeds, "Train this many consecutive seeds concurrently")
      ->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    const RunConfig c = flags.resolve();
    if (check->parsed()) return cmd_check_automaton(c);
    if (solve->parsed()) return cmd_solve(c);
    if (learn->parsed()) return cmd_learn(c, parallel_seeds);
    if (render->parsed()) return cmd_render(c);
    return cmd_simulate(c);
  } catch (const CapExceeded& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitCap;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}
