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

// Exact analysis of games under fixed strategies: induced Markov chains,
// bottom strongly connected components, absorption probabilities, the
// enumeration oracle for parity values, and minimax value iteration on
// priority games.

#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "ltlgame/common.hpp"
#include "ltlgame/game.hpp"
#include "ltlgame/priority.hpp"
#include "ltlgame/product.hpp"

namespace ltlgame {

inline constexpr double kSolveTolerance = 1e-12;
inline constexpr std::size_t kDenseSolveLimit = 256;

struct MarkovChain {
  std::vector<std::vector<Outcome>> trans;
  StateId initial = 0;
  std::vector<Color> color;    // optional
  std::vector<double> reward;  // optional

  std::size_t size() const { return trans.size(); }

  std::vector<bool> reachable() const {
    std::vector<bool> seen(size(), false);
    std::vector<StateId> stack{initial};
    seen[initial] = true;
    while (!stack.empty()) {
      const StateId s = stack.back();
      stack.pop_back();
      for (const auto& o : trans[s])
        if (!seen[o.target]) {
          seen[o.target] = true;
          stack.push_back(o.target);
        }
    }
    return seen;
  }
};

// One action per state; controller entries on controller states and
// adversary entries on adversary states.
struct PureStrategyPair {
  std::vector<ActionId> action;

  void validate(const GameGraph& g) const {
    if (action.size() != g.size()) throw ValidationError("strategy pair does not cover every state");
    for (StateId s = 0; s < g.size(); ++s)
      if (!g.choice_index(s, action[s]))
        throw ValidationError("strategy picks a disabled action at state " + std::to_string(s));
  }
};

// Every state takes its first (lowest) enabled action.
inline PureStrategyPair first_action_pair(const GameGraph& g) {
  PureStrategyPair p;
  for (StateId s = 0; s < g.size(); ++s) p.action.push_back(g.choices[s].front().action);
  return p;
}

// Controller entries from `controller`, adversary entries from `adversary`.
inline PureStrategyPair combine(const GameGraph& g, const PureStrategyPair& controller,
                                const PureStrategyPair& adversary) {
  PureStrategyPair p;
  for (StateId s = 0; s < g.size(); ++s)
    p.action.push_back(g.owner[s] == Player::kController ? controller.action.at(s)
                                                         : adversary.action.at(s));
  return p;
}

inline MarkovChain induce_mc(const GameGraph& g, const PureStrategyPair& pair) {
  if (pair.action.size() != g.size()) throw ValidationError("strategy pair leaves states unmapped");
  MarkovChain mc;
  mc.initial = g.initial;
  mc.trans.resize(g.size());
  for (StateId s = 0; s < g.size(); ++s) {
    const auto idx = g.choice_index(s, pair.action[s]);
    if (!idx) throw ValidationError("strategy picks a disabled action at state " + std::to_string(s));
    mc.trans[s] = g.choices[s][*idx].outcomes;
  }
  return mc;
}

inline MarkovChain induce_mc(const ProductGame& p, const PureStrategyPair& pair) {
  auto mc = induce_mc(p.graph, pair);
  mc.color = p.color;
  return mc;
}

inline MarkovChain induce_mc(const PriorityGame& pg, const PureStrategyPair& pair) {
  auto mc = induce_mc(pg.graph, pair);
  mc.reward = pg.reward;
  return mc;
}

namespace detail {

// Iterative Tarjan over the nodes with active[v] set. Returns the component
// id of every node (-1 when inactive); ids are in reverse topological order.
inline std::vector<int> tarjan(const std::vector<std::vector<StateId>>& adj,
                               const std::vector<char>& active, int& num_components) {
  const std::size_t n = adj.size();
  std::vector<int> comp(n, -1), index(n, -1), low(n, 0);
  std::vector<char> on_stack(n, 0);
  std::vector<StateId> stack;
  std::vector<std::pair<StateId, std::size_t>> call;
  int counter = 0;
  num_components = 0;
  for (StateId root = 0; root < n; ++root) {
    if (!active[root] || index[root] >= 0) continue;
    call.emplace_back(root, 0);
    while (!call.empty()) {
      auto& [v, edge] = call.back();
      if (edge == 0 && index[v] < 0) {
        index[v] = low[v] = counter++;
        stack.push_back(v);
        on_stack[v] = 1;
      }
      bool descended = false;
      while (edge < adj[v].size()) {
        const StateId w = adj[v][edge++];
        if (!active[w]) continue;
        if (index[w] < 0) {
          call.emplace_back(w, 0);
          descended = true;
          break;
        }
        if (on_stack[w]) low[v] = std::min(low[v], index[w]);
      }
      if (descended) continue;
      const StateId done = v;
      if (low[done] == index[done]) {
        StateId w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = 0;
          comp[w] = num_components;
        } while (w != done);
        ++num_components;
      }
      call.pop_back();
      if (!call.empty()) {
        const StateId parent = call.back().first;
        low[parent] = std::min(low[parent], low[done]);
      }
    }
  }
  return comp;
}

inline std::vector<std::vector<StateId>> adjacency(const MarkovChain& mc) {
  std::vector<std::vector<StateId>> adj(mc.size());
  for (StateId s = 0; s < mc.size(); ++s)
    for (const auto& o : mc.trans[s]) adj[s].push_back(o.target);
  return adj;
}

// Solves x = A x + b where A is substochastic with I - A nonsingular.
inline std::vector<double> solve_fixed_point(std::size_t n,
                                             const std::vector<Eigen::Triplet<double>>& a,
                                             const std::vector<double>& b) {
  if (n == 0) return {};
  Eigen::VectorXd rhs(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) rhs[static_cast<Eigen::Index>(i)] = b[i];
  Eigen::VectorXd x;
  if (n <= kDenseSolveLimit) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (const auto& t : a) m(t.row(), t.col()) -= t.value();
    x = m.partialPivLu().solve(rhs);
  } else {
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(a.size() + n);
    for (const auto& t : a) trips.emplace_back(t.row(), t.col(), -t.value());
    for (std::size_t i = 0; i < n; ++i)
      trips.emplace_back(static_cast<int>(i), static_cast<int>(i), 1.0);
    Eigen::SparseMatrix<double> m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    m.setFromTriplets(trips.begin(), trips.end());
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    lu.compute(m);
    if (lu.info() != Eigen::Success) throw Error("sparse factorization failed: singular system");
    x = lu.solve(rhs);
    if (lu.info() != Eigen::Success) throw Error("sparse solve failed");
  }
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double v = x[static_cast<Eigen::Index>(i)];
    if (!std::isfinite(v)) throw Error("linear solve produced a non-finite value");
    out[i] = v;
  }
  return out;
}

}  // namespace detail

// Closed strongly connected components, each sorted, ordered by least state.
inline std::vector<std::vector<StateId>> bsccs(const MarkovChain& mc) {
  const auto adj = detail::adjacency(mc);
  int n_comp = 0;
  const auto comp = detail::tarjan(adj, std::vector<char>(mc.size(), 1), n_comp);
  std::vector<char> bottom(static_cast<std::size_t>(n_comp), 1);
  for (StateId s = 0; s < mc.size(); ++s)
    for (StateId t : adj[s])
      if (comp[t] != comp[s]) bottom[static_cast<std::size_t>(comp[s])] = 0;
  std::vector<std::vector<StateId>> groups(static_cast<std::size_t>(n_comp));
  for (StateId s = 0; s < mc.size(); ++s) groups[static_cast<std::size_t>(comp[s])].push_back(s);
  std::vector<std::vector<StateId>> out;
  for (int c = 0; c < n_comp; ++c)
    if (bottom[static_cast<std::size_t>(c)]) out.push_back(groups[static_cast<std::size_t>(c)]);
  std::sort(out.begin(), out.end());
  return out;
}

enum class BsccClass { kAccepting, kRejecting };

inline BsccClass classify_bscc(const std::vector<Color>& color, const std::vector<StateId>& bscc) {
  Color best = 0;
  for (StateId s : bscc) best = std::max(best, color.at(s));
  return best % 2 == 0 ? BsccClass::kAccepting : BsccClass::kRejecting;
}

inline BsccClass classify_bscc(const MarkovChain& mc, const std::vector<StateId>& bscc) {
  return classify_bscc(mc.color, bscc);
}

// Probability of eventually reaching `target` from every state.
inline std::vector<double> reach_prob(const MarkovChain& mc, const std::vector<bool>& target) {
  const std::size_t n = mc.size();
  // States that can reach the target.
  std::vector<std::vector<StateId>> pred(n);
  for (StateId s = 0; s < n; ++s)
    for (const auto& o : mc.trans[s]) pred[o.target].push_back(s);
  std::vector<bool> can(n, false);
  std::vector<StateId> stack;
  for (StateId s = 0; s < n; ++s)
    if (target[s]) {
      can[s] = true;
      stack.push_back(s);
    }
  while (!stack.empty()) {
    const StateId s = stack.back();
    stack.pop_back();
    for (StateId p : pred[s])
      if (!can[p]) {
        can[p] = true;
        stack.push_back(p);
      }
  }
  std::vector<double> out(n, 0.0);
  std::vector<std::size_t> slot(n, static_cast<std::size_t>(-1));
  std::vector<StateId> unknown;
  for (StateId s = 0; s < n; ++s) {
    if (target[s])
      out[s] = 1.0;
    else if (can[s]) {
      slot[s] = unknown.size();
      unknown.push_back(s);
    }
  }
  std::vector<Eigen::Triplet<double>> a;
  std::vector<double> b(unknown.size(), 0.0);
  for (std::size_t i = 0; i < unknown.size(); ++i)
    for (const auto& o : mc.trans[unknown[i]]) {
      if (target[o.target])
        b[i] += o.prob;
      else if (can[o.target])
        a.emplace_back(static_cast<int>(i), static_cast<int>(slot[o.target]), o.prob);
    }
  const auto x = detail::solve_fixed_point(unknown.size(), a, b);
  for (std::size_t i = 0; i < unknown.size(); ++i) out[unknown[i]] = std::clamp(x[i], 0.0, 1.0);
  return out;
}

// Union of the accepting BSCCs of a colored chain.
inline std::vector<bool> accepting_bscc_union(const MarkovChain& mc) {
  std::vector<bool> in(mc.size(), false);
  for (const auto& b : bsccs(mc))
    if (classify_bscc(mc, b) == BsccClass::kAccepting)
      for (StateId s : b) in[s] = true;
  return in;
}

// Probability of the parity condition from every state of a colored chain.
inline std::vector<double> parity_probability(const MarkovChain& mc) {
  if (mc.color.size() != mc.size()) throw ValidationError("chain carries no colors");
  return reach_prob(mc, accepting_bscc_union(mc));
}

// ---------------------------------------------------------------------------
// Enumeration oracle

struct PairOutcome {
  std::uint64_t controller_index;
  std::uint64_t adversary_index;
  double value;
};

struct ExactOptions {
  std::uint64_t enumeration_cap = 10'000'000;
  unsigned threads = 1;
  bool record_outcomes = false;
};

struct ExactParityValue {
  double value = 0;
  PureStrategyPair optimal;  // the maximizing controller with its best-responding adversary
  std::uint64_t pairs = 0;
  std::vector<PairOutcome> outcomes;  // when recorded, in enumeration order
};

namespace detail {

// Mixed-radix enumeration of one player's pure memoryless maps.
struct MapSpace {
  std::vector<StateId> states;  // states with a real choice
  std::vector<std::uint64_t> radix;
  std::uint64_t count = 1;

  MapSpace(const GameGraph& g, Player p) {
    for (StateId s = 0; s < g.size(); ++s)
      if (g.owner[s] == p && g.choices[s].size() > 1) {
        states.push_back(s);
        radix.push_back(g.choices[s].size());
      }
  }

  // Multiplies into count, saturating at cap + 1.
  void size_with_cap(std::uint64_t cap) {
    count = 1;
    for (auto r : radix) {
      if (count > (cap + 1) / r + 1) {
        count = cap + 1;
        return;
      }
      count = std::min(count * r, cap + 1);
    }
  }

  void apply(const GameGraph& g, std::uint64_t index, PureStrategyPair& pair) const {
    for (std::size_t i = 0; i < states.size(); ++i) {
      pair.action[states[i]] = g.choices[states[i]][index % radix[i]].action;
      index /= radix[i];
    }
  }
};

// Parity probability at the initial state, on the part of the chain
// reachable from it.
inline double parity_at_initial(const GameGraph& g, const std::vector<Color>& color,
                                const PureStrategyPair& pair) {
  std::vector<StateId> local(g.size(), static_cast<StateId>(-1));
  std::vector<StateId> order{g.initial};
  local[g.initial] = 0;
  MarkovChain mc;
  for (std::size_t i = 0; i < order.size(); ++i) {
    const StateId s = order[i];
    const auto& outs = g.choices[s][*g.choice_index(s, pair.action[s])].outcomes;
    std::vector<Outcome> row;
    for (const auto& o : outs) {
      if (local[o.target] == static_cast<StateId>(-1)) {
        local[o.target] = order.size();
        order.push_back(o.target);
      }
      row.push_back({local[o.target], o.prob});
    }
    mc.trans.push_back(std::move(row));
    mc.color.push_back(color[s]);
  }
  mc.initial = 0;
  return parity_probability(mc)[0];
}

}  // namespace detail

inline std::uint64_t count_strategy_pairs(const GameGraph& g, std::uint64_t cap) {
  detail::MapSpace c(g, Player::kController), a(g, Player::kAdversary);
  c.size_with_cap(cap);
  a.size_with_cap(cap);
  if (c.count > cap || a.count > cap || c.count > cap / a.count) return cap + 1;
  return c.count * a.count;
}

// max over controller maps of min over adversary maps of the parity
// probability at the initial state, over pure memoryless pairs.
inline ExactParityValue parity_value_exact(const GameGraph& g, const std::vector<Color>& color,
                                           const ExactOptions& opt = {}) {
  detail::MapSpace ctrl(g, Player::kController), adv(g, Player::kAdversary);
  const std::uint64_t pairs = count_strategy_pairs(g, opt.enumeration_cap);
  if (pairs > opt.enumeration_cap)
    throw CapExceeded("exact solve needs more than " + std::to_string(opt.enumeration_cap) +
                      " strategy pairs; use the learner instead");
  ctrl.size_with_cap(opt.enumeration_cap);
  adv.size_with_cap(opt.enumeration_cap);

  struct Best {
    double value = -1;
    std::uint64_t ctrl = 0, adv = 0;
    std::vector<PairOutcome> outcomes;
  };
  auto run = [&](std::uint64_t from, std::uint64_t to, Best& best) {
    PureStrategyPair pair = first_action_pair(g);
    for (std::uint64_t ci = from; ci < to; ++ci) {
      ctrl.apply(g, ci, pair);
      double worst = 2.0;
      std::uint64_t worst_adv = 0;
      for (std::uint64_t ai = 0; ai < adv.count; ++ai) {
        adv.apply(g, ai, pair);
        const double v = detail::parity_at_initial(g, color, pair);
        if (opt.record_outcomes) best.outcomes.push_back({ci, ai, v});
        if (v < worst) {
          worst = v;
          worst_adv = ai;
        }
        // This controller map cannot beat the incumbent any more.
        if (!opt.record_outcomes && worst <= best.value) break;
      }
      if (worst > best.value) {
        best.value = worst;
        best.ctrl = ci;
        best.adv = worst_adv;
      }
    }
  };

  const unsigned threads = std::max(1U, std::min<unsigned>(opt.threads, static_cast<unsigned>(ctrl.count)));
  std::vector<Best> parts(threads);
  if (threads == 1) {
    run(0, ctrl.count, parts[0]);
  } else {
    std::vector<std::thread> pool;
    const std::uint64_t chunk = (ctrl.count + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t)
      pool.emplace_back(run, std::min<std::uint64_t>(ctrl.count, t * chunk),
                        std::min<std::uint64_t>(ctrl.count, (t + 1) * chunk), std::ref(parts[t]));
    for (auto& th : pool) th.join();
  }

  ExactParityValue out;
  const Best* best = nullptr;
  for (const auto& p : parts) {
    if (p.value < 0) continue;
    if (!best || p.value > best->value) best = &p;
  }
  out.value = best->value;
  out.optimal = first_action_pair(g);
  ctrl.apply(g, best->ctrl, out.optimal);
  // Recompute the best response: pruning may have cut the adversary scan.
  {
    double worst = 2.0;
    PureStrategyPair pair = out.optimal;
    PureStrategyPair best_pair = out.optimal;
    for (std::uint64_t ai = 0; ai < adv.count; ++ai) {
      adv.apply(g, ai, pair);
      const double v = detail::parity_at_initial(g, color, pair);
      if (v < worst) {
        worst = v;
        best_pair = pair;
      }
    }
    out.optimal = best_pair;
    out.value = worst;
  }
  out.pairs = pairs;
  for (auto& p : parts) out.outcomes.insert(out.outcomes.end(), p.outcomes.begin(), p.outcomes.end());
  return out;
}

inline ExactParityValue parity_value_exact(const ProductGame& p, const ExactOptions& opt = {}) {
  return parity_value_exact(p.graph, p.color, opt);
}

// Min over adversary maps for a fixed controller map; exact by enumeration.
inline ExactParityValue worst_case_exact(const GameGraph& g, const std::vector<Color>& color,
                                         const PureStrategyPair& controller,
                                         std::uint64_t cap = 10'000'000) {
  detail::MapSpace adv(g, Player::kAdversary);
  adv.size_with_cap(cap);
  if (adv.count > cap) throw CapExceeded("too many adversary maps to enumerate");
  ExactParityValue out;
  out.value = 2.0;
  PureStrategyPair pair = controller;
  for (std::uint64_t ai = 0; ai < adv.count; ++ai) {
    adv.apply(g, ai, pair);
    const double v = detail::parity_at_initial(g, color, pair);
    if (v < out.value) {
      out.value = v;
      out.optimal = pair;
    }
  }
  out.pairs = adv.count;
  return out;
}

// ---------------------------------------------------------------------------
// Discounted priority games

struct DiscountedSolution {
  std::vector<double> value;
  PureStrategyPair greedy;
  std::size_t iterations = 0;
};

namespace detail {

inline double expected(const std::vector<Outcome>& outs, const std::vector<double>& v) {
  double sum = 0;
  for (const auto& o : outs) sum += o.prob * v[o.target];
  return sum;
}

// Best choice index at s under v: max for the controller, min for the
// adversary, ties to the lowest action.
inline std::size_t greedy_choice(const GameGraph& g, StateId s, const std::vector<double>& v) {
  const bool maximize = g.owner[s] == Player::kController;
  std::size_t best = 0;
  double best_v = expected(g.choices[s][0].outcomes, v);
  for (std::size_t i = 1; i < g.choices[s].size(); ++i) {
    const double x = expected(g.choices[s][i].outcomes, v);
    if (maximize ? x > best_v : x < best_v) {
      best = i;
      best_v = x;
    }
  }
  return best;
}

}  // namespace detail

// v <- R + (1 - eps) * opt_a sum_s' P(s, a, s') v(s') until the sup-norm
// update drops below tol * eps.
inline DiscountedSolution discounted_value_vi(const PriorityGame& pg, double tol,
                                              std::size_t max_iterations = 100'000'000) {
  if (!(tol > 0)) throw ValidationError("tolerance must be positive");
  const GameGraph& g = pg.graph;
  const double gamma = pg.discount();
  DiscountedSolution sol;
  std::vector<double> v(pg.size(), 0.0), next(pg.size());
  while (sol.iterations < max_iterations) {
    double delta = 0;
    for (StateId s = 0; s < g.size(); ++s) {
      const bool maximize = g.owner[s] == Player::kController;
      double best = detail::expected(g.choices[s][0].outcomes, v);
      for (std::size_t i = 1; i < g.choices[s].size(); ++i) {
        const double x = detail::expected(g.choices[s][i].outcomes, v);
        best = maximize ? std::max(best, x) : std::min(best, x);
      }
      next[s] = pg.reward[s] + gamma * best;
      delta = std::max(delta, std::abs(next[s] - v[s]));
    }
    v.swap(next);
    ++sol.iterations;
    if (delta < tol * pg.epsilon) break;
  }
  sol.greedy.action.resize(g.size());
  for (StateId s = 0; s < g.size(); ++s)
    sol.greedy.action[s] = g.choices[s][detail::greedy_choice(g, s, v)].action;
  sol.value = std::move(v);
  return sol;
}

// Exact discounted value of a fixed pair: v = R + (1 - eps) P v.
inline std::vector<double> discounted_value_of_pair(const PriorityGame& pg,
                                                    const PureStrategyPair& pair) {
  const auto mc = induce_mc(pg.graph, pair);
  const double gamma = pg.discount();
  std::vector<Eigen::Triplet<double>> a;
  for (StateId s = 0; s < mc.size(); ++s)
    for (const auto& o : mc.trans[s])
      a.emplace_back(static_cast<int>(s), static_cast<int>(o.target), gamma * o.prob);
  return detail::solve_fixed_point(mc.size(), a, pg.reward);
}

// ---------------------------------------------------------------------------
// BSCC correspondence between a priority chain and its product chain

struct BijectionResult {
  bool ok = true;
  std::string witness;
};

// `projection` maps each priority-chain state to its product-chain state.
// Both sides are restricted to the BSCCs reachable from their initial state.
inline BijectionResult bscc_bijection_check(const MarkovChain& priority_mc,
                                            const MarkovChain& product_mc,
                                            const std::vector<StateId>& projection) {
  auto reachable_bsccs = [](const MarkovChain& mc) {
    const auto reach = mc.reachable();
    std::vector<std::vector<StateId>> out;
    for (auto& b : bsccs(mc))
      if (reach[b.front()]) out.push_back(std::move(b));
    return out;
  };
  std::map<std::vector<StateId>, std::size_t> projected;
  for (const auto& b : reachable_bsccs(priority_mc)) {
    std::vector<StateId> proj;
    for (StateId s : b) proj.push_back(projection.at(s));
    std::sort(proj.begin(), proj.end());
    proj.erase(std::unique(proj.begin(), proj.end()), proj.end());
    ++projected[proj];
  }
  const auto product = reachable_bsccs(product_mc);
  auto show = [](const std::vector<StateId>& v) {
    std::ostringstream os;
    os << "{";
    for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
    os << "}";
    return os.str();
  };
  BijectionResult r;
  for (const auto& [set, count] : projected) {
    if (count > 1) {
      r.ok = false;
      r.witness = "product BSCC " + show(set) + " is the image of " + std::to_string(count) +
                  " priority BSCCs";
      return r;
    }
    if (!std::binary_search(product.begin(), product.end(), set)) {
      r.ok = false;
      r.witness = "priority BSCC projects to " + show(set) + ", which is not a product BSCC";
      return r;
    }
  }
  for (const auto& b : product)
    if (!projected.count(b)) {
      r.ok = false;
      r.witness = "product BSCC " + show(b) + " has no priority BSCC above it";
      return r;
    }
  return r;
}

// ---------------------------------------------------------------------------
// One-player parity: a GameGraph read as an MDP in which one player resolves
// every choice.

struct MdpSolution {
  std::vector<double> value;
  std::vector<std::size_t> policy;  // choice index per state
};

namespace detail {

// Maximal end components of the sub-MDP on `allowed`. Returns the component
// id per state (-1 outside every MEC) and, per state, the choices that stay
// inside its component.
inline std::vector<int> maximal_end_components(const GameGraph& g, std::vector<char> allowed,
                                               std::vector<std::vector<char>>& stay,
                                               int& num_components) {
  const std::size_t n = g.size();
  stay.assign(n, {});
  for (StateId s = 0; s < n; ++s) {
    stay[s].assign(g.choices[s].size(), 0);
    if (!allowed[s]) continue;
    for (std::size_t i = 0; i < g.choices[s].size(); ++i) {
      bool inside = true;
      for (const auto& o : g.choices[s][i].outcomes) inside = inside && allowed[o.target];
      stay[s][i] = inside;
    }
  }
  std::vector<int> comp;
  for (;;) {
    std::vector<std::vector<StateId>> adj(n);
    for (StateId s = 0; s < n; ++s)
      if (allowed[s])
        for (std::size_t i = 0; i < g.choices[s].size(); ++i)
          if (stay[s][i])
            for (const auto& o : g.choices[s][i].outcomes) adj[s].push_back(o.target);
    comp = tarjan(adj, allowed, num_components);
    bool changed = false;
    for (StateId s = 0; s < n; ++s) {
      if (!allowed[s]) continue;
      bool any = false;
      for (std::size_t i = 0; i < g.choices[s].size(); ++i) {
        if (!stay[s][i]) continue;
        for (const auto& o : g.choices[s][i].outcomes)
          if (!allowed[o.target] || comp[o.target] != comp[s]) {
            stay[s][i] = 0;
            changed = true;
            break;
          }
        any = any || stay[s][i];
      }
      if (!any) {
        allowed[s] = 0;
        changed = true;
      }
    }
    if (!changed) break;
    // Choices into removed states no longer stay inside.
    for (StateId s = 0; s < n; ++s)
      if (allowed[s])
        for (std::size_t i = 0; i < g.choices[s].size(); ++i)
          if (stay[s][i])
            for (const auto& o : g.choices[s][i].outcomes)
              if (!allowed[o.target]) {
                stay[s][i] = 0;
                break;
              }
  }
  for (StateId s = 0; s < n; ++s)
    if (!allowed[s]) comp[s] = -1;
  return comp;
}

// Exact value of a fixed MDP policy for reaching `target`.
inline std::vector<double> policy_reach(const GameGraph& g, const std::vector<std::size_t>& policy,
                                        const std::vector<bool>& target) {
  MarkovChain mc;
  mc.trans.resize(g.size());
  for (StateId s = 0; s < g.size(); ++s) mc.trans[s] = g.choices[s][policy[s]].outcomes;
  return reach_prob(mc, target);
}

}  // namespace detail

// Maximal probability of reaching `target`, with an optimal memoryless
// policy: value iteration for a starting policy, then policy iteration with
// exact evaluation until no choice improves by more than the tolerance.
inline MdpSolution mdp_max_reach(const GameGraph& g, const std::vector<bool>& target) {
  const std::size_t n = g.size();
  MdpSolution sol;
  std::vector<double> v(n, 0.0);
  for (StateId s = 0; s < n; ++s) v[s] = target[s] ? 1.0 : 0.0;
  for (int it = 0; it < 200; ++it)
    for (StateId s = 0; s < n; ++s) {
      if (target[s]) continue;
      double best = 0;
      for (const auto& c : g.choices[s]) best = std::max(best, detail::expected(c.outcomes, v));
      v[s] = best;
    }
  sol.policy.assign(n, 0);
  auto best_choice = [&](StateId s, const std::vector<double>& val, std::size_t incumbent) {
    std::size_t best = incumbent;
    double best_v = detail::expected(g.choices[s][incumbent].outcomes, val);
    for (std::size_t i = 0; i < g.choices[s].size(); ++i) {
      const double x = detail::expected(g.choices[s][i].outcomes, val);
      if (x > best_v + kSolveTolerance) {
        best = i;
        best_v = x;
      }
    }
    return best;
  };
  for (StateId s = 0; s < n; ++s) sol.policy[s] = best_choice(s, v, 0);
  for (int round = 0; round < 10'000; ++round) {
    sol.value = detail::policy_reach(g, sol.policy, target);
    bool changed = false;
    for (StateId s = 0; s < n; ++s) {
      if (target[s]) continue;
      const std::size_t b = best_choice(s, sol.value, sol.policy[s]);
      if (b != sol.policy[s]) {
        sol.policy[s] = b;
        changed = true;
      }
    }
    if (!changed) return sol;
  }
  throw Error("policy iteration did not converge");
}

// Maximal probability that the largest color seen infinitely often has the
// wanted parity. Inside winning end components the policy heads for the
// component's top color while staying inside; elsewhere it maximizes the
// probability of reaching them.
inline MdpSolution mdp_max_parity(const GameGraph& g, const std::vector<Color>& color,
                                  bool want_even) {
  const std::size_t n = g.size();
  Color top = 0;
  for (Color c : color) top = std::max(top, c);
  std::vector<bool> winning(n, false);
  std::vector<std::size_t> ec_policy(n, 0);
  for (Color c = top; c >= 1; --c) {
    if ((c % 2 == 0) != want_even) continue;
    std::vector<char> allowed(n);
    for (StateId s = 0; s < n; ++s) allowed[s] = color[s] <= c && !winning[s];
    std::vector<std::vector<char>> stay;
    int num = 0;
    const auto comp = detail::maximal_end_components(g, allowed, stay, num);
    std::vector<char> has_top(static_cast<std::size_t>(num), 0);
    for (StateId s = 0; s < n; ++s)
      if (comp[s] >= 0 && color[s] == c) has_top[static_cast<std::size_t>(comp[s])] = 1;
    // Attractor to the top-colored states inside each winning component.
    std::vector<char> done(n, 0);
    std::vector<StateId> members;
    for (StateId s = 0; s < n; ++s) {
      if (comp[s] < 0 || !has_top[static_cast<std::size_t>(comp[s])]) continue;
      members.push_back(s);
      if (color[s] == c) {
        done[s] = 1;
        for (std::size_t i = 0; i < stay[s].size(); ++i)
          if (stay[s][i]) {
            ec_policy[s] = i;
            break;
          }
      }
    }
    for (bool grew = true; grew;) {
      grew = false;
      for (StateId s : members) {
        if (done[s]) continue;
        for (std::size_t i = 0; i < stay[s].size() && !done[s]; ++i) {
          if (!stay[s][i]) continue;
          for (const auto& o : g.choices[s][i].outcomes)
            if (done[o.target] == 1) {
              ec_policy[s] = i;
              done[s] = 2;  // settled this round
              grew = true;
              break;
            }
        }
      }
      for (StateId s : members)
        if (done[s] == 2) done[s] = 1;
    }
    for (StateId s : members) winning[s] = true;
  }
  MdpSolution sol = mdp_max_reach(g, winning);
  for (StateId s = 0; s < n; ++s)
    if (winning[s]) sol.policy[s] = ec_policy[s];
  return sol;
}

// ---------------------------------------------------------------------------
// Parity values through priority games

// Product color of every priority state.
inline std::vector<Color> priority_colors(const PriorityGame& pg, const ProductGame& p) {
  std::vector<Color> c(pg.size());
  for (StateId s = 0; s < pg.size(); ++s) c[s] = p.color[pg.product_state[s]];
  return c;
}

// The graph with `fixed`'s states reduced to the choice `pair` makes there.
inline GameGraph fix_player(const GameGraph& g, const PureStrategyPair& pair, Player fixed) {
  GameGraph out = g;
  for (StateId s = 0; s < g.size(); ++s)
    if (g.owner[s] == fixed) {
      const auto idx = g.choice_index(s, pair.action.at(s));
      if (!idx) throw ValidationError("strategy picks a disabled action at state " + std::to_string(s));
      out.choices[s] = {g.choices[s][*idx]};
    }
  return out;
}

// Parity probability the controller part of `pair` guarantees against an
// adversary that sees the whole state.
inline double controller_guarantee(const GameGraph& g, const std::vector<Color>& color,
                                   const PureStrategyPair& pair) {
  return 1.0 - mdp_max_parity(fix_player(g, pair, Player::kController), color, false).value[g.initial];
}

// Parity probability a fully informed controller reaches against the
// adversary part of `pair`.
inline double adversary_concession(const GameGraph& g, const std::vector<Color>& color,
                                   const PureStrategyPair& pair) {
  return mdp_max_parity(fix_player(g, pair, Player::kAdversary), color, true).value[g.initial];
}

struct CertifiedValue {
  double lower = 0;
  double upper = 1;
  double epsilon = 0;           // last epsilon tried
  PureStrategyPair greedy;      // discounted-greedy pair on the priority game at `epsilon`
  bool certified = false;
};

// Brackets the parity value of a product game. lower is what the
// discounted-greedy controller guarantees, upper what the discounted-greedy
// adversary concedes; the value lies between. Epsilon halves until the
// bracket closes to `gap` or drops below `min_epsilon`.
inline CertifiedValue certified_parity_value(const ProductGame& p, double epsilon = 0.1,
                                             double min_epsilon = 1e-4, double gap = 1e-9) {
  CertifiedValue out;
  for (; epsilon >= min_epsilon; epsilon /= 2) {
    const auto pg = build_priority(p, Prm(std::max<Color>(p.k, p.max_color()), epsilon));
    const auto color = priority_colors(pg, p);
    const auto sol = discounted_value_vi(pg, 1e-10);
    out.epsilon = epsilon;
    out.greedy = sol.greedy;
    out.lower = controller_guarantee(pg.graph, color, sol.greedy);
    out.upper = adversary_concession(pg.graph, color, sol.greedy);
    if (out.upper - out.lower <= gap) {
      out.certified = true;
      break;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// CSV export

inline std::string values_csv(const std::vector<double>& value,
                              const std::vector<std::string>& names) {
  std::ostringstream os;
  os << "state,value\n";
  for (std::size_t s = 0; s < value.size(); ++s)
    os << names.at(s) << ',' << detail::format_double(value[s]) << "\n";
  return os.str();
}

inline std::string pair_outcomes_csv(const std::vector<PairOutcome>& outcomes) {
  std::ostringstream os;
  os << "controller_map,adversary_map,value\n";
  for (const auto& o : outcomes)
    os << o.controller_index << ',' << o.adversary_index << ',' << detail::format_double(o.value)
       << "\n";
  return os.str();
}

}  // namespace ltlgame
