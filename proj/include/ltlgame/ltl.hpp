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

// LTL formulas over atomic propositions: syntax tree, parser, printer and an
// exact evaluator on ultimately periodic (lasso) words.
//
// Surface syntax, loosest to tightest binding:
//
//   ->   right-associative
//   |    left-associative
//   &    left-associative
//   U    right-associative
//   ! X F G   prefix
//
// Atoms are lowercase identifiers ([a-z_][a-z0-9_]*); `true` and `false` are
// keywords. Unicode aliases: ◊ F, □ G, ◯/○ X, ∧ &, ∨ |, ¬ !, → ->.

#pragma once

#include <cstdint>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "ltlgame/common.hpp"
#include "ltlgame/labels.hpp"

namespace ltlgame {

enum class FormulaKind : std::uint8_t {
  kTrue,
  kAtom,
  kNot,
  kAnd,
  kNext,
  kUntil,
  // Derived operators, kept as explicit nodes after parsing.
  kOr,
  kImplies,
  kEventually,
  kAlways,
};

class Formula {
 public:
  static Formula truth() { return Formula(make(FormulaKind::kTrue, {}, {})); }
  static Formula falsity() { return negation(truth()); }
  static Formula atom(std::string name) {
    return Formula(make(FormulaKind::kAtom, std::move(name), {}));
  }
  static Formula negation(Formula f) { return unary(FormulaKind::kNot, std::move(f)); }
  static Formula next(Formula f) { return unary(FormulaKind::kNext, std::move(f)); }
  static Formula eventually(Formula f) { return unary(FormulaKind::kEventually, std::move(f)); }
  static Formula always(Formula f) { return unary(FormulaKind::kAlways, std::move(f)); }
  static Formula conjunction(Formula l, Formula r) {
    return binary(FormulaKind::kAnd, std::move(l), std::move(r));
  }
  static Formula disjunction(Formula l, Formula r) {
    return binary(FormulaKind::kOr, std::move(l), std::move(r));
  }
  static Formula implication(Formula l, Formula r) {
    return binary(FormulaKind::kImplies, std::move(l), std::move(r));
  }
  static Formula until(Formula l, Formula r) {
    return binary(FormulaKind::kUntil, std::move(l), std::move(r));
  }

  FormulaKind kind() const { return node_->kind; }
  const std::string& name() const { return node_->name; }
  const Formula& lhs() const { return node_->children.at(0); }
  const Formula& rhs() const { return node_->children.at(1); }
  // Operand of a unary node.
  const Formula& operand() const { return node_->children.at(0); }
  std::size_t arity() const { return node_->children.size(); }
  const void* identity() const { return node_.get(); }

  friend bool operator==(const Formula& a, const Formula& b) {
    if (a.node_ == b.node_) return true;
    if (a.kind() != b.kind() || a.name() != b.name() || a.arity() != b.arity()) return false;
    for (std::size_t i = 0; i < a.arity(); ++i)
      if (!(a.node_->children[i] == b.node_->children[i])) return false;
    return true;
  }

 private:
  struct Node {
    FormulaKind kind;
    std::string name;
    std::vector<Formula> children;
  };

  explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

  static std::shared_ptr<const Node> make(FormulaKind k, std::string name,
                                          std::vector<Formula> children) {
    return std::make_shared<const Node>(Node{k, std::move(name), std::move(children)});
  }
  static Formula unary(FormulaKind k, Formula f) {
    return Formula(make(k, {}, {std::move(f)}));
  }
  static Formula binary(FormulaKind k, Formula l, Formula r) {
    return Formula(make(k, {}, {std::move(l), std::move(r)}));
  }

  std::shared_ptr<const Node> node_;
};

// ---------------------------------------------------------------------------
// Printing

namespace detail {

inline void print_formula(const Formula& f, std::string& out) {
  auto bin = [&](const char* op) {
    out += '(';
    print_formula(f.lhs(), out);
    out += ' ';
    out += op;
    out += ' ';
    print_formula(f.rhs(), out);
    out += ')';
  };
  auto un = [&](const char* op) {
    out += op;
    print_formula(f.operand(), out);
  };
  switch (f.kind()) {
    case FormulaKind::kTrue: out += "true"; break;
    case FormulaKind::kAtom: out += f.name(); break;
    case FormulaKind::kNot: un("!"); break;
    case FormulaKind::kNext: un("X "); break;
    case FormulaKind::kEventually: un("F "); break;
    case FormulaKind::kAlways: un("G "); break;
    case FormulaKind::kAnd: bin("&"); break;
    case FormulaKind::kOr: bin("|"); break;
    case FormulaKind::kImplies: bin("->"); break;
    case FormulaKind::kUntil: bin("U"); break;
  }
}

}  // namespace detail

// Fully parenthesized rendering; parse_ltl(to_string(f)) == f.
inline std::string to_string(const Formula& f) {
  std::string s;
  detail::print_formula(f, s);
  return s;
}

// ---------------------------------------------------------------------------
// Parsing

namespace detail {

enum class Tok : std::uint8_t {
  kEnd, kIdent, kTrue, kFalse, kNot, kNext, kEventually, kAlways,
  kAnd, kOr, kImplies, kUntil, kLParen, kRParen,
};

struct Token {
  Tok kind;
  std::string text;
  std::size_t pos;
};

inline std::vector<Token> tokenize_ltl(std::string_view s) {
  struct Alias {
    std::string_view text;
    Tok tok;
  };
  // Longest spellings first so "->" wins over "-".
  static constexpr Alias kAliases[] = {
      {"->", Tok::kImplies},   {"&&", Tok::kAnd},      {"||", Tok::kOr},
      {"→", Tok::kImplies}, {"◊", Tok::kEventually}, {"□", Tok::kAlways},
      {"◯", Tok::kNext},  {"○", Tok::kNext}, {"∧", Tok::kAnd},
      {"∨", Tok::kOr},    {"¬", Tok::kNot},  {"!", Tok::kNot},
      {"&", Tok::kAnd},        {"|", Tok::kOr},        {"(", Tok::kLParen},
      {")", Tok::kRParen},     {"X", Tok::kNext},      {"F", Tok::kEventually},
      {"G", Tok::kAlways},     {"U", Tok::kUntil},
  };
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    const char c = s[i];
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
      ++i;
      continue;
    }
    if ((c >= 'a' && c <= 'z') || c == '_') {
      std::size_t j = i;
      while (j < s.size() && ((s[j] >= 'a' && s[j] <= 'z') || (s[j] >= '0' && s[j] <= '9') ||
                              s[j] == '_'))
        ++j;
      std::string word(s.substr(i, j - i));
      Tok k = Tok::kIdent;
      if (word == "true") k = Tok::kTrue;
      if (word == "false") k = Tok::kFalse;
      out.push_back({k, std::move(word), i});
      i = j;
      continue;
    }
    bool matched = false;
    for (const auto& a : kAliases) {
      if (s.substr(i, a.text.size()) == a.text) {
        out.push_back({a.tok, std::string(a.text), i});
        i += a.text.size();
        matched = true;
        break;
      }
    }
    if (!matched) throw ParseError("unknown token '" + std::string(1, c) + "'", i);
  }
  out.push_back({Tok::kEnd, {}, s.size()});
  return out;
}

class LtlParser {
 public:
  explicit LtlParser(std::string_view text) : toks_(tokenize_ltl(text)) {}

  Formula parse() {
    Formula f = implication();
    if (peek().kind != Tok::kEnd) fail("unexpected '" + peek().text + "'");
    return f;
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  const Token& take() { return toks_[pos_++]; }
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError("syntax error: " + what, peek().pos);
  }

  Formula implication() {
    Formula l = disjunction();
    if (peek().kind == Tok::kImplies) {
      take();
      return Formula::implication(std::move(l), implication());
    }
    return l;
  }
  Formula disjunction() {
    Formula l = conjunction();
    while (peek().kind == Tok::kOr) {
      take();
      l = Formula::disjunction(std::move(l), conjunction());
    }
    return l;
  }
  Formula conjunction() {
    Formula l = until();
    while (peek().kind == Tok::kAnd) {
      take();
      l = Formula::conjunction(std::move(l), until());
    }
    return l;
  }
  Formula until() {
    Formula l = unary();
    if (peek().kind == Tok::kUntil) {
      take();
      return Formula::until(std::move(l), until());
    }
    return l;
  }
  Formula unary() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::kNot: take(); return Formula::negation(unary());
      case Tok::kNext: take(); return Formula::next(unary());
      case Tok::kEventually: take(); return Formula::eventually(unary());
      case Tok::kAlways: take(); return Formula::always(unary());
      case Tok::kTrue: take(); return Formula::truth();
      case Tok::kFalse: take(); return Formula::falsity();
      case Tok::kIdent: return Formula::atom(take().text);
      case Tok::kLParen: {
        take();
        Formula f = implication();
        if (peek().kind != Tok::kRParen) fail("expected ')'");
        take();
        return f;
      }
      case Tok::kEnd: fail("unexpected end of formula");
      default: fail("unexpected '" + t.text + "'");
    }
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline Formula parse_ltl(std::string_view text) { return detail::LtlParser(text).parse(); }

// ---------------------------------------------------------------------------
// Queries and rewriting

namespace detail {
inline void collect_atoms(const Formula& f, std::set<std::string>& out) {
  if (f.kind() == FormulaKind::kAtom) out.insert(f.name());
  for (std::size_t i = 0; i < f.arity(); ++i)
    collect_atoms(i == 0 ? f.lhs() : f.rhs(), out);
}
}  // namespace detail

inline std::set<std::string> atomic_propositions(const Formula& f) {
  std::set<std::string> out;
  detail::collect_atoms(f, out);
  return out;
}

// Rewrites derived operators into the core grammar (true, atoms, !, &, X, U).
inline Formula expand(const Formula& f) {
  using K = FormulaKind;
  switch (f.kind()) {
    case K::kTrue:
    case K::kAtom: return f;
    case K::kNot: return Formula::negation(expand(f.operand()));
    case K::kNext: return Formula::next(expand(f.operand()));
    case K::kAnd: return Formula::conjunction(expand(f.lhs()), expand(f.rhs()));
    case K::kUntil: return Formula::until(expand(f.lhs()), expand(f.rhs()));
    case K::kOr:
      return Formula::negation(Formula::conjunction(Formula::negation(expand(f.lhs())),
                                                    Formula::negation(expand(f.rhs()))));
    case K::kImplies: {
      // a -> b  :=  !a | b  :=  !(!!a & !b)
      Formula na = Formula::negation(expand(f.lhs()));
      return Formula::negation(
          Formula::conjunction(Formula::negation(na), Formula::negation(expand(f.rhs()))));
    }
    case K::kEventually: return Formula::until(Formula::truth(), expand(f.operand()));
    case K::kAlways:
      return Formula::negation(
          Formula::until(Formula::truth(), Formula::negation(expand(f.operand()))));
  }
  return f;
}

// ---------------------------------------------------------------------------
// Compiled form: subformulas in post-order (children before parents, root
// last), with atoms resolved against a universe.

class CompiledFormula {
 public:
  struct Op {
    FormulaKind kind;
    std::int32_t lhs = -1;  // operand for unary nodes
    std::int32_t rhs = -1;
    std::uint32_t atom_bit = 0;
  };

  CompiledFormula(const Formula& f, const ApUniverse& ap) { root_ = add(f, ap); }

  const std::vector<Op>& ops() const { return ops_; }
  std::size_t size() const { return ops_.size(); }
  std::size_t root() const { return static_cast<std::size_t>(root_); }

  // Indices whose values at position t+1 are read when computing position t.
  std::vector<std::size_t> successor_reads() const {
    std::vector<char> mark(ops_.size(), 0);
    for (std::size_t i = 0; i < ops_.size(); ++i) {
      switch (ops_[i].kind) {
        case FormulaKind::kNext: mark[static_cast<std::size_t>(ops_[i].lhs)] = 1; break;
        case FormulaKind::kUntil:
        case FormulaKind::kEventually:
        case FormulaKind::kAlways: mark[i] = 1; break;
        default: break;
      }
    }
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < mark.size(); ++i)
      if (mark[i]) out.push_back(i);
    return out;
  }

  // Truth of every subformula at one position, given the letter there and the
  // values at the following position.
  void step(Letter letter, const std::uint8_t* succ, std::uint8_t* out) const {
    for (std::size_t i = 0; i < ops_.size(); ++i) {
      const Op& op = ops_[i];
      const auto l = static_cast<std::size_t>(op.lhs);
      const auto r = static_cast<std::size_t>(op.rhs);
      std::uint8_t v = 0;
      switch (op.kind) {
        case FormulaKind::kTrue: v = 1; break;
        case FormulaKind::kAtom: v = (letter & op.atom_bit) ? 1 : 0; break;
        case FormulaKind::kNot: v = !out[l]; break;
        case FormulaKind::kAnd: v = out[l] && out[r]; break;
        case FormulaKind::kOr: v = out[l] || out[r]; break;
        case FormulaKind::kImplies: v = !out[l] || out[r]; break;
        case FormulaKind::kNext: v = succ[l]; break;
        case FormulaKind::kUntil: v = out[r] || (out[l] && succ[i]); break;
        case FormulaKind::kEventually: v = out[l] || succ[i]; break;
        case FormulaKind::kAlways: v = out[l] && succ[i]; break;
      }
      out[i] = v;
    }
  }

 private:
  std::int32_t add(const Formula& f, const ApUniverse& ap) {
    Op op{f.kind()};
    if (f.kind() == FormulaKind::kAtom) {
      op.atom_bit = Letter{1} << ap.index_of(f.name());
    } else if (f.arity() >= 1) {
      op.lhs = add(f.lhs(), ap);
      if (f.arity() == 2) op.rhs = add(f.rhs(), ap);
    }
    ops_.push_back(op);
    return static_cast<std::int32_t>(ops_.size() - 1);
  }

  std::vector<Op> ops_;
  std::int32_t root_ = -1;
};

// Truth table of every subformula at positions 0..|stem|+|loop|-1 of a lasso.
// Row t holds the values for position t; position |stem|+|loop| wraps to
// |stem|.
inline std::vector<std::vector<std::uint8_t>> lasso_truth_table(const CompiledFormula& cf,
                                                                const LassoWord& w) {
  const std::size_t n = w.length();
  const std::size_t stem = w.stem.size();
  const std::size_t m = cf.size();
  std::vector<std::vector<std::uint8_t>> v(n, std::vector<std::uint8_t>(m, 0));
  auto letter = [&](std::size_t t) { return t < stem ? w.stem[t] : w.loop[t - stem]; };
  auto succ = [&](std::size_t t) { return t + 1 < n ? t + 1 : stem; };

  for (std::size_t i = 0; i < m; ++i) {
    const auto& op = cf.ops()[i];
    const auto l = static_cast<std::size_t>(op.lhs);
    const auto r = static_cast<std::size_t>(op.rhs);
    switch (op.kind) {
      case FormulaKind::kTrue:
        for (std::size_t t = 0; t < n; ++t) v[t][i] = 1;
        break;
      case FormulaKind::kAtom:
        for (std::size_t t = 0; t < n; ++t) v[t][i] = (letter(t) & op.atom_bit) ? 1 : 0;
        break;
      case FormulaKind::kNot:
        for (std::size_t t = 0; t < n; ++t) v[t][i] = !v[t][l];
        break;
      case FormulaKind::kAnd:
        for (std::size_t t = 0; t < n; ++t) v[t][i] = v[t][l] && v[t][r];
        break;
      case FormulaKind::kOr:
        for (std::size_t t = 0; t < n; ++t) v[t][i] = v[t][l] || v[t][r];
        break;
      case FormulaKind::kImplies:
        for (std::size_t t = 0; t < n; ++t) v[t][i] = !v[t][l] || v[t][r];
        break;
      case FormulaKind::kNext:
        for (std::size_t t = 0; t < n; ++t) v[t][i] = v[succ(t)][l];
        break;
      case FormulaKind::kUntil:
      case FormulaKind::kEventually:
      case FormulaKind::kAlways: {
        // x_t = now_t OR/AND (keep_t AND x_{t+1}); least fixpoint for U and F,
        // greatest for G. Two backward passes settle the cycle, then the stem.
        const bool greatest = op.kind == FormulaKind::kAlways;
        auto now = [&](std::size_t t) -> bool {
          if (op.kind == FormulaKind::kUntil) return v[t][r];
          return v[t][l];
        };
        auto keep = [&](std::size_t t) -> bool {
          return op.kind == FormulaKind::kUntil ? v[t][l] : true;
        };
        auto update = [&](std::size_t t, bool next_val) {
          if (greatest) v[t][i] = now(t) && next_val;
          else v[t][i] = now(t) || (keep(t) && next_val);
        };
        bool carry = greatest;
        for (int pass = 0; pass < 2; ++pass) {
          for (std::size_t t = n; t-- > stem;) {
            update(t, carry);
            carry = v[t][i];
          }
          carry = v[stem][i];
        }
        for (std::size_t t = stem; t-- > 0;) update(t, v[t + 1][i]);
        break;
      }
    }
  }
  return v;
}

inline bool eval_lasso(const CompiledFormula& cf, const LassoWord& w) {
  if (w.loop.empty()) throw ValidationError("lasso loop must be nonempty");
  return lasso_truth_table(cf, w)[0][cf.root()] != 0;
}

// Whether stem . loop^omega satisfies f. Every atom of f must belong to `ap`.
inline bool eval_lasso(const Formula& f, const LassoWord& w, const ApUniverse& ap) {
  w.validate(ap);
  return eval_lasso(CompiledFormula(f, ap), w);
}

}  // namespace ltlgame
