#include <gtest/gtest.h>

#include "ltlgame/dpa.hpp"
#include "ltlgame/hoa.hpp"
#include "ltlgame/lasso_check.hpp"
#include "test_util.hpp"

namespace ltlgame {
namespace {

using testing_util::read_data;

Dpa random_dpa(Rng& rng, const ApUniverse& ap, std::size_t states, Color k) {
  Dpa d = Dpa::builder(ap, states, 0, k);
  for (std::size_t q = 0; q < states; ++q)
    for (Letter l = 0; l < ap.letter_count(); ++l)
      d.set(q, l, rng.below(states), static_cast<Color>(1 + rng.below(static_cast<std::uint64_t>(k))));
  d.finalize();
  return d;
}

// Naive oracle: every lasso within the bounds, one by one.
std::uint64_t naive_mismatches(const Dpa& d, const Formula& f, std::size_t max_stem,
                               std::size_t max_loop) {
  const std::uint64_t a = d.ap().letter_count();
  std::uint64_t bad = 0;
  std::vector<Letter> stem, loop;
  for (std::size_t sl = 0; sl <= max_stem; ++sl)
    for (std::uint64_t s = 0; s < detail::pow_u64(a, sl); ++s) {
      detail::decode_word(s, sl, a, stem);
      for (std::size_t ll = 1; ll <= max_loop; ++ll)
        for (std::uint64_t l = 0; l < detail::pow_u64(a, ll); ++l) {
          detail::decode_word(l, ll, a, loop);
          const LassoWord w{stem, loop};
          if (accepts_lasso(d, w) != eval_lasso(f, w, d.ap())) ++bad;
        }
    }
  return bad;
}

const char* kExampleHoa = R"(HOA: v1
States: 2
Start: 0
AP: 3 "a" "b" "c"
acc-name: parity max even 6
Acceptance: 6 Fin(5) & (Inf(4) | (Fin(3) & (Inf(2) | (Fin(1) & Inf(0)))))
--BODY--
State: 0
[0&1] 0 {4}
[0&!1&2] 0 {2}
[0&!1&!2] 0 {3}
[!0&2] 1 {5}
[!0&!2] 0 {5}
State: 1
[2] 1 {2}
[!2] 0 {5}
--END--
)";

TEST(Dpa, RejectsIncompleteAndOutOfRange) {
  const ApUniverse ap{"a"};
  Dpa d = Dpa::builder(ap, 1, 0, 2);
  d.set(0, 0, 0, 2);
  EXPECT_THROW(d.finalize(), ValidationError);
  d.set(0, 1, 0, 3);
  EXPECT_THROW(d.finalize(), ValidationError);
  d.set(0, 1, 0, 1);
  EXPECT_NO_THROW(d.finalize());
  EXPECT_THROW(Dpa(ap, 1, 0, 2, {0, 0}, {0, 2}), ValidationError);
}

TEST(Dpa, UniversalStep) {
  const ApUniverse ap{"a", "b"};
  const auto d = universal_dpa(ap);
  for (Letter l = 0; l < 4; ++l) {
    const auto s = run_step(d, 0, LabelSet::from_bits(ap, l));
    EXPECT_EQ(s.state, 0U);
    EXPECT_EQ(s.color, 2);
  }
  EXPECT_TRUE(accepts_lasso(d, LassoWord{{1, 2}, {3, 0}}));
}

TEST(Dpa, RunStepRejectsForeignLabel) {
  const ApUniverse ap{"a"};
  EXPECT_THROW(run_step(universal_dpa(ap), 0, LabelSet::from_bits(ap, 2)), ValidationError);
}

class ExampleAutomaton : public ::testing::Test {
 protected:
  Dpa d = parse_hoa(kExampleHoa);
  Letter L(std::initializer_list<std::string> s) {
    return d.ap().letter(std::vector<std::string>(s));
  }
};

TEST_F(ExampleAutomaton, Shape) {
  EXPECT_EQ(d.num_states(), 2U);
  EXPECT_EQ(d.k(), 5);
  // Edges between q0 and q1 carry the largest odd color.
  EXPECT_EQ(d.step(0, L({"c"})).state, 1U);
  EXPECT_EQ(d.step(0, L({"c"})).color, 5);
  EXPECT_EQ(d.step(1, L({})).state, 0U);
  EXPECT_EQ(d.step(1, L({})).color, 5);
}

TEST_F(ExampleAutomaton, StayingInQ1IsAccepting) {
  for (auto l : {L({"c"}), L({"a", "c"}), L({"b", "c"})}) {
    const auto s = run_step(d, 1, LabelSet::from_bits(d.ap(), l));
    EXPECT_EQ(s.state, 1U);
    EXPECT_EQ(s.color % 2, 0);
  }
}

TEST_F(ExampleAutomaton, Lassos) {
  EXPECT_FALSE(accepts_lasso(d, LassoWord{{}, {L({}), L({"b"})}}));
  EXPECT_TRUE(accepts_lasso(d, LassoWord{{}, {L({"a", "c"})}}));
  EXPECT_TRUE(accepts_lasso(d, LassoWord{{}, {L({"a", "c"}), L({"a", "b", "c"})}}));
  // q0/q1 alternation has maximal recurring color 5.
  const auto out = run_loop(d, 0, {L({"c"}), L({})});
  EXPECT_EQ(out.max_recurring_color, 5);
}

TEST_F(ExampleAutomaton, MatchesFormulaAtBound3) {
  const auto report = check_equivalence_bounded(d, parse_ltl("(F G a & G F b) | F G c"));
  EXPECT_TRUE(report.pass());
  EXPECT_EQ(report.lassos_checked, count_lasso_words(8, 3, 3));
}

TEST(Dpa, AcceptanceInvariantUnderRotation) {
  Rng rng(7);
  const ApUniverse ap{"a", "b"};
  for (int trial = 0; trial < 50; ++trial) {
    const auto d = random_dpa(rng, ap, 1 + rng.below(4), 4);
    for (int w = 0; w < 50; ++w) {
      LassoWord x;
      for (std::size_t i = rng.below(3); i > 0; --i) x.stem.push_back(static_cast<Letter>(rng.below(4)));
      for (std::size_t i = 1 + rng.below(3); i > 0; --i) x.loop.push_back(static_cast<Letter>(rng.below(4)));
      LassoWord y{x.stem, {}};
      y.stem.push_back(x.loop[0]);
      y.loop.assign(x.loop.begin() + 1, x.loop.end());
      y.loop.push_back(x.loop[0]);
      ASSERT_EQ(accepts_lasso(d, x), accepts_lasso(d, y));
    }
  }
}

TEST(Hoa, UniversalAutomaton) {
  const auto d = parse_hoa(R"(HOA: v1
States: 1
Start: 0
AP: 1 "a"
acc-name: parity max even 1
Acceptance: 1 Inf(0)
--BODY--
State: 0
[t] 0 {0}
--END--
)");
  EXPECT_GE(d.k(), 2);
  for (Letter l = 0; l < 2; ++l) EXPECT_EQ(d.step(0, l).color % 2, 0);
  EXPECT_TRUE(accepts_lasso(d, LassoWord{{}, {0}}));
}

std::string one_state_hoa(const std::string& acc, const std::string& body) {
  return "HOA: v1\nStates: 1\nStart: 0\nAP: 1 \"a\"\n" + acc + "\n--BODY--\nState: 0\n" + body +
         "--END--\n";
}

TEST(Hoa, ParityVariantsNormalizeToMaxEven) {
  // Loop {a}: marks 1 on a, 0 on !a. Under each variant the word a^omega
  // is accepted iff the variant calls a lone mark 1 accepting.
  const std::string body = "[0] 0 {1}\n[!0] 0 {0}\n";
  struct Case {
    const char* acc;
    bool a_accepted, not_a_accepted, mixed_accepted;
  };
  for (const Case& c : {Case{"acc-name: parity max even 2\nAcceptance: 2 t", false, true, false},
                        Case{"acc-name: parity max odd 2\nAcceptance: 2 t", true, false, true},
                        Case{"acc-name: parity min even 2\nAcceptance: 2 t", false, true, true},
                        Case{"acc-name: parity min odd 2\nAcceptance: 2 t", true, false, false}}) {
    const auto d = parse_hoa(one_state_hoa(c.acc, body));
    EXPECT_EQ(accepts_lasso(d, LassoWord{{}, {1}}), c.a_accepted) << c.acc;
    EXPECT_EQ(accepts_lasso(d, LassoWord{{}, {0}}), c.not_a_accepted) << c.acc;
    EXPECT_EQ(accepts_lasso(d, LassoWord{{}, {0, 1}}), c.mixed_accepted) << c.acc;
    for (Letter l = 0; l < 2; ++l) EXPECT_GE(d.step(0, l).color, 1);
  }
}

TEST(Hoa, StateMarksMoveToOutgoingEdges) {
  const auto d = parse_hoa(R"(HOA: v1
States: 2
Start: 0
AP: 1 "a"
acc-name: parity max even 3
Acceptance: 3 Inf(2) | (Fin(1) & Inf(0))
--BODY--
State: 0 {1}
[0] 1
[!0] 0
State: 1 {2}
[t] 0
--END--
)");
  EXPECT_EQ(d.step(0, 1).color % 2, 1);
  EXPECT_EQ(d.step(1, 0).color % 2, 0);
  EXPECT_TRUE(accepts_lasso(d, LassoWord{{}, {1, 0}}));
  EXPECT_FALSE(accepts_lasso(d, LassoWord{{}, {0}}));
}

TEST(Hoa, Errors) {
  EXPECT_THROW(parse_hoa(one_state_hoa("acc-name: parity max even 2\nAcceptance: 2 Fin(1) & Inf(0)",
                                       "[0] 0 {1}\n")),
               ValidationError);  // incomplete
  EXPECT_THROW(parse_hoa(one_state_hoa("acc-name: parity max even 2\nAcceptance: 2 Fin(1) & Inf(0)",
                                       "[t] 0 {1}\n[0] 0 {0}\n")),
               ValidationError);  // nondeterministic
  EXPECT_THROW(parse_hoa(one_state_hoa("acc-name: Buchi\nAcceptance: 1 Inf(0)", "[t] 0 {0}\n")),
               Error);
  EXPECT_THROW(parse_hoa("HOA: v1\nStates: 1\n--BODY--\n"), Error);
  EXPECT_THROW(parse_hoa("not hoa"), Error);
}

TEST(Hoa, WriteReadRoundTrip) {
  Rng rng(3);
  const ApUniverse ap{"p", "q"};
  for (int i = 0; i < 20; ++i) {
    const auto d = random_dpa(rng, ap, 1 + rng.below(5), 6);
    const auto e = parse_hoa(write_hoa(d, "r"));
    for (std::size_t q = 0; q < d.num_states(); ++q)
      for (Letter l = 0; l < 4; ++l) EXPECT_EQ(e.step(q, l).state, d.step(q, l).state);
    const Formula f = parse_ltl("true");
    // Same language: compare on all bounded lassos through the oracle.
    EXPECT_EQ(naive_mismatches(d, f, 2, 2), naive_mismatches(e, f, 2, 2));
  }
}

TEST(Hoa, NormalizationPreservesLanguageOnRandomAutomata) {
  Rng rng(11);
  const ApUniverse ap{"p"};
  for (int i = 0; i < 30; ++i) {
    const auto d = random_dpa(rng, ap, 1 + rng.below(3), 5);
    // Same automaton written as "parity min odd" with reflected marks.
    std::string text = "HOA: v1\nStates: " + std::to_string(d.num_states()) +
                       "\nStart: 0\nAP: 1 \"p\"\nacc-name: parity min odd 7\nAcceptance: 7 t\n--BODY--\n";
    for (std::size_t q = 0; q < d.num_states(); ++q) {
      text += "State: " + std::to_string(q) + "\n";
      for (Letter l = 0; l < 2; ++l) {
        const auto s = d.step(q, l);
        // max-even color c  <->  min-odd mark 5 - c (parity flips, order reverses).
        text += std::string("[") + (l ? "0" : "!0") + "] " + std::to_string(s.state) + " {" +
                std::to_string(5 - s.color) + "}\n";
      }
    }
    text += "--END--\n";
    const auto e = parse_hoa(text);
    std::vector<Letter> stem, loop;
    for (std::size_t sl = 0; sl <= 3; ++sl)
      for (std::uint64_t s = 0; s < detail::pow_u64(2, sl); ++s)
        for (std::size_t ll = 1; ll <= 3; ++ll)
          for (std::uint64_t w = 0; w < detail::pow_u64(2, ll); ++w) {
            detail::decode_word(s, sl, 2, stem);
            detail::decode_word(w, ll, 2, loop);
            ASSERT_EQ(accepts_lasso(d, {stem, loop}), accepts_lasso(e, {stem, loop}));
          }
  }
}

TEST(LassoCheck, SpecExamples) {
  const ApUniverse ap1{"a"};
  EXPECT_TRUE(check_equivalence_bounded(universal_dpa(ap1), parse_ltl("true"),
                                        {.max_stem = 2, .max_loop = 2})
                  .pass());
  const auto r = check_equivalence_bounded(universal_dpa(ap1), parse_ltl("G a"),
                                           {.max_stem = 1, .max_loop = 1});
  ASSERT_FALSE(r.pass());
  bool found = false;
  for (const auto& m : r.counterexamples)
    if (m.word == LassoWord{{}, {0}}) found = true;
  EXPECT_TRUE(found);
  EXPECT_EQ(r.mismatch_count, naive_mismatches(universal_dpa(ap1), parse_ltl("G a"), 1, 1));
}

TEST(LassoCheck, AtomOutsideAlphabetRejected) {
  EXPECT_THROW(check_equivalence_bounded(universal_dpa(ApUniverse{"a"}), parse_ltl("F b")),
               ValidationError);
}

TEST(LassoCheck, CapGuard) {
  const ApUniverse ap{"a", "b", "c", "d", "e", "f", "g", "h"};
  EXPECT_THROW(check_equivalence_bounded(universal_dpa(ap), parse_ltl("true"),
                                         {.max_stem = 4, .max_loop = 4}),
               CapExceeded);
}

TEST(LassoCheck, FactoredCountMatchesNaiveEnumeration) {
  Rng rng(2026);
  const ApUniverse ap{"a", "b"};
  const char* formulas[] = {"G F a", "F G (a | b)", "a U b", "G (a -> X b)", "X X a",
                            "F (a & X !a)", "(G F a) -> (G F b)", "!b U (a & X X b)"};
  for (int trial = 0; trial < 40; ++trial) {
    const auto d = random_dpa(rng, ap, 1 + rng.below(3), 4);
    const auto f = parse_ltl(formulas[trial % 8]);
    const auto r = check_equivalence_bounded(d, f, {.max_stem = 2, .max_loop = 3, .max_listed = 5});
    ASSERT_EQ(r.mismatch_count, naive_mismatches(d, f, 2, 3)) << trial;
    std::uint64_t listed = 0;
    for (const auto& m : r.counterexamples) {
      EXPECT_NE(accepts_lasso(d, m.word), eval_lasso(f, m.word, ap));
      EXPECT_EQ(m.automaton_accepts, accepts_lasso(d, m.word));
      listed += m.multiplicity;
    }
    if (!r.truncated) {
      EXPECT_EQ(listed, r.mismatch_count);
    }
    EXPECT_LE(r.counterexamples.size(), 5U);
  }
}

TEST(Fixtures, ExampleAutomaton) {
  const auto d = parse_hoa(read_data("automata/example.hoa"));
  EXPECT_EQ(d.num_states(), 2U);
  EXPECT_TRUE(check_equivalence_bounded(d, parse_ltl("(F G a & G F b) | F G c")).pass());
}

TEST(Fixtures, NurseryHasFourStatesThreeColors) {
  const auto d = parse_hoa(read_data("automata/nursery.hoa"));
  EXPECT_EQ(d.num_states(), 4U);
  EXPECT_EQ(d.k(), 3);
  const auto r = check_equivalence_bounded(
      d, parse_ltl("F G e & F a & G (a -> X G !a) & G F b & G F c & G !d"));
  EXPECT_TRUE(r.pass()) << r.mismatch_count;
}

TEST(Fixtures, SurveillanceHasTwelveStatesSevenColors) {
  const auto d = parse_hoa(read_data("automata/surveillance.hoa"));
  EXPECT_EQ(d.num_states(), 12U);
  EXPECT_EQ(d.k(), 7);
  const auto r = check_equivalence_bounded(
      d, parse_ltl("(F G b & G F a) | (F G d & G F c) | (F G g & G F e & G F f)"));
  EXPECT_TRUE(r.pass()) << r.mismatch_count;
  EXPECT_EQ(r.lassos_checked, count_lasso_words(128, 3, 3));
}

}  // namespace
}  // namespace ltlgame
