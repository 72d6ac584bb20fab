#include <gtest/gtest.h>

#include <random>

#include "cadyn/cadyn.hpp"
#include "test_util.hpp"

using namespace cadyn;
using namespace cadyn::testing;

TEST(Alphabet, RejectsDuplicatesAndTinyAlphabets) {
  EXPECT_THROW(Alphabet({"a"}), PreconditionError);
  EXPECT_THROW(Alphabet({"a", "b", "a"}), PreconditionError);
  EXPECT_THROW(Alphabet({"a", "b|c"}), PreconditionError);
}

TEST(Alphabet, MultiCharacterSymbolsUseBars) {
  Alphabet a({"ab", "c", "long"});
  EXPECT_FALSE(a.single_char());
  auto w = a.parse("long|ab|c");
  EXPECT_EQ(w, (Word{2, 0, 1}));
  EXPECT_EQ(a.format(w), "long|ab|c");
  EXPECT_THROW(a.parse("ab|x"), ParseError);
}

TEST(LocalRule, TableMustBeTotal) {
  EXPECT_THROW(LocalRule(Alphabet::digits(2), -1, 1, std::vector<Symbol>(7, 0)), PreconditionError);
  EXPECT_THROW(LocalRule(Alphabet::digits(2), 1, 0, std::vector<Symbol>(1, 0)), PreconditionError);
  EXPECT_THROW(LocalRule(Alphabet::digits(2), 0, 0, std::vector<Symbol>{0, 2}), PreconditionError);
}

TEST(LocalRule, RadiusAndDiameter) {
  auto p = wall_signal_rule();
  EXPECT_EQ(p.radius(), 1);
  EXPECT_EQ(p.diameter(), 1u);
  auto s = shift_rule(Alphabet::digits(2));
  EXPECT_EQ(s.radius(), 1);
  EXPECT_EQ(s.diameter(), 0u);
  EXPECT_EQ(identity_rule(Alphabet::digits(3)).radius(), 0);
}

TEST(ApplyRuleWord, WallRuleImage) {
  auto p = wall_signal_rule();
  EXPECT_EQ(S(p, apply_rule_word(p, W(p, "w000w"))), "000w");
  EXPECT_EQ(S(p, apply_rule_word(p, W(p, "w00rw"))), "000w");
  EXPECT_EQ(S(p, apply_rule_word(p, W(p, "wr000"))), "rr00");
}

TEST(ApplyRuleWord, IdentityAndRule90) {
  auto id = identity_rule(Alphabet::digits(2));
  Word u{1, 0, 0, 1, 1};
  EXPECT_EQ(apply_rule_word(id, u), u);
  auto r90 = eca_rule(90);
  EXPECT_EQ(apply_rule_word(r90, Word{0, 0, 0}), Word{0});
  EXPECT_EQ(apply_rule_word(r90, Word{1, 0, 0, 1}), (Word{1, 1}));
}

TEST(ApplyRuleWord, ShortWordIsAnError) {
  EXPECT_THROW(apply_rule_word(eca_rule(90), Word{0, 1}), PreconditionError);
}

TEST(ApplyRuleWord, LengthAndAgreementWithNaiveImage) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t k = 2 + trial % 3;
    const int m = -static_cast<int>(trial % 3);
    const int a = static_cast<int>(trial % 2);
    auto rule = random_rule(rng, k, m, a);
    auto u = random_word(rng, k, rule.neighborhood_size() + trial % 9);
    auto img = apply_rule_word(rule, u);
    EXPECT_EQ(img.size(), u.size() - rule.diameter());
    EXPECT_EQ(img, naive_image(rule, u));
  }
}

TEST(StepCyclic, WallOrbitRows) {
  auto p = wall_signal_rule();
  CyclicConfiguration x(W(p, "wr000"));
  auto f1 = step_cyclic(p, x);
  auto f2 = step_cyclic(p, f1);
  EXPECT_EQ(S(p, f1.period_word()), "wrr00");
  EXPECT_EQ(S(p, f2.period_word()), "wr0r0");
  EXPECT_EQ(f1.phase(), x.phase());
}

TEST(StepCyclic, MatchesDefinitionCellByCell) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    auto rule = random_rule(rng, 3, -1 - trial % 2, trial % 3);
    const std::size_t L = 1 + trial % 7;
    CyclicConfiguration x(random_word(rng, 3, L), trial % L);
    auto y = step_cyclic(rule, x);
    for (long long i = -10; i <= 10; ++i) EXPECT_EQ(y.at(i), naive_cell(rule, x, i));
  }
}

// σ∘F = F∘σ, exhaustively for periods <= 8 (binary) and <= 5 (ternary).
TEST(StepCyclic, CommutesWithShift) {
  std::mt19937_64 rng(17);
  for (std::size_t k : {2u, 3u}) {
    const std::size_t max_period = k == 2 ? 8 : 5;
    for (int r = 0; r < 4; ++r) {
      auto rule = random_rule(rng, k, -1, 1);
      for (std::size_t L = 1; L <= max_period; ++L)
        for_each_word(k, L, [&](const Word& u) {
          CyclicConfiguration x(u);
          EXPECT_EQ(step_cyclic(rule, x.shifted(1)), step_cyclic(rule, x).shifted(1));
        });
    }
  }
}

TEST(CyclicConfiguration, EqualityIsRepresentationIndependent) {
  CyclicConfiguration a(Word{0, 1});
  CyclicConfiguration b(Word{0, 1, 0, 1, 0, 1});
  CyclicConfiguration c(Word{1, 0}, 1);
  CyclicConfiguration d(Word{1, 0});
  EXPECT_EQ(a, b);
  EXPECT_EQ(a, c);
  EXPECT_FALSE(a == d);
  EXPECT_EQ(std::hash<CyclicConfiguration>{}(a), std::hash<CyclicConfiguration>{}(b));
  EXPECT_THROW(CyclicConfiguration(Word{}), PreconditionError);
  EXPECT_THROW(CyclicConfiguration(Word{0, 1}, 2), PreconditionError);
}

TEST(Compose, IdentityIsNeutral) {
  auto p = wall_signal_rule();
  auto c = compose(identity_rule(p.alphabet()), p);
  EXPECT_TRUE(same_global_map(c, p));
  EXPECT_EQ(c.memory(), -1);
  EXPECT_EQ(c.anticipation(), 0);
}

TEST(Compose, ShiftTwiceIsShiftByTwo) {
  auto s = shift_rule(Alphabet::digits(2));
  auto s2 = compose(s, s);
  EXPECT_EQ(s2.memory(), 2);
  EXPECT_EQ(s2.anticipation(), 2);
  for (auto& x : all_cyclic(2, 6)) EXPECT_EQ(step_cyclic(s2, x), x.shifted(2));
}

TEST(Compose, Rule90TwiceAgreesWithTwoSteps) {
  auto r = eca_rule(90);
  auto rr = compose(r, r);
  EXPECT_EQ(rr.memory(), -2);
  EXPECT_EQ(rr.anticipation(), 2);
  for (auto& x : all_cyclic(2, 6)) EXPECT_EQ(step_cyclic(rr, x), step_cyclic(r, step_cyclic(r, x)));
}

TEST(Compose, AlphabetMismatch) {
  EXPECT_THROW(compose(eca_rule(90), rotation_rule(3)), AlphabetMismatch);
}

TEST(IterateRule, IdentityStaysIdentity) {
  auto id = identity_rule(Alphabet::digits(2));
  EXPECT_TRUE(is_identity_rule(iterate_rule(id, 5)));
}

TEST(IterateRule, RotationHasOrderThree) {
  auto rot = rotation_rule(3);
  EXPECT_FALSE(is_identity_rule(iterate_rule(rot, 2)));
  EXPECT_TRUE(is_identity_rule(iterate_rule(rot, 3)));
}

TEST(IterateRule, WallRuleSquare) {
  auto p = wall_signal_rule();
  auto p2 = iterate_rule(p, 2);
  EXPECT_EQ(p2.memory(), -2);
  EXPECT_EQ(p2.anticipation(), 0);
  for_each_word(3, 3, [&](const Word& u) { EXPECT_EQ(apply_rule_word(p2, u), iterate_word(p, u, 2)); });
}

TEST(IterateRule, AgreesWithRepeatedApplication) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 40; ++trial) {
    auto rule = random_rule(rng, 2 + trial % 2, -1, trial % 2);
    for (std::size_t p = 1; p <= 4; ++p) {
      auto rp = iterate_rule(rule, p);
      auto u = random_word(rng, rule.alphabet_size(), p * rule.diameter() + 1 + trial % 5);
      EXPECT_EQ(apply_rule_word(rp, u), iterate_word(rule, u, p));
    }
  }
}

TEST(IterateRule, BudgetIsEnforced) {
  EXPECT_THROW(iterate_rule(eca_rule(110), 20, 1000), ResourceError);
  EXPECT_THROW(iterate_rule(eca_rule(110), 0), PreconditionError);
}

TEST(IsIdentityRule, Basics) {
  EXPECT_TRUE(is_identity_rule(identity_rule(Alphabet::digits(2))));
  EXPECT_TRUE(is_identity_rule(eca_rule(204)));
  EXPECT_FALSE(is_identity_rule(shift_rule(Alphabet::digits(2))));
  EXPECT_FALSE(is_identity_rule(eca_rule(90)));
}

TEST(Distance, Examples) {
  CyclicConfiguration x(Word{0, 1}), y(Word{0, 0});
  EXPECT_TRUE(distance(x, x).is_zero());
  EXPECT_EQ(distance(x, x).value(), 0.0);
  EXPECT_EQ(distance(CyclicConfiguration(Word{1}), CyclicConfiguration(Word{0})).value(), 1.0);
  EXPECT_EQ(distance(x, y).value(), 0.5);
  // differ only at coordinate -2 mod 3
  CyclicConfiguration a(Word{0, 0, 0}), b(Word{0, 1, 0});
  EXPECT_EQ(*distance(a, b).exponent, 1u);
}

TEST(Distance, IsUltrametricOnSamples) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 2000; ++trial) {
    auto mk = [&] {
      std::size_t L = 1 + rng() % 6;
      return CyclicConfiguration(random_word(rng, 2, L), rng() % L);
    };
    auto x = mk(), y = mk(), z = mk();
    auto dxy = distance(x, y);
    auto bound = std::max(distance(x, z), distance(z, y));
    EXPECT_TRUE(dxy <= bound);
    EXPECT_EQ(distance(x, y), distance(y, x));
  }
}

TEST(SpaceTime, RowsHaveWindowWidth) {
  auto block = space_time(wall_signal_rule(), CyclicConfiguration(W(wall_signal_rule(), "wr000")), 4, -3, 8);
  ASSERT_EQ(block.rows.size(), 5u);
  for (auto& r : block.rows) EXPECT_EQ(r.size(), 12u);
}
