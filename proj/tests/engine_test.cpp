#include "menon/engine.hpp"

#include <gtest/gtest.h>

#include <numeric>

namespace menon {
namespace {

IdentityInstance make(std::int64_t n, FunctionSpec f, std::vector<DirichletCharacter> chars,
                      std::vector<std::int64_t> shifts, std::vector<std::int64_t> weights) {
  IdentityInstance inst;
  inst.n = n;
  inst.f = std::move(f);
  inst.chars = std::move(chars);
  inst.shifts = std::move(shifts);
  inst.weights = std::move(weights);
  return inst;
}

CycElement root_times(std::int64_t num, std::int64_t den, std::int64_t c, std::int64_t level) {
  return scale(CycElement::embed(CharValue::root(AngleFraction(num, den)), level), c);
}

TEST(MenonSumTest, SmallValues) {
  EXPECT_EQ(menon_sum(1), 1);
  EXPECT_EQ(menon_sum(6), 8);
  EXPECT_EQ(menon_sum(12), 24);
  for (std::int64_t n = 1; n <= 100; ++n) {
    ASSERT_EQ(menon_sum(n), BigInt(euler_phi(n)) * tau(n));
    ASSERT_TRUE(eq1_check(n).equal) << n;
  }
}

TEST(TwistedMenonTest, TwistedMenon) {
  // n = 12, conductor 3: phi(12) tau(4) = 12.
  const auto chi = DirichletCharacter::from_index(12, 1);
  EXPECT_TRUE(equals(twisted_menon_sum(chi), CycElement::embed(BigInt(12), instance_level(12))));
  for (std::int64_t n = 1; n <= 30; ++n) {
    for (const auto& c : enumerate_characters(n)) ASSERT_TRUE(eq2_check(c).equal) << c.label();
  }
}

TEST(AdditiveIdentityTest, KnownValues) {
  // n = 6, w = 3: principal gives phi(6) sigma(3) = 8, conductor 3 gives 2.
  const auto a = theorem1_check(DirichletCharacter::from_index(6, 0), {3});
  ASSERT_TRUE(a.lhs && a.rhs);
  EXPECT_TRUE(a.equal);
  EXPECT_TRUE(equals(*a.lhs, CycElement::embed(BigInt(8), a.lhs->level())));
  const auto b = theorem1_check(DirichletCharacter::from_index(6, 1), {3});
  EXPECT_TRUE(b.equal);
  EXPECT_TRUE(equals(*b.lhs, CycElement::embed(BigInt(2), b.lhs->level())));
  EXPECT_TRUE(equals(theorem1_rhs(DirichletCharacter::from_index(6, 1), {3}), *b.lhs));
}

TEST(GeneralIdentityTest, FrozenComplexValues) {
  // Frozen from tests/oracle/oracle.py (direct complex enumeration).
  const std::int64_t l7 = instance_level(7);
  const std::vector<std::pair<std::int64_t, std::int64_t>> sixths = {{0, 0}, {1, 6}, {2, 6}, {3, 6}, {4, 6}, {5, 6}};
  auto inst = make(7, FunctionSpec::tau(), {}, {3}, {});
  inst.chars = {DirichletCharacter::principal(7)};
  EXPECT_TRUE(equals(theorem2_lhs_brute(inst), CycElement::embed(BigInt(7), l7)));
  for (std::int64_t i = 1; i < 6; ++i) {
    inst.chars = {DirichletCharacter::from_index(7, i)};
    const auto expected = root_times(sixths[i].first, sixths[i].second, 1, l7);
    EXPECT_TRUE(equals(theorem2_lhs_brute(inst), expected)) << i;
    EXPECT_TRUE(equals(theorem2_rhs_closed(inst), expected)) << i;
  }

  const auto n9 = make(9, FunctionSpec::identity(), {DirichletCharacter::from_index(9, 1)}, {2}, {3});
  EXPECT_TRUE(equals(theorem2_lhs_brute(n9), root_times(1, 6, 6, instance_level(9))));
  EXPECT_TRUE(equals(theorem2_rhs_closed(n9), root_times(1, 6, 6, instance_level(9))));

  const auto n12 = make(12, FunctionSpec::tau(),
                        {DirichletCharacter::from_index(12, 1), DirichletCharacter::from_index(12, 2)}, {1, 5}, {2});
  EXPECT_TRUE(equals(theorem2_lhs_brute(n12), CycElement::embed(BigInt(1), instance_level(12))));
  EXPECT_TRUE(equals(theorem2_rhs_closed(n12), CycElement::embed(BigInt(1), instance_level(12))));
}

TEST(GeneralIdentityTest, NoCharacters) {
  // Frozen oracle values: n = 8, F = identity.
  const auto a = make(8, FunctionSpec::identity(), {}, {}, {4, 2});
  EXPECT_TRUE(equals(theorem2_lhs_brute(a), CycElement::embed(BigInt(12), instance_level(8))));
  EXPECT_TRUE(equals(theorem2_rhs_closed(a), CycElement::embed(BigInt(12), instance_level(8))));
  const auto b = make(8, FunctionSpec::identity(), {}, {}, {1});
  EXPECT_TRUE(verify(b).equal);
  EXPECT_TRUE(equals(*verify(b).rhs, CycElement::embed(BigInt(4), instance_level(8))));
  EXPECT_THROW(make(10, FunctionSpec::sigma(1), {}, {}, {}).validate(), std::invalid_argument);
}

TEST(GeneralIdentityTest, KnownExamples) {
  const auto base = make(6, FunctionSpec::identity(), {DirichletCharacter::principal(6)}, {1}, {});
  EXPECT_TRUE(equals(theorem2_lhs_brute(base), CycElement::embed(BigInt(8), instance_level(6))));

  auto four = make(4, FunctionSpec::identity(), {DirichletCharacter::principal(4)}, {1}, {0});
  EXPECT_TRUE(equals(theorem2_rhs_closed(four), CycElement::embed(BigInt(14), instance_level(4))));
  EXPECT_TRUE(verify(four).equal);

  // Shift sharing a factor with the conductor: both sides vanish.
  const auto vanish = make(4, FunctionSpec::identity(), {DirichletCharacter::from_index(4, 1)}, {2}, {});
  const auto report = verify(vanish);
  EXPECT_TRUE(report.equal);
  EXPECT_TRUE(is_zero(*report.lhs));
  EXPECT_TRUE(is_zero(*report.rhs));
}

TEST(GeneralIdentityTest, NegativeAndLargeShiftsAndWeights) {
  for (std::int64_t s : {-1, -7, 13, 25}) {
    for (std::int64_t w : {-3, 0, 14}) {
      for (const auto& chi : enumerate_characters(12)) {
        const auto inst = make(12, FunctionSpec::tau(), {chi}, {s}, {w});
        ASSERT_TRUE(verify(inst).equal) << chi.label() << " s=" << s << " w=" << w;
      }
    }
  }
}

TEST(GeneralIdentityTest, ValidateRejectsMalformed) {
  EXPECT_THROW(make(6, FunctionSpec::identity(), {DirichletCharacter::principal(6)}, {}, {}).validate(),
               std::invalid_argument);
  EXPECT_THROW(make(6, FunctionSpec::identity(), {DirichletCharacter::principal(4)}, {1}, {}).validate(),
               std::invalid_argument);
  EXPECT_THROW(make(0, FunctionSpec::identity(), {}, {}, {}).validate(), std::invalid_argument);
  EXPECT_THROW(make(6, FunctionSpec::table({1, 2, 3}), {}, {}, {}).validate(), std::invalid_argument);
}

TEST(GeneralIdentityTest, BudgetIsEnforcedBeforeWork) {
  const auto inst = make(30, FunctionSpec::identity(), {DirichletCharacter::principal(30)}, {1}, {0, 0});
  EXPECT_EQ(brute_cost(inst), 27000u);
  EXPECT_THROW(theorem2_lhs_brute(inst, 26999), BudgetExceeded);
  EXPECT_THROW(theorem2_lhs_float(inst, 26999), BudgetExceeded);
  EXPECT_NO_THROW(theorem2_lhs_brute(inst, 27000));
}

TEST(GeneralIdentityTest, HugeFunctionValuesStayExact) {
  // power(40) overflows 64 bits immediately; the accumulator must spill.
  const auto inst = make(12, FunctionSpec::power(40), {DirichletCharacter::from_index(12, 2)}, {1}, {0});
  const auto report = verify(inst);
  EXPECT_TRUE(report.equal);
  const auto twice = make(12, FunctionSpec::power(40), {DirichletCharacter::from_index(12, 2)}, {5}, {0});
  EXPECT_TRUE(verify(twice).equal);
}

TEST(GeneralIdentityTest, IntegerTableFunction) {
  const auto f = FunctionSpec::table({3, -1, 4, 1, -5, 9, 2, 6, 5, 3, 5, 8});
  for (const auto& chi : enumerate_characters(12)) {
    ASSERT_TRUE(verify(make(12, f, {chi}, {5}, {4})).equal) << chi.label();
  }
}

TEST(StarredTermsTest, SubstitutionIsABijection) {
  for (std::int64_t n = 1; n <= 24; ++n) {
    for (const auto& chi : enumerate_characters(n)) {
      for (std::int64_t s : {1, 2, 5}) {
        for (std::int64_t w : {0, 2, 3}) {
          const auto inst = make(n, FunctionSpec::sigma(2), {chi}, {s}, {w});
          ASSERT_EQ(starred_terms_direct(inst), starred_terms_substituted(inst)) << chi.label();
        }
      }
    }
  }
}

TEST(LemmaTest, CountingLemma) {
  EXPECT_EQ(lemma1_count_brute(12, 4, 3, 1, 2), 1);
  EXPECT_EQ(lemma1_count_closed(12, 4, 3, 1, 2), 1);
  EXPECT_EQ(lemma1_count_closed(12, 2, 2, 1, 1), 4);
  EXPECT_EQ(lemma1_count_brute(12, 4, 6, 1, 5), 1);
  EXPECT_EQ(lemma1_count_closed(12, 4, 6, 1, 5), 1);
  EXPECT_EQ(lemma1_count_closed(12, 4, 1, 1, 0), 2);
  EXPECT_EQ(lemma1_count_closed(12, 4, 1, 2, 0), 0);
  EXPECT_EQ(lemma1_count_closed(12, 1, 1, 0, 0), 4);
  EXPECT_THROW(lemma1_count_closed(12, 5, 1, 1, 0), std::invalid_argument);
  EXPECT_THROW(lemma1_count_brute(12, 1, 7, 1, 0), std::invalid_argument);
  for (std::int64_t n = 1; n <= 48; ++n) {
    for (std::int64_t d : divisors(n)) {
      for (std::int64_t e : divisors(n)) {
        for (std::int64_t r = 0; r < d; ++r) {
          if (std::gcd(r, d) != 1) continue;
          for (std::int64_t s = 0; s < e; ++s) {
            if (std::gcd(s, e) != 1) continue;
            ASSERT_EQ(lemma1_count_brute(n, d, e, r, s), lemma1_count_closed(n, d, e, r, s));
          }
        }
      }
    }
  }
}

TEST(LemmaTest, PrimitiveResidueSumVanishes) {
  for (std::int64_t n = 2; n <= 40; ++n) {
    for (const auto& chi : enumerate_characters(n)) {
      if (!is_primitive(chi)) {
        EXPECT_THROW(lemma2_residue_sum(chi, 1, 0), std::invalid_argument);
        continue;
      }
      for (std::int64_t e : divisors(n)) {
        if (e == n) continue;
        for (std::int64_t s = 0; s < e; ++s) ASSERT_TRUE(is_zero(lemma2_residue_sum(chi, e, s))) << chi.label();
      }
    }
  }
}

TEST(LemmaTest, RestrictedCharacterSumExamples) {
  const auto chi4 = DirichletCharacter::from_index(4, 1);
  const auto minus_one = scale(CycElement::embed(BigInt(1), instance_level(4)), -1);
  EXPECT_TRUE(equals(lemma3_sum_brute(chi4, 4, 3), minus_one));
  EXPECT_TRUE(equals(lemma3_sum_closed(chi4, 4, 3), minus_one));
  const auto chi8 = DirichletCharacter::from_index(8, 1);
  ASSERT_EQ(conductor(chi8), 8);
  EXPECT_TRUE(is_zero(lemma3_sum_brute(chi8, 2, 1)));
  EXPECT_TRUE(is_zero(lemma3_sum_closed(chi8, 2, 1)));
  EXPECT_TRUE(equals(lemma3_sum_closed(DirichletCharacter::principal(15), 1, 0),
                     CycElement::embed(BigInt(8), instance_level(15))));
  EXPECT_THROW(lemma3_sum_closed(chi8, 3, 1), std::invalid_argument);
  // e = n is outside the vanishing range.
  EXPECT_FALSE(is_zero(lemma2_residue_sum(chi4, 4, 1)));
  EXPECT_TRUE(is_zero(lemma2_residue_sum(chi4, 2, 1)));
}

TEST(LemmaTest, RestrictedCharacterSum) {
  for (std::int64_t n = 1; n <= 40; ++n) {
    for (const auto& chi : enumerate_characters(n)) {
      for (std::int64_t e : divisors(n)) {
        for (std::int64_t s = 0; s < e; ++s) {
          if (std::gcd(s, e) != 1) continue;
          ASSERT_TRUE(equals(lemma3_sum_brute(chi, e, s), lemma3_sum_closed(chi, e, s)))
              << chi.label() << " e=" << e << " s=" << s;
        }
      }
    }
  }
}

TEST(LemmaTest, AdditiveCollapse) {
  EXPECT_TRUE(equals(additive_collapse_brute(8, 2, 4), CycElement::embed(BigInt(2), 8)));
  EXPECT_TRUE(equals(additive_collapse_brute(6, 2, 3), CycElement::embed(BigInt(2), 6)));
  EXPECT_TRUE(is_zero(additive_collapse_brute(6, 1, 3)));
  EXPECT_TRUE(is_zero(additive_collapse_closed(6, 1, 3)));
  EXPECT_THROW(additive_collapse_closed(6, 1, 4), std::invalid_argument);
  for (std::int64_t n = 1; n <= 40; ++n) {
    for (std::int64_t e : divisors(n)) {
      for (std::int64_t w = -n; w <= n; ++w) {
        ASSERT_TRUE(equals(additive_collapse_brute(n, w, e), additive_collapse_closed(n, w, e)));
      }
    }
  }
}

TEST(FloatTest, MatchesExact) {
  const auto inst = make(9, FunctionSpec::identity(), {DirichletCharacter::from_index(9, 1)}, {2}, {3});
  const auto lhs = theorem2_lhs_float(inst);
  EXPECT_NEAR(lhs.real(), 3.0, 1e-9);
  EXPECT_NEAR(lhs.imag(), 5.196152422706632, 1e-9);
  EXPECT_NEAR(std::abs(theorem2_rhs_float(inst) - lhs), 0.0, 1e-9);
}

TEST(FloatTest, RealTableOnlyInFloatMode) {
  const auto f = FunctionSpec::real_table({0.5, 1.5, -2.25, 0.125, 3.0, 7.75});
  const auto inst = make(6, f, {DirichletCharacter::from_index(6, 1)}, {1}, {2});
  EXPECT_NEAR(std::abs(theorem2_lhs_float(inst) - theorem2_rhs_float(inst)), 0.0, 1e-9);
  EXPECT_THROW(verify(inst, {Mode::kExact, kDefaultBudget}), std::invalid_argument);
  EXPECT_TRUE(verify(inst, {Mode::kFloat, kDefaultBudget}).equal);
}

TEST(VerifyTest, ModesPopulateFields) {
  const auto inst = make(10, FunctionSpec::phi(), {DirichletCharacter::from_index(10, 1)}, {3}, {5});
  const auto exact = verify(inst, {Mode::kExact, kDefaultBudget});
  EXPECT_TRUE(exact.lhs && exact.rhs);
  EXPECT_EQ(exact.kind, "theorem2");
  EXPECT_EQ(exact.conductors, std::vector<std::int64_t>{5});
  const auto flt = verify(inst, {Mode::kFloat, kDefaultBudget});
  EXPECT_FALSE(flt.lhs.has_value());
  EXPECT_TRUE(flt.equal);
  const auto both = verify(inst, {Mode::kBoth, kDefaultBudget});
  EXPECT_TRUE(both.lhs && both.equal);
  EXPECT_NEAR(std::abs(both.lhs_float - to_complex(*both.lhs)), 0.0, 1e-9);
  EXPECT_EQ(parse_mode("both"), Mode::kBoth);
  EXPECT_THROW(parse_mode("fast"), std::invalid_argument);
}

TEST(IntegralityTest, CountsChecksWithoutFailures) {
  reset_integrality_stats();
  for (std::int64_t n = 1; n <= 30; ++n) {
    for (const auto& chi : enumerate_characters(n)) {
      theorem2_rhs_closed(make(n, FunctionSpec::sigma(1), {chi, chi}, {1, 7}, {}));
    }
  }
  const auto stats = integrality_stats();
  EXPECT_GT(stats.checks, 0u);
  EXPECT_EQ(stats.failures, 0u);
}

}  // namespace
}  // namespace menon
