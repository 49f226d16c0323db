#include "matchdist/distances.hpp"
#include "matchdist/numerics.hpp"
#include "matchdist/simulation.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

using namespace matchdist;
using matchdist::testing::near;

namespace {
const char* kTv3 = "0.237473985299983958138555601478";
const char* kFm3 = "0.527861382798658446948547063621";
const char* kFm1 = "2.19452804946532511361521373029";
const char* kFm5 = "0.0611947161319917802818803969542";
const char* kOneMinusInvE = "0.632120558828557678404476229839";

FactorialMomentSeq moments_of(std::initializer_list<int> xs) {
    FactorialMomentSeq m;
    for (int x : xs) m.moments.emplace_back(x);
    return m;
}
}  // namespace

TEST(DAlphaGeneric, ExampleValues) {
    FactorialMomentSeq d0 = factorial_moments(point_mass(0), 1);
    FactorialMomentSeq d1 = factorial_moments(point_mass(1), 1);
    for (const Rational& a : {Rational(1, 2), Rational(1), Rational(3)}) {
        HighPrecision v = d_alpha_generic(d0, d1, a);
        EXPECT_EQ(v.value(), 1);
        EXPECT_TRUE(v.is_exact());
        EXPECT_EQ(d_alpha_generic(d1, d1, a).value(), 0);
    }
    EXPECT_EQ(d_alpha_generic(moments_of({1, 1, 1}), d0, 1).value(), Rational(3, 2));
}

TEST(DAlphaGeneric, BothPoissonIsUnsupported) {
    EXPECT_THROW(d_alpha_generic(PoissonMoments{1}, PoissonMoments{Rational(1, 2)}, 1), UnsupportedCombination);
    EXPECT_THROW(d_alpha_generic(moments_of({1}), moments_of({1}), 0), std::invalid_argument);
}

TEST(DAlphaGeneric, AgainstPoissonIsSymmetric) {
    FactorialMomentSeq m = factorial_moments(generalized_matching_pmf({4, Rational(1, 2)}));
    HighPrecision a = d_alpha_generic(m, PoissonMoments{Rational(1, 2)}, 2, 30);
    HighPrecision b = d_alpha_generic(PoissonMoments{Rational(1, 2)}, m, 2, 30);
    EXPECT_TRUE(consistent(a, b));
    EXPECT_TRUE(a.relative_error_below(30));
}

TEST(DAlphaMatching, ExampleValues) {
    EXPECT_TRUE(near(d_alpha_matching_exact({3, 1}, 2), kFm3, 29));
    EXPECT_TRUE(near(d_alpha_matching_exact({1, 1}, 2), kFm1, 29));
    DistanceReport r = d_alpha_matching({5, 1}, 2);
    EXPECT_TRUE(near(r.exact, kFm5, 30));
    EXPECT_TRUE(near(r.lower_bound, "0.0603174603174603174603174603175", 30));
    EXPECT_TRUE(near(r.upper_bound, "0.0806001780918433340547", 21));
    EXPECT_TRUE(r.sandwich_holds());
    EXPECT_TRUE(r.routes_agree());
}

TEST(DAlphaMatching, ClosedFormMatchesDefinition) {
    for (unsigned long n = 1; n <= 20; n += 3) {
        for (const Rational& l : {Rational(1, 10), Rational(1)}) {
            MatchingParams p(n, l);
            FactorialMomentSeq m = factorial_moments(generalized_matching_pmf(p));
            for (const Rational& a : {Rational(1, 2), Rational(3)}) {
                EXPECT_TRUE(consistent(d_alpha_matching_exact(p, a, 30), d_alpha_generic(m, PoissonMoments{l}, a, 30)));
            }
        }
    }
}

TEST(TvGeneric, ExampleValues) {
    HighPrecision disjoint = tv_generic(point_mass(0), point_mass(1));
    EXPECT_EQ(disjoint.value(), 1);
    EXPECT_TRUE(disjoint.is_exact());
    EXPECT_TRUE(near(tv_generic(point_mass(1), PoissonMoments{1}), kOneMinusInvE, 29));
    EXPECT_TRUE(near(tv_generic(classical_matching_pmf(3), PoissonMoments{1}), kTv3, 29));
    FinitePmf a(std::vector<Rational>{Rational(1, 2), Rational(1, 2)});
    FinitePmf b(std::vector<Rational>{Rational(1, 4), Rational(1, 4), Rational(1, 2)});
    EXPECT_EQ(tv_generic(a, b).value(), Rational(1, 2));
}

TEST(TvGeneric, TinyDistancesKeepRelativePrecision) {
    HighPrecision v = tv_matching_exact({30, Rational(1, 10)});
    EXPECT_GT(v.value(), 0);
    EXPECT_TRUE(v.relative_error_below(50));
}

TEST(TvMatching, ExampleValues) {
    DistanceReport r = tv_matching({3, 1});
    EXPECT_TRUE(near(r.exact, kTv3, 29));
    EXPECT_TRUE(near(r.lower_bound, "0.208333333333333333333333333333", 29));
    EXPECT_TRUE(near(r.upper_bound, "0.244444444444444444444444444444", 29));
    EXPECT_TRUE(near(r.ratio_to_asymptotic, "0.712421955899951874", 17));
    EXPECT_TRUE(r.sandwich_holds());
    EXPECT_TRUE(r.routes_agree());

    DistanceReport one = tv_matching({1, 1});
    EXPECT_TRUE(near(one.exact, kOneMinusInvE, 29));
    EXPECT_TRUE(near(one.integral_check, kOneMinusInvE, 11));
    EXPECT_TRUE(one.routes_agree());
}

TEST(Reports, SandwichAndRoutesOnSubGrid) {
    for (unsigned long n : {1UL, 2UL, 9UL, 30UL}) {
        for (const Rational& l : {Rational(1, 10), Rational(1, 2), Rational(1)}) {
            DistanceReport tv = tv_matching({n, l});
            EXPECT_TRUE(tv.sandwich_holds()) << n << " " << l;
            EXPECT_TRUE(tv.routes_agree()) << n << " " << l;
            for (const Rational& a : {Rational(1, 2), Rational(3)}) {
                DistanceReport fm = d_alpha_matching({n, l}, a);
                EXPECT_TRUE(fm.sandwich_holds()) << n << " " << l << " " << a;
                EXPECT_TRUE(fm.routes_agree()) << n << " " << l << " " << a;
            }
        }
    }
}

TEST(Reports, RateAtThirty) {
    Rational tol = Rational(2, 32) + Rational(1, 100);
    HighPrecision tv = tv_matching({30, 1}).ratio_to_asymptotic;
    EXPECT_LT(abs(tv.value() - 1) + tv.error_bound(), tol);
    HighPrecision fm = d_alpha_matching({30, 1}, 2).ratio_to_asymptotic;
    EXPECT_LT(abs(fm.value() - 1) + fm.error_bound(), tol);
}

TEST(ReferenceBounds, SmallCases) {
    ReferenceBounds b3 = reference_bounds(3);
    EXPECT_EQ(b3.diaconis, Rational(4, 3));
    EXPECT_EQ(b3.dasgupta, Rational(1, 3));
    EXPECT_TRUE(near(b3.corollary, "0.795069159952473343", 17));
    EXPECT_EQ(reference_bounds(1).dasgupta, 1);
    for (unsigned long n = 1; n <= 10; ++n) {
        ReferenceBounds b = reference_bounds(n, 20);
        EXPECT_GE(b.diaconis, b.dasgupta);
        EXPECT_TRUE(certainly_less(tv_matching_exact({n, 1}, 20), b.corollary));
    }
}

TEST(MinTv, ExampleValues) {
    MinTvResult three = min_tv_over_support(3, 1);
    EXPECT_TRUE(near(three.value, "0.0189881568761538090786", 22));
    EXPECT_FALSE(three.scope_note.has_value());
    EXPECT_TRUE(near(min_tv_over_support(0, 1).value, kOneMinusInvE, 29));
    EXPECT_TRUE(min_tv_over_support(3, 2).scope_note.has_value());

    HighPrecision ten = min_tv_over_support(10, 1).value;
    HighPrecision lo = exp_eval(-1, 30) * (Rational(1) / Rational(factorial(11)));
    HighPrecision hi = lo * (HighPrecision::exact(1) + (exp_eval(1, 30) - HighPrecision::exact(1)) * Rational(1, 12));
    EXPECT_TRUE(certainly_less(lo, ten));
    EXPECT_TRUE(certainly_less(ten, hi));
}

TEST(MinTv, AttainedByDominatingPmf) {
    // Masses 1/j! scaled by 1/e rounded up to rationals, remainder at 0.
    std::vector<Rational> probs(4);
    Rational rest = 1;
    for (unsigned j = 1; j <= 3; ++j) {
        probs[j] = Rational(37, 100) / Rational(factorial(j));
        rest -= probs[j];
    }
    probs[0] = rest;
    FinitePmf x(probs);
    std::vector<HighPrecision> pz = poisson_pmf_prefix(1, 3);
    for (unsigned j = 0; j <= 3; ++j) ASSERT_TRUE(certainly_less(pz[j], HighPrecision::exact(x[j])));
    EXPECT_TRUE(consistent(tv_generic(x, PoissonMoments{1}), min_tv_over_support(3, 1).value));
}

TEST(TvFmRatio, GrowthAndDomination) {
    HighPrecision r12 = tv_fm_ratio(12, 1, 1, 30);
    EXPECT_GE(r12.lower(), 3000);
    EXPECT_LE(r12.upper(), 3500);
    for (unsigned long n = 5; n <= 20; ++n) EXPECT_LT(tv_fm_ratio(n, 2, 1, 30).upper(), 1) << n;
}

TEST(Properties, DominationAndMonotonicityOnRandomPairs) {
    Xoshiro256 rng(7);
    for (int trial = 0; trial < 100; ++trial) {
        FinitePmf a = random_finite_pmf(rng);
        FinitePmf b = random_finite_pmf(rng);
        FactorialMomentSeq ma = factorial_moments(a), mb = factorial_moments(b);
        HighPrecision d2 = d_alpha_generic(ma, mb, 2);
        EXPECT_LE(tv_generic(a, b).value(), d2.value());
        EXPECT_LE(d_alpha_generic(ma, mb, Rational(1, 2)).value(), d_alpha_generic(ma, mb, 1).value());
        EXPECT_LE(d2.value(), d_alpha_generic(ma, mb, 3).value());
    }
}
