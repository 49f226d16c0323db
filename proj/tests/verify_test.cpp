#include "matchdist/verify.hpp"

#include <gtest/gtest.h>

#include <set>

using namespace matchdist;

TEST(Catalog, NamesAreUniqueAndDescribed) {
    std::set<std::string> names;
    for (const Property& p : property_catalog()) {
        EXPECT_FALSE(p.name.empty());
        EXPECT_FALSE(p.summary.empty());
        EXPECT_TRUE(names.insert(p.name).second) << p.name;
    }
    EXPECT_GE(names.size(), 20U);
}

TEST(RunProperties, UnknownNameIsRejected) {
    VerifyOptions o;
    o.only = "no-such-property";
    EXPECT_THROW(run_properties(o), std::invalid_argument);
}

class SingleProperty : public ::testing::TestWithParam<const char*> {};

TEST_P(SingleProperty, Passes) {
    VerifyOptions o;
    o.only = GetParam();
    auto outcomes = run_properties(o);
    ASSERT_EQ(outcomes.size(), 1U);
    EXPECT_EQ(outcomes[0].name, GetParam());
    EXPECT_TRUE(outcomes[0].pass) << outcomes[0].detail;
    EXPECT_GT(outcomes[0].cases, 0U);
}

INSTANTIATE_TEST_SUITE_P(Fast, SingleProperty,
                         ::testing::Values("matching-factorial-moments", "classical-pmf-gap", "mean-equals-variance",
                                           "derangement-count", "moment-inversion-roundtrip", "poisson-moments",
                                           "generalized-pmf-equals-thinning", "tv-minimum-attained",
                                           "exp-partial-sum-convergence"));

TEST(RunProperties, WholeCatalogPasses) {
    auto outcomes = run_properties({});
    EXPECT_EQ(outcomes.size(), property_catalog().size());
    for (const auto& o : outcomes) EXPECT_TRUE(o.pass) << o.name << ": " << o.detail;
}

TEST(RunProperties, VerdictsDoNotDependOnPrecision) {
    for (const char* name : {"fm-closed-form-vs-definition", "sandwich-bounds"}) {
        VerifyOptions lo, hi;
        lo.only = hi.only = name;
        hi.digits = 65;
        auto a = run_properties(lo), b = run_properties(hi);
        ASSERT_EQ(a.size(), 1U);
        ASSERT_EQ(b.size(), 1U);
        EXPECT_TRUE(a[0].pass) << a[0].detail;
        EXPECT_EQ(a[0].pass, b[0].pass);
        EXPECT_EQ(a[0].cases, b[0].cases);
    }
}
