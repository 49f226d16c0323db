#include "matchdist/rng.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <set>

using namespace matchdist;

TEST(SplitMix64, ReferenceOutputs) {
    SplitMix64 sm(1234567);
    const std::uint64_t expected[] = {6457827717110365317ULL, 3203168211198807973ULL, 9817491932198370423ULL,
                                      4593380528125082431ULL, 16408922859458223821ULL};
    for (std::uint64_t e : expected) EXPECT_EQ(sm.next(), e);
}

TEST(Xoshiro256, ReferenceOutputsFromRawState) {
    Xoshiro256 rng = Xoshiro256::from_state({1, 2, 3, 4});
    const std::uint64_t expected[] = {11520ULL, 0ULL, 1509978240ULL, 1215971899390074240ULL, 1216172134540287360ULL,
                                      607988272756665600ULL};
    for (std::uint64_t e : expected) EXPECT_EQ(rng(), e);
    EXPECT_THROW(Xoshiro256::from_state({0, 0, 0, 0}), std::invalid_argument);
}

TEST(Xoshiro256, SeededThroughSplitMix) {
    Xoshiro256 rng(42);
    EXPECT_EQ(rng(), 1546998764402558742ULL);
    EXPECT_EQ(rng(), 6990951692964543102ULL);
    EXPECT_EQ(rng(), 12544586762248559009ULL);
}

TEST(StreamSeed, DistinctAcrossWorkers) {
    std::set<std::uint64_t> seen;
    for (std::uint64_t i = 0; i < 1000; ++i) seen.insert(stream_seed(5, i));
    EXPECT_EQ(seen.size(), 1000U);
    EXPECT_EQ(stream_seed(5, 3), stream_seed(5, 3));
    EXPECT_NE(stream_seed(5, 3), stream_seed(6, 3));
}

TEST(UniformBelow, StaysInRangeAndCoversIt) {
    Xoshiro256 rng(1);
    EXPECT_THROW(uniform_below(rng, 0), std::invalid_argument);
    for (std::uint64_t bound : {1ULL, 2ULL, 3ULL, 7ULL, 1000ULL}) {
        std::vector<int> hits(bound);
        for (int i = 0; i < 20000; ++i) {
            std::uint64_t v = uniform_below(rng, bound);
            ASSERT_LT(v, bound);
            ++hits[v];
        }
        if (bound <= 7) {
            for (int h : hits) EXPECT_GT(h, 0);
        }
    }
    std::uint64_t huge = (1ULL << 63) + 12345;
    for (int i = 0; i < 1000; ++i) EXPECT_LT(uniform_below(rng, huge), huge);
}

TEST(UniformBelow, ChiSquareOnSix) {
    Xoshiro256 rng(2024);
    const int draws = 600000;
    std::array<int, 6> hits{};
    for (int i = 0; i < draws; ++i) ++hits[uniform_below(rng, 6)];
    double chi2 = 0;
    for (int h : hits) chi2 += std::pow(h - draws / 6.0, 2) / (draws / 6.0);
    EXPECT_LT(chi2, 30.0);  // 5 dof; p ~ 1.5e-5
}

TEST(Shuffle, IsAPermutation) {
    Xoshiro256 rng(3);
    std::vector<unsigned> v(50);
    std::iota(v.begin(), v.end(), 0U);
    shuffle(v, rng);
    std::vector<unsigned> sorted = v;
    std::sort(sorted.begin(), sorted.end());
    for (unsigned i = 0; i < 50; ++i) EXPECT_EQ(sorted[i], i);
}

TEST(BernoulliThreshold, Extremes) {
    Xoshiro256 rng(9);
    BernoulliThreshold never(0), always(1);
    for (int i = 0; i < 1000; ++i) {
        EXPECT_FALSE(never(rng));
        EXPECT_TRUE(always(rng));
    }
    EXPECT_THROW(BernoulliThreshold(Rational(-1, 2)), std::invalid_argument);
    EXPECT_THROW(BernoulliThreshold(Rational(3, 2)), std::invalid_argument);
}

TEST(BernoulliThreshold, ThresholdIsExactCeiling) {
    // p = 1/2 accepts exactly the draws below 2^63.
    auto half = Xoshiro256::from_state({1, 2, 3, 4});
    auto copy = half;
    BernoulliThreshold b(Rational(1, 2));
    for (int i = 0; i < 100; ++i) EXPECT_EQ(b(half), copy() < (1ULL << 63));
}

TEST(BernoulliThreshold, Frequency) {
    Xoshiro256 rng(11);
    BernoulliThreshold b(Rational(3, 10));
    const int draws = 1000000;
    int hits = 0;
    for (int i = 0; i < draws; ++i) hits += b(rng);
    double se = std::sqrt(0.3 * 0.7 / draws);
    EXPECT_LT(std::abs(hits / double(draws) - 0.3), 5 * se);
}
