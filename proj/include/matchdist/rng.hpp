#pragma once

#include "matchdist/rational.hpp"

#include <array>
#include <cstdint>
#include <limits>
#include <span>

namespace matchdist {

/// SplitMix64 (Steele, Lea, Flood). Used to expand seeds; its reference
/// outputs are published, so seeded streams are portable.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t state) : state_(state) {}
    std::uint64_t next();

private:
    std::uint64_t state_;
};

/// xoshiro256** 1.0 (Blackman, Vigna). Satisfies UniformRandomBitGenerator.
class Xoshiro256 {
public:
    using result_type = std::uint64_t;

    /// State filled from SplitMix64(seed), as recommended by the authors.
    explicit Xoshiro256(std::uint64_t seed);
    /// Raw state; must not be all zero.
    static Xoshiro256 from_state(const std::array<std::uint64_t, 4>& state);

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
    result_type operator()();

private:
    std::array<std::uint64_t, 4> s_{};
};

/// Seed of worker stream `index` derived from the run seed.
std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t index);

/// Uniform integer in [0, bound) by Lemire's multiply-and-reject method;
/// exact for every bound >= 1.
std::uint64_t uniform_below(Xoshiro256& rng, std::uint64_t bound);

/// Uniform random permutation of `items` in place (Fisher-Yates, drawing
/// from the high end down).
void shuffle(std::span<unsigned> items, Xoshiro256& rng);

/// Bernoulli(p) for an exact rational p in [0, 1].
///
/// A draw u is accepted iff u / 2^64 < p, decided exactly by comparing u with
/// ceil(p 2^64). The only deviation from p is the 2^-64 resolution of u.
class BernoulliThreshold {
public:
    explicit BernoulliThreshold(const Rational& p);

    bool operator()(Xoshiro256& rng) const {
        if (always_) return true;
        return rng() < threshold_;
    }

private:
    std::uint64_t threshold_ = 0;
    bool always_ = false;
};

}  // namespace matchdist
