#include "matchdist/rng.hpp"

#include <stdexcept>
#include <utility>

namespace matchdist {
namespace {

constexpr std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

}  // namespace

std::uint64_t SplitMix64::next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

Xoshiro256::Xoshiro256(std::uint64_t seed) {
    SplitMix64 sm(seed);
    for (auto& word : s_) word = sm.next();
}

Xoshiro256 Xoshiro256::from_state(const std::array<std::uint64_t, 4>& state) {
    if (state == std::array<std::uint64_t, 4>{}) throw std::invalid_argument("xoshiro state must not be all zero");
    Xoshiro256 rng(0);
    rng.s_ = state;
    return rng;
}

Xoshiro256::result_type Xoshiro256::operator()() {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
}

std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t index) {
    SplitMix64 mix(seed ^ (0x6a09e667f3bcc909ULL * (index + 1)));
    mix.next();
    return mix.next();
}

std::uint64_t uniform_below(Xoshiro256& rng, std::uint64_t bound) {
    if (bound == 0) throw std::invalid_argument("uniform_below needs bound >= 1");
    using u128 = unsigned __int128;
    u128 m = static_cast<u128>(rng()) * bound;
    auto low = static_cast<std::uint64_t>(m);
    if (low < bound) {
        const std::uint64_t threshold = (0 - bound) % bound;
        while (low < threshold) {
            m = static_cast<u128>(rng()) * bound;
            low = static_cast<std::uint64_t>(m);
        }
    }
    return static_cast<std::uint64_t>(m >> 64);
}

void shuffle(std::span<unsigned> items, Xoshiro256& rng) {
    for (std::size_t i = items.size(); i > 1; --i) {
        const auto j = static_cast<std::size_t>(uniform_below(rng, i));
        std::swap(items[i - 1], items[j]);
    }
}

BernoulliThreshold::BernoulliThreshold(const Rational& p) {
    if (sgn(p) < 0 || p > 1) throw std::invalid_argument("Bernoulli probability must lie in [0, 1]");
    if (p == 1) {
        always_ = true;
        return;
    }
    // ceil(p * 2^64) < 2^64 because p < 1.
    Integer scaled = p.get_num();
    mpz_mul_2exp(scaled.get_mpz_t(), scaled.get_mpz_t(), 64);
    Integer t;
    mpz_cdiv_q(t.get_mpz_t(), scaled.get_mpz_t(), p.get_den_mpz_t());
    threshold_ = 0;
    for (int limb = 1; limb >= 0; --limb) {
        Integer part;
        mpz_fdiv_q_2exp(part.get_mpz_t(), t.get_mpz_t(), static_cast<mp_bitcnt_t>(32 * limb));
        mpz_fdiv_r_2exp(part.get_mpz_t(), part.get_mpz_t(), 32);
        threshold_ = (threshold_ << 32) | part.get_ui();
    }
}

}  // namespace matchdist
