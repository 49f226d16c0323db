#include "matchdist/simulation.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace matchdist {
namespace {

unsigned count_fixed_points(std::span<const unsigned> perm) {
    unsigned fixed = 0;
    for (std::size_t i = 0; i < perm.size(); ++i) fixed += perm[i] == i ? 1U : 0U;
    return fixed;
}

// Tally over all permutations whose first entry is `first`.
void tally_block(unsigned long n, unsigned first, std::vector<std::uint64_t>& tally) {
    std::vector<unsigned> perm;
    perm.reserve(n);
    perm.push_back(first);
    for (unsigned v = 0; v < n; ++v) {
        if (v != first) perm.push_back(v);
    }
    do {
        ++tally[count_fixed_points(perm)];
    } while (std::next_permutation(perm.begin() + 1, perm.end()));
}

void check_enumeration_size(unsigned long n) {
    if (n < 1) throw std::invalid_argument("enumeration needs n >= 1");
    if (n > kMaxEnumerationN) {
        throw SizeLimitError("enumeration limited to n <= " + std::to_string(kMaxEnumerationN) + ", got " +
                             std::to_string(n));
    }
}

}  // namespace

void SimConfig::validate() const {
    MatchingParams checked(n, lambda);
    (void)checked;
    if (samples < 1) throw std::invalid_argument("samples must be >= 1");
    if (workers < 1) throw std::invalid_argument("workers must be >= 1");
    if (!(z_threshold > 0.0)) throw std::invalid_argument("z threshold must be positive");
}

unsigned sample_censored_matches(std::span<unsigned> scratch, const BernoulliThreshold& keep, Xoshiro256& rng) {
    std::iota(scratch.begin(), scratch.end(), 0U);
    shuffle(scratch, rng);
    unsigned kept = 0;
    for (std::size_t i = 0; i < scratch.size(); ++i) {
        if (scratch[i] == i && keep(rng)) ++kept;
    }
    return kept;
}

unsigned sample_censored_matches(unsigned long n, const Rational& lambda, Xoshiro256& rng) {
    std::vector<unsigned> scratch(n);
    return sample_censored_matches(scratch, BernoulliThreshold(lambda), rng);
}

std::uint64_t worker_share(std::uint64_t samples, unsigned workers, unsigned worker) {
    return samples / workers + (worker < samples % workers ? 1 : 0);
}

EmpiricalPmf simulate_stream(unsigned long n, const Rational& lambda, std::uint64_t samples, std::uint64_t seed,
                             unsigned worker) {
    Xoshiro256 rng(stream_seed(seed, worker));
    const BernoulliThreshold keep(lambda);
    std::vector<unsigned> scratch(n);
    EmpiricalPmf out;
    out.counts.assign(n + 1, 0);
    for (std::uint64_t s = 0; s < samples; ++s) ++out.counts[sample_censored_matches(scratch, keep, rng)];
    out.total = samples;
    return out;
}

namespace {

EmpiricalPmf merge(const std::vector<EmpiricalPmf>& parts, unsigned long n) {
    EmpiricalPmf out;
    out.counts.assign(n + 1, 0);
    for (const auto& part : parts) {
        for (std::size_t j = 0; j < part.counts.size(); ++j) out.counts[j] += part.counts[j];
        out.total += part.total;
    }
    return out;
}

}  // namespace

EmpiricalPmf tally_serial(const SimConfig& cfg) {
    cfg.validate();
    std::vector<EmpiricalPmf> parts(cfg.workers);
    for (unsigned w = 0; w < cfg.workers; ++w) {
        parts[w] = simulate_stream(cfg.n, cfg.lambda, worker_share(cfg.samples, cfg.workers, w), cfg.seed, w);
    }
    return merge(parts, cfg.n);
}

EmpiricalPmf tally_parallel(const SimConfig& cfg) {
    cfg.validate();
    std::vector<EmpiricalPmf> parts(cfg.workers);
    const int workers = static_cast<int>(cfg.workers);
#pragma omp parallel for schedule(static)
    for (int w = 0; w < workers; ++w) {
        const auto idx = static_cast<unsigned>(w);
        parts[idx] = simulate_stream(cfg.n, cfg.lambda, worker_share(cfg.samples, cfg.workers, idx), cfg.seed, idx);
    }
    return merge(parts, cfg.n);
}

ComparisonStats compare_to_exact(const EmpiricalPmf& empirical, const FinitePmf& exact, double z_threshold) {
    if (empirical.total == 0) throw std::invalid_argument("empirical pmf has no samples");
    if (empirical.counts.size() != exact.size()) throw std::invalid_argument("empirical and exact supports differ");
    ComparisonStats stats;
    stats.per_bin_z.assign(exact.size(), 0.0);
    const double total = static_cast<double>(empirical.total);
    bool ok = true;
    for (std::size_t j = 0; j < exact.size(); ++j) {
        const double p = to_double(exact[j]);
        const double f = static_cast<double>(empirical.counts[j]) / total;
        stats.max_abs_dev = std::max(stats.max_abs_dev, std::abs(f - p));
        if (sgn(exact[j]) == 0 || exact[j] == 1) {
            const bool matches = sgn(exact[j]) == 0 ? empirical.counts[j] == 0 : empirical.counts[j] == empirical.total;
            if (!matches) {
                stats.impossible_bins.push_back(j);
                ok = false;
            }
            continue;
        }
        const double z = (f - p) / std::sqrt(p * (1.0 - p) / total);
        stats.per_bin_z[j] = z;
        if (std::abs(z) > z_threshold) ok = false;
    }
    stats.pass = ok;
    return stats;
}

MonteCarloResult run_monte_carlo(const SimConfig& cfg) {
    cfg.validate();
    EmpiricalPmf empirical = tally_parallel(cfg);
    FinitePmf exact = generalized_matching_pmf(MatchingParams(cfg.n, cfg.lambda));
    ComparisonStats stats = compare_to_exact(empirical, exact, cfg.z_threshold);
    return {std::move(empirical), std::move(exact), std::move(stats)};
}

std::vector<std::uint64_t> fixed_point_tally_serial(unsigned long n) {
    check_enumeration_size(n);
    std::vector<std::uint64_t> tally(n + 1, 0);
    std::vector<unsigned> perm(n);
    std::iota(perm.begin(), perm.end(), 0U);
    do {
        ++tally[count_fixed_points(perm)];
    } while (std::next_permutation(perm.begin(), perm.end()));
    return tally;
}

std::vector<std::uint64_t> fixed_point_tally_parallel(unsigned long n) {
    check_enumeration_size(n);
    std::vector<std::vector<std::uint64_t>> blocks(n, std::vector<std::uint64_t>(n + 1, 0));
    const int count = static_cast<int>(n);
#pragma omp parallel for schedule(dynamic, 1)
    for (int first = 0; first < count; ++first) {
        tally_block(n, static_cast<unsigned>(first), blocks[static_cast<std::size_t>(first)]);
    }
    std::vector<std::uint64_t> tally(n + 1, 0);
    for (const auto& block : blocks) {
        for (std::size_t j = 0; j <= n; ++j) tally[j] += block[j];
    }
    return tally;
}

FinitePmf enumerate_exact(unsigned long n, const Rational& lambda, EnumerationMode mode) {
    check_enumeration_size(n);
    MatchingParams params(n, lambda);
    const auto tally = mode == EnumerationMode::Serial ? fixed_point_tally_serial(n) : fixed_point_tally_parallel(n);
    const Integer total = factorial(n);
    std::vector<Rational> fixed(n + 1);
    for (std::size_t m = 0; m <= n; ++m) {
        fixed[m] = Rational(Integer(static_cast<unsigned long>(tally[m])), total);
        fixed[m].canonicalize();
    }
    FinitePmf censored = binomial_thinning(FinitePmf(std::move(fixed)), params.lambda());
    return FinitePmf(censored.probs(),
                     "enumerated(n=" + std::to_string(n) + ",lambda=" + to_fraction_string(lambda) + ")");
}

FinitePmf random_finite_pmf(Xoshiro256& rng, std::size_t max_support, unsigned max_denominator) {
    if (max_support < 1 || max_denominator < 1) throw std::invalid_argument("random_finite_pmf needs positive limits");
    const auto support = static_cast<std::size_t>(uniform_below(rng, max_support)) + 1;
    std::vector<unsigned long> weights(support, 0);
    unsigned long total = 0;
    while (total == 0) {
        total = 0;
        for (auto& w : weights) {
            w = static_cast<unsigned long>(uniform_below(rng, max_denominator + 1ULL));
            total += w;
        }
    }
    std::vector<Rational> probs(support);
    for (std::size_t j = 0; j < support; ++j) {
        probs[j] = Rational(weights[j], total);
        probs[j].canonicalize();
    }
    return FinitePmf(std::move(probs), "random");
}

}  // namespace matchdist
