#pragma once

#include "matchdist/distributions.hpp"
#include "matchdist/rational.hpp"
#include "matchdist/rng.hpp"

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace matchdist {

struct SimConfig {
    unsigned long n = 1;
    Rational lambda{1};
    std::uint64_t samples = 1;
    std::uint64_t seed = 0;
    unsigned workers = 1;
    double z_threshold = 5.0;

    /// Throws std::invalid_argument on n < 1, lambda outside (0, 1],
    /// samples < 1, workers < 1 or a non-positive z threshold.
    void validate() const;
};

struct EmpiricalPmf {
    std::vector<std::uint64_t> counts;  ///< indexed 0..n
    std::uint64_t total = 0;

    friend bool operator==(const EmpiricalPmf&, const EmpiricalPmf&) = default;
};

struct ComparisonStats {
    double max_abs_dev = 0.0;
    /// Standardized deviation per bin; 0 for bins with zero exact mass.
    std::vector<double> per_bin_z;
    /// Bins with zero exact mass that received counts.
    std::vector<std::size_t> impossible_bins;
    bool pass = false;
};

struct MonteCarloResult {
    EmpiricalPmf empirical;
    FinitePmf exact;
    ComparisonStats stats;
};

class SizeLimitError : public std::length_error {
public:
    using std::length_error::length_error;
};

/// Largest n accepted by the exhaustive enumeration (10! permutations).
inline constexpr unsigned long kMaxEnumerationN = 10;

/// One draw of Z_n(lambda): shuffle `scratch` (size n) uniformly, then keep
/// each fixed point with probability `keep`.
unsigned sample_censored_matches(std::span<unsigned> scratch, const BernoulliThreshold& keep, Xoshiro256& rng);
unsigned sample_censored_matches(unsigned long n, const Rational& lambda, Xoshiro256& rng);

/// Counts for `samples` draws from worker stream `worker`.
EmpiricalPmf simulate_stream(unsigned long n, const Rational& lambda, std::uint64_t samples, std::uint64_t seed,
                             unsigned worker);

/// Samples assigned to a worker: samples / workers, plus one for the first
/// samples % workers workers.
std::uint64_t worker_share(std::uint64_t samples, unsigned workers, unsigned worker);

/// Worker streams run one after another; reference for the parallel kernel.
EmpiricalPmf tally_serial(const SimConfig& cfg);
/// Worker streams run under OpenMP; per-worker tallies merged in worker order.
EmpiricalPmf tally_parallel(const SimConfig& cfg);

/// z_j = (f_j - p_j) / sqrt(p_j (1 - p_j) / total), skipping p_j = 0 (and
/// p_j = 1) bins, which must be matched exactly.
ComparisonStats compare_to_exact(const EmpiricalPmf& empirical, const FinitePmf& exact, double z_threshold);

/// Parallel tally compared against generalized_matching_pmf.
MonteCarloResult run_monte_carlo(const SimConfig& cfg);

/// Number of permutations of {0..n-1} with exactly j fixed points, by
/// walking all n! permutations in lexicographic order.
std::vector<std::uint64_t> fixed_point_tally_serial(unsigned long n);
/// Same tally, partitioned by the first entry across OpenMP threads.
std::vector<std::uint64_t> fixed_point_tally_parallel(unsigned long n);

enum class EnumerationMode { Serial, Parallel };

/// Exact pmf of Z_n(lambda) from the permutation tally and Binomial(m, lambda)
/// censoring weights; throws SizeLimitError for n > kMaxEnumerationN.
FinitePmf enumerate_exact(unsigned long n, const Rational& lambda, EnumerationMode mode = EnumerationMode::Serial);

/// Random pmf for property suites: support size uniform on 1..max_support,
/// masses are integers in [0, max_denominator] normalized by their sum.
FinitePmf random_finite_pmf(Xoshiro256& rng, std::size_t max_support = 12, unsigned max_denominator = 1000);

}  // namespace matchdist
