#pragma once

#include "matchdist/high_precision.hpp"
#include "matchdist/rational.hpp"

#include <string>
#include <vector>

namespace matchdist {

/// Exact probability mass function on {0, ..., n}.
///
/// Construction checks the invariants (non-negative entries summing to
/// exactly 1) and throws std::invalid_argument otherwise.
class FinitePmf {
public:
    FinitePmf(std::vector<Rational> probs, std::string label = {});

    const std::vector<Rational>& probs() const { return probs_; }
    const Rational& operator[](std::size_t j) const { return probs_[j]; }
    /// Mass at j, zero beyond the stored support.
    Rational at(std::size_t j) const { return j < probs_.size() ? probs_[j] : Rational(0); }
    std::size_t size() const { return probs_.size(); }
    /// Largest index carried (n for support {0..n}).
    std::size_t max_index() const { return probs_.size() - 1; }
    const std::string& label() const { return label_; }

    friend bool operator==(const FinitePmf& a, const FinitePmf& b) { return a.probs_ == b.probs_; }

private:
    std::vector<Rational> probs_;
    std::string label_;
};

FinitePmf point_mass(std::size_t at);

/// k -> E(X)_k for k = 0..K. Orders beyond K are zero.
struct FactorialMomentSeq {
    std::vector<Rational> moments;

    std::size_t max_order() const { return moments.empty() ? 0 : moments.size() - 1; }
    Rational at(std::size_t k) const { return k < moments.size() ? moments[k] : Rational(0); }
    friend bool operator==(const FactorialMomentSeq&, const FactorialMomentSeq&) = default;
};

/// Output of moment inversion; entries may be negative when the moments do
/// not belong to any distribution.
struct SignedMassSeq {
    std::vector<Rational> values;
    bool is_pmf = false;
};

/// Number of items n and retention probability lambda of the censored
/// matching model; 0 < lambda <= 1 and n >= 1 are enforced on construction.
class MatchingParams {
public:
    MatchingParams(unsigned long n, Rational lambda);

    unsigned long n() const { return n_; }
    const Rational& lambda() const { return lambda_; }

private:
    unsigned long n_;
    Rational lambda_;
};

/// Fixed points of a uniform random permutation of n items.
FinitePmf classical_matching_pmf(unsigned long n);

enum class PmfMethod {
    Series,              ///< (lambda^j / j!) sum_{i<=n-j} (-lambda)^i / i!
    InclusionExclusion,  ///< sum_{i>=j} (-1)^{i-j} C(i,j) S_i with S_i = lambda^i / i!
};

/// Censored matching count: each fixed point is kept with probability lambda.
FinitePmf generalized_matching_pmf(const MatchingParams& p, PmfMethod method = PmfMethod::Series);

/// Binomial(m, lambda) thinning of the classical pmf; independent of
/// generalized_matching_pmf.
FinitePmf thinning_pmf(const MatchingParams& p);

/// Thins an arbitrary pmf: each unit of the count survives with
/// probability lambda (0 <= lambda <= 1).
FinitePmf binomial_thinning(const FinitePmf& pmf, const Rational& lambda);

/// e^-lambda lambda^j / j! for j = 0..n, each with a certified bound.
std::vector<HighPrecision> poisson_pmf_prefix(const Rational& lambda, unsigned long n, int digits = kDefaultDigits);

/// (x)_k = x (x-1) ... (x-k+1), (x)_0 = 1.
Integer falling_factorial(unsigned long x, unsigned long k);

/// E(X)_k for k = 0..kmax, exactly.
FactorialMomentSeq factorial_moments(const FinitePmf& pmf, std::size_t kmax);
/// All non-trivial orders: kmax = max_index().
FactorialMomentSeq factorial_moments(const FinitePmf& pmf);

/// E(Z_n(lambda))_k = lambda^k for k <= n, 0 afterwards.
Rational matching_factorial_moment(const MatchingParams& p, unsigned long k);

/// p(j) = sum_{k>=j} (-1)^{k-j} C(k,j) m_k / k! for a finite moment sequence
/// with moments[0] = 1 (std::invalid_argument otherwise).
SignedMassSeq invert_factorial_moments(const FactorialMomentSeq& m);

/// sum_j probs[j] u^j.
Rational pgf_eval(const FinitePmf& pmf, const Rational& u);

}  // namespace matchdist
