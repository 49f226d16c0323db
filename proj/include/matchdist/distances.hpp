#pragma once

#include "matchdist/distributions.hpp"
#include "matchdist/high_precision.hpp"
#include "matchdist/rational.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <variant>

namespace matchdist {

/// Factorial moments of Poisson(lambda): E(Z(lambda))_k = lambda^k for every k.
/// Doubles as the Poisson law itself where a distribution is expected.
struct PoissonMoments {
    Rational lambda;

    Rational moment(unsigned long k) const { return pow(lambda, k); }
};

using MomentSource = std::variant<FactorialMomentSeq, PoissonMoments>;
using LawSource = std::variant<FinitePmf, PoissonMoments>;

class UnsupportedCombination : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Exact-or-certified distance value together with its published envelope.
struct DistanceReport {
    HighPrecision exact;
    HighPrecision integral_check;
    HighPrecision lower_bound;
    HighPrecision upper_bound;
    HighPrecision asymptotic;
    HighPrecision ratio_to_asymptotic;

    /// lower < exact < upper with slack of `margin` times the combined bounds.
    bool sandwich_holds(const Rational& margin = 10) const;
    /// |exact - integral_check| within the summed error bounds.
    bool routes_agree() const;
};

struct ReportOptions {
    int digits = kDefaultDigits;
    /// Absolute tolerance handed to the quadrature route.
    Rational quadrature_tol = decimal_ulp(12);
};

/// sum_{k>=1} alpha^{k-1}/k! |m1_k - m2_k|.
///
/// Two finite sequences give an exact result. Against PoissonMoments the
/// finite range is summed exactly and the pure-Poisson remainder
/// (1/alpha) sum_{k>K} (alpha lambda)^k / k! carries the certificate.
/// Two Poisson arguments throw UnsupportedCombination.
HighPrecision d_alpha_generic(const MomentSource& m1, const MomentSource& m2, const Rational& alpha,
                              int digits = kDefaultDigits);

/// d_alpha(Z_n(lambda), Z(lambda)) = (1/alpha) sum_{k>n} (alpha lambda)^k / k!.
HighPrecision d_alpha_matching_exact(const MatchingParams& p, const Rational& alpha, int digits = kDefaultDigits);
DistanceReport d_alpha_matching(const MatchingParams& p, const Rational& alpha, const ReportOptions& opts = {});

/// Half the l1 distance of the pmfs. Finite against finite is exact; against
/// Poisson the positive-part form over the finite support is used and the
/// Poisson masses are refined until the bound is relative 10^-digits.
HighPrecision tv_generic(const FinitePmf& p1, const LawSource& p2, int digits = kDefaultDigits);

HighPrecision tv_matching_exact(const MatchingParams& p, int digits = kDefaultDigits);
DistanceReport tv_matching(const MatchingParams& p, const ReportOptions& opts = {});

/// Published upper bounds on d_tv(Z_n, Z) for the classical problem.
struct ReferenceBounds {
    Rational diaconis;       ///< 2^n / n!
    Rational dasgupta;       ///< 2^n / (n+1)!
    HighPrecision corollary; ///< (2^n/(n+1)!) (1 + 2/(n+2) + 4e^2/((n+2)(n+3)))
};
ReferenceBounds reference_bounds(unsigned long n, int digits = kDefaultDigits);

struct MinTvResult {
    HighPrecision value;
    /// Set when lambda > 1: the Poisson tail is still the minimum over laws
    /// on {0..n}, but the censored matching model does not exist there.
    std::optional<std::string> scope_note;
};

/// min over X supported in {0..n} of d_tv(X, Poisson(lambda)) = Pr(Z(lambda) > n).
MinTvResult min_tv_over_support(unsigned long n, const Rational& lambda, int digits = kDefaultDigits);

/// d_tv(Z_n(lambda), Z(lambda)) / d_alpha(Z_n(lambda), Z(lambda)).
HighPrecision tv_fm_ratio(unsigned long n, const Rational& alpha, const Rational& lambda, int digits = kDefaultDigits);

}  // namespace matchdist
