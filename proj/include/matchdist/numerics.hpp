#pragma once

#include "matchdist/high_precision.hpp"
#include "matchdist/rational.hpp"

#include <stdexcept>

namespace matchdist {

/// Thrown when two evaluation routes that must agree do not.
class CrossCheckError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// sum_{k=0}^{n} x^k / k!, exactly.
Rational exp_partial_sum(const Rational& x, unsigned long n);

/// e^x with a certified bound meeting the HighPrecision contract.
///
/// Terms are summed until the geometric tail certificate
///   |x|^(K+1) / ((K+1)! (1 - |x|/(K+2))),   K + 2 > |x|
/// drops below 10^-(digits+5) of the partial sum.
HighPrecision exp_eval(const Rational& x, int digits = kDefaultDigits);

/// sum_{k>n} x^k / k!, summed directly so the result keeps full relative
/// precision even when it is many orders of magnitude below e^x.
HighPrecision exp_tail(const Rational& x, unsigned long n, int digits = kDefaultDigits);

/// Pr(Poisson(lambda) > n) = e^-lambda * sum_{j>n} lambda^j / j!.
/// Requires lambda > 0.
HighPrecision poisson_tail(const Rational& lambda, unsigned long n, int digits = kDefaultDigits);

/// (1/n!) * integral_0^x (x-y)^n e^y dy, evaluated by quadrature and
/// checked against exp_eval(x) - exp_partial_sum(x, n). Throws
/// CrossCheckError if the two routes disagree beyond their bounds and
/// QuadratureError if the integral cannot be resolved.
HighPrecision exp_tail_integral(const Rational& x, unsigned long n, int digits = kDefaultDigits);

}  // namespace matchdist
