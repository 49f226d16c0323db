#include "matchdist/numerics.hpp"

#include "matchdist/quadrature.hpp"

#include <stdexcept>

namespace matchdist {
namespace {

// sum_{k >= first} x^k / k! with a relative certificate.
//
// Stops at the first K with K + 2 > |x| whose geometric tail bound is below
// 10^-(digits+5) times the smallest magnitude the sum can still have. The
// sum is nonzero for x != 0 (Taylor remainder), so this terminates.
HighPrecision series_from(const Rational& x, unsigned long first, int digits) {
    if (sgn(x) == 0) {
        return HighPrecision::exact(first == 0 ? Rational(1) : Rational(0), digits);
    }
    const Rational ax = abs(x);
    const Rational tol_scale = decimal_ulp(digits + 5);

    Rational term = pow(x, first) / Rational(factorial(first));
    Rational sum = term;
    for (unsigned long k = first;; ++k) {
        // sum now holds terms first..k; term = x^k / k!.
        Rational k2(k + 2);
        if (k2 > ax) {
            Rational next_mag = abs(term) * ax / Rational(k + 1);
            Rational bound = next_mag / (1 - ax / k2);
            Rational floor_mag = abs(sum) - bound;
            if (sgn(floor_mag) > 0 && bound <= tol_scale * floor_mag) {
                return HighPrecision(sum, bound, digits).rounded();
            }
        }
        term *= x;
        term /= Rational(k + 1);
        sum += term;
    }
}

}  // namespace

Rational exp_partial_sum(const Rational& x, unsigned long n) {
    Rational term(1);
    Rational sum(1);
    for (unsigned long k = 1; k <= n; ++k) {
        term *= x;
        term /= Rational(k);
        sum += term;
    }
    return sum;
}

HighPrecision exp_eval(const Rational& x, int digits) {
    if (digits < 1) throw std::invalid_argument("digits must be >= 1");
    return series_from(x, 0, digits);
}

HighPrecision exp_tail(const Rational& x, unsigned long n, int digits) {
    if (digits < 1) throw std::invalid_argument("digits must be >= 1");
    return series_from(x, n + 1, digits);
}

HighPrecision poisson_tail(const Rational& lambda, unsigned long n, int digits) {
    if (sgn(lambda) <= 0) throw std::invalid_argument("poisson_tail requires lambda > 0");
    return (exp_eval(-lambda, digits + 2) * exp_tail(lambda, n, digits + 2)).with_digits(digits).rounded();
}

HighPrecision exp_tail_integral(const Rational& x, unsigned long n, int digits) {
    if (digits < 1) throw std::invalid_argument("digits must be >= 1");
    if (sgn(x) == 0) return HighPrecision::exact(0, digits);

    // Substituting y = x t gives (x^{n+1}/n!) * integral_0^1 (1-t)^n e^{x t} dt.
    Rational prefactor = pow(x, n + 1) / Rational(factorial(n));
    // The integrand dominates (1-t)^n * min(1, e^x), so the integral is at
    // least min(1, e^x)/(n+1); e^x >= 3^-ceil(|x|) covers negative x.
    Rational floor_integral = Rational(1, n + 1);
    if (sgn(x) < 0) {
        Integer c;
        mpz_cdiv_q(c.get_mpz_t(), abs(x).get_num_mpz_t(), abs(x).get_den_mpz_t());
        Integer three_pow;
        mpz_ui_pow_ui(three_pow.get_mpz_t(), 3, c.get_ui());
        floor_integral /= Rational(three_pow);
    }
    QuadratureOptions opts;
    opts.digits = digits + 5;
    HighPrecision integral = integrate(IntegrandId::exp_tail(x, n), decimal_ulp(digits + 1) * floor_integral, opts);
    HighPrecision by_quadrature = (integral * prefactor).with_digits(digits).rounded();

    HighPrecision by_series =
        (exp_eval(x, digits + 5) - HighPrecision::exact(exp_partial_sum(x, n), digits + 5)).with_digits(digits);
    if (!consistent(by_quadrature, by_series)) {
        throw CrossCheckError("exp_tail_integral: quadrature " + by_quadrature.to_decimal(20) +
                              " disagrees with series " + by_series.to_decimal(20));
    }
    return by_quadrature;
}

}  // namespace matchdist
