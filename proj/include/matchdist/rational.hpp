#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace matchdist {

/// Exact arbitrary-precision integer and rational numbers (GMP).
/// mpq_class keeps values canonical: gcd(|num|, den) = 1 and den > 0.
using Integer = mpz_class;
using Rational = mpq_class;

/// Parses a decimal ("0.5", "-2", ".25") or fraction ("1/2") string exactly.
/// Scientific notation, whitespace and empty strings are rejected with
/// std::invalid_argument.
Rational parse_rational(std::string_view text);

/// "num/den", or just "num" when the denominator is 1.
std::string to_fraction_string(const Rational& q);

Integer factorial(unsigned long n);
Integer binomial(unsigned long n, unsigned long k);

Rational pow(const Rational& base, unsigned long exponent);
Rational abs(const Rational& q);
Rational positive_part(const Rational& q);

/// floor(log2|q|) for q != 0.
long floor_log2(const Rational& q);

/// Nearest double; only used for reporting and statistics.
double to_double(const Rational& q);

}  // namespace matchdist
