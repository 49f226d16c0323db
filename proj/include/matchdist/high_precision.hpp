#pragma once

#include "matchdist/rational.hpp"

#include <string>

namespace matchdist {

/// Default working precision in significant decimal digits.
inline constexpr int kDefaultDigits = 50;

/// A real number known to lie in [value - error_bound, value + error_bound].
///
/// The midpoint and radius are exact rationals, so arithmetic between
/// HighPrecision values never loses rigor; rounding only happens in
/// rounded(), which folds the quantization error back into the radius.
class HighPrecision {
public:
    HighPrecision() = default;
    HighPrecision(Rational value, Rational error_bound, int digits);

    static HighPrecision exact(Rational value, int digits = kDefaultDigits);

    const Rational& value() const { return value_; }
    const Rational& error_bound() const { return error_; }
    int digits() const { return digits_; }

    Rational lower() const { return value_ - error_; }
    Rational upper() const { return value_ + error_; }
    bool is_exact() const { return sgn(error_) == 0; }

    /// error_bound <= 10^-digits * max(1, |value|).
    bool meets_contract() const;
    /// error_bound <= 10^-d * |value| (strictly relative).
    bool relative_error_below(int d) const;
    bool contains(const Rational& x) const { return lower() <= x && x <= upper(); }

    /// Midpoint quantized to digits + guard decimal digits of relative
    /// precision and radius rounded up to a short dyadic.
    HighPrecision rounded() const;
    HighPrecision with_digits(int digits) const;

    double to_double() const { return value_.get_d(); }
    /// Correctly rounded decimal of the midpoint with `significant` digits.
    std::string to_decimal(int significant) const;

    friend HighPrecision operator+(const HighPrecision& a, const HighPrecision& b);
    friend HighPrecision operator-(const HighPrecision& a, const HighPrecision& b);
    friend HighPrecision operator*(const HighPrecision& a, const HighPrecision& b);
    /// Throws std::domain_error when the divisor interval contains zero.
    friend HighPrecision operator/(const HighPrecision& a, const HighPrecision& b);
    friend HighPrecision operator*(const HighPrecision& a, const Rational& b);
    friend HighPrecision operator*(const Rational& a, const HighPrecision& b) { return b * a; }
    friend HighPrecision operator-(const HighPrecision& a);

private:
    Rational value_{0};
    Rational error_{0};
    int digits_ = kDefaultDigits;
};

/// The positive part is 1-Lipschitz, so the radius carries over unchanged.
HighPrecision positive_part(const HighPrecision& x);

/// a < b certified with slack: b.value - a.value > margin * (a.err + b.err).
bool certainly_less(const HighPrecision& a, const HighPrecision& b, const Rational& margin = 1);

/// |a - b| <= a.err + b.err: the two enclosures overlap.
bool consistent(const HighPrecision& a, const HighPrecision& b);

/// 10^-e as an exact rational.
Rational decimal_ulp(int e);

/// Quantizes q to `bits` significant bits; returns the rounded value and
/// writes the exact quantization error magnitude to *error.
Rational quantize(const Rational& q, long bits, Rational* error);
/// Smallest short dyadic >= q (q >= 0).
Rational round_up_short(const Rational& q);

/// Decimal rendering with `significant` correctly rounded digits (half away
/// from zero); fixed notation for moderate exponents, scientific otherwise.
std::string format_decimal(const Rational& q, int significant);

}  // namespace matchdist
