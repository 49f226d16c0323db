#include "matchdist/high_precision.hpp"

#include <algorithm>
#include <stdexcept>

namespace matchdist {
namespace {

constexpr int kGuardDigits = 15;
constexpr long kErrorBits = 32;

long bits_for_digits(int digits) {
    // ceil(d * log2(10)) without floating point drift.
    return (static_cast<long>(digits) * 33220 + 9999) / 10000 + 2;
}

Rational power_of_two(long e) {
    Rational p(1);
    if (e >= 0) mpz_mul_2exp(p.get_num_mpz_t(), p.get_num_mpz_t(), static_cast<unsigned long>(e));
    else mpz_mul_2exp(p.get_den_mpz_t(), p.get_den_mpz_t(), static_cast<unsigned long>(-e));
    return p;
}

Integer power_of_ten(long e) {
    Integer r;
    mpz_ui_pow_ui(r.get_mpz_t(), 10, static_cast<unsigned long>(e));
    return r;
}

Rational decimal_power(long e) {
    return e >= 0 ? Rational(power_of_ten(e)) : Rational(Integer(1), power_of_ten(-e));
}

// Round-half-away of a non-negative rational to an integer.
Integer round_half_away(const Rational& q) {
    Integer twice = (2 * q.get_num() + q.get_den());
    Integer den = 2 * q.get_den();
    Integer out;
    mpz_fdiv_q(out.get_mpz_t(), twice.get_mpz_t(), den.get_mpz_t());
    return out;
}

}  // namespace

HighPrecision::HighPrecision(Rational value, Rational error_bound, int digits)
    : value_(std::move(value)), error_(std::move(error_bound)), digits_(digits) {
    if (sgn(error_) < 0) throw std::invalid_argument("negative error bound");
    if (digits_ < 1) throw std::invalid_argument("digits must be positive");
}

HighPrecision HighPrecision::exact(Rational value, int digits) {
    return HighPrecision(std::move(value), Rational(0), digits);
}

bool HighPrecision::meets_contract() const {
    Rational scale = std::max(Rational(1), abs(value_));
    return error_ <= decimal_ulp(digits_) * scale;
}

bool HighPrecision::relative_error_below(int d) const {
    return error_ <= decimal_ulp(d) * abs(value_);
}

HighPrecision HighPrecision::rounded() const {
    if (sgn(value_) == 0) return HighPrecision(value_, round_up_short(error_), digits_);
    Rational q_err;
    Rational v = quantize(value_, bits_for_digits(digits_ + kGuardDigits), &q_err);
    return HighPrecision(std::move(v), round_up_short(error_ + q_err), digits_);
}

HighPrecision HighPrecision::with_digits(int digits) const {
    return HighPrecision(value_, error_, digits);
}

std::string HighPrecision::to_decimal(int significant) const {
    return format_decimal(value_, significant);
}

HighPrecision operator+(const HighPrecision& a, const HighPrecision& b) {
    return HighPrecision(a.value_ + b.value_, a.error_ + b.error_, std::min(a.digits_, b.digits_));
}

HighPrecision operator-(const HighPrecision& a, const HighPrecision& b) {
    return HighPrecision(a.value_ - b.value_, a.error_ + b.error_, std::min(a.digits_, b.digits_));
}

HighPrecision operator-(const HighPrecision& a) { return HighPrecision(-a.value_, a.error_, a.digits_); }

HighPrecision operator*(const HighPrecision& a, const HighPrecision& b) {
    Rational err = abs(a.value_) * b.error_ + abs(b.value_) * a.error_ + a.error_ * b.error_;
    return HighPrecision(a.value_ * b.value_, std::move(err), std::min(a.digits_, b.digits_));
}

HighPrecision operator*(const HighPrecision& a, const Rational& b) {
    return HighPrecision(a.value_ * b, a.error_ * abs(b), a.digits_);
}

HighPrecision operator/(const HighPrecision& a, const HighPrecision& b) {
    Rational mb = abs(b.value_);
    if (mb <= b.error_) throw std::domain_error("division by an interval containing zero");
    // |a/b - ma/mb| <= (|ma| rb + |mb| ra) / (|mb| (|mb| - rb))
    Rational err = (abs(a.value_) * b.error_ + mb * a.error_) / (mb * (mb - b.error_));
    return HighPrecision(a.value_ / b.value_, std::move(err), std::min(a.digits_, b.digits_));
}

HighPrecision positive_part(const HighPrecision& x) {
    return HighPrecision(positive_part(x.value()), x.error_bound(), x.digits());
}

bool certainly_less(const HighPrecision& a, const HighPrecision& b, const Rational& margin) {
    return b.value() - a.value() > margin * (a.error_bound() + b.error_bound());
}

bool consistent(const HighPrecision& a, const HighPrecision& b) {
    return abs(a.value() - b.value()) <= a.error_bound() + b.error_bound();
}

Rational decimal_ulp(int e) { return decimal_power(-e); }

Rational quantize(const Rational& q, long bits, Rational* error) {
    if (sgn(q) == 0) {
        if (error) *error = 0;
        return q;
    }
    long shift = bits - floor_log2(q) - 1;
    Rational scaled = abs(q) * power_of_two(shift);
    Rational out = Rational(round_half_away(scaled)) / power_of_two(shift);
    if (sgn(q) < 0) out = -out;
    if (error) *error = abs(q - out);
    return out;
}

Rational round_up_short(const Rational& q) {
    if (sgn(q) < 0) throw std::invalid_argument("round_up_short of negative value");
    if (sgn(q) == 0) return q;
    long shift = kErrorBits - floor_log2(q) - 1;
    Rational scaled = q * power_of_two(shift);
    Integer up;
    mpz_cdiv_q(up.get_mpz_t(), scaled.get_num_mpz_t(), scaled.get_den_mpz_t());
    return Rational(up) / power_of_two(shift);
}

std::string format_decimal(const Rational& q, int significant) {
    if (significant < 1) throw std::invalid_argument("significant digits must be positive");
    if (sgn(q) == 0) return "0";
    Rational a = abs(q);

    // Decimal exponent e with 10^e <= a < 10^(e+1).
    long e = static_cast<long>(static_cast<double>(floor_log2(a)) * 0.30102999566398120);
    while (decimal_power(e) > a) --e;
    while (decimal_power(e + 1) <= a) ++e;

    Integer n = round_half_away(a * decimal_power(significant - 1 - e));
    if (n == power_of_ten(significant)) {
        n = power_of_ten(significant - 1);
        ++e;
    }
    std::string digits = n.get_str();

    std::string out = sgn(q) < 0 ? "-" : "";
    if (e >= -5 && e <= 15) {
        std::string int_part, frac_part;
        if (e >= 0) {
            auto split = static_cast<std::size_t>(e + 1);
            if (split >= digits.size()) {
                int_part = digits + std::string(split - digits.size(), '0');
            } else {
                int_part = digits.substr(0, split);
                frac_part = digits.substr(split);
            }
        } else {
            int_part = "0";
            frac_part = std::string(static_cast<std::size_t>(-e - 1), '0') + digits;
        }
        while (!frac_part.empty() && frac_part.back() == '0') frac_part.pop_back();
        out += int_part;
        if (!frac_part.empty()) out += "." + frac_part;
    } else {
        std::string mantissa = digits.substr(0, 1);
        std::string rest = digits.substr(1);
        while (!rest.empty() && rest.back() == '0') rest.pop_back();
        if (!rest.empty()) mantissa += "." + rest;
        out += mantissa + "e" + (e < 0 ? "-" : "+") + std::to_string(e < 0 ? -e : e);
    }
    return out;
}

}  // namespace matchdist
