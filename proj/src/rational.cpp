#include "matchdist/rational.hpp"

#include <cctype>
#include <stdexcept>

namespace matchdist {
namespace {

bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s) {
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    }
    return true;
}

[[noreturn]] void reject(std::string_view text) {
    throw std::invalid_argument("not an exact decimal or fraction: '" + std::string(text) + "'");
}

}  // namespace

Rational parse_rational(std::string_view text) {
    std::string_view body = text;
    bool negative = false;
    if (!body.empty() && (body.front() == '-' || body.front() == '+')) {
        negative = body.front() == '-';
        body.remove_prefix(1);
    }
    if (body.empty()) reject(text);

    Rational result;
    if (auto slash = body.find('/'); slash != std::string_view::npos) {
        auto num = body.substr(0, slash);
        auto den = body.substr(slash + 1);
        if (!all_digits(num) || !all_digits(den)) reject(text);
        Integer d{std::string(den), 10};
        if (d == 0) throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
        result = Rational(Integer{std::string(num), 10}, d);
        result.canonicalize();
    } else {
        auto dot = body.find('.');
        std::string_view whole = body.substr(0, dot);
        std::string_view frac = dot == std::string_view::npos ? std::string_view{} : body.substr(dot + 1);
        if (whole.empty() && frac.empty()) reject(text);
        if (!whole.empty() && !all_digits(whole)) reject(text);
        if (dot != std::string_view::npos && !frac.empty() && !all_digits(frac)) reject(text);
        if (dot != std::string_view::npos && frac.empty() && whole.empty()) reject(text);
        std::string digits = std::string(whole) + std::string(frac);
        if (digits.empty()) reject(text);
        Integer scale;
        mpz_ui_pow_ui(scale.get_mpz_t(), 10, frac.size());
        result = Rational(Integer(digits, 10), scale);
        result.canonicalize();
    }
    return negative ? Rational(-result) : result;
}

std::string to_fraction_string(const Rational& q) {
    if (q.get_den() == 1) return q.get_num().get_str();
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

Integer factorial(unsigned long n) {
    Integer r;
    mpz_fac_ui(r.get_mpz_t(), n);
    return r;
}

Integer binomial(unsigned long n, unsigned long k) {
    Integer r;
    mpz_bin_uiui(r.get_mpz_t(), n, k);
    return r;
}

Rational pow(const Rational& base, unsigned long exponent) {
    Integer num, den;
    mpz_pow_ui(num.get_mpz_t(), base.get_num_mpz_t(), exponent);
    mpz_pow_ui(den.get_mpz_t(), base.get_den_mpz_t(), exponent);
    // Powers of coprime integers stay coprime.
    Rational r;
    mpz_swap(r.get_num_mpz_t(), num.get_mpz_t());
    mpz_swap(r.get_den_mpz_t(), den.get_mpz_t());
    return r;
}

Rational abs(const Rational& q) { return sgn(q) < 0 ? Rational(-q) : q; }

Rational positive_part(const Rational& q) { return sgn(q) > 0 ? q : Rational(0); }

long floor_log2(const Rational& q) {
    if (sgn(q) == 0) throw std::domain_error("floor_log2 of zero");
    Rational a = abs(q);
    long guess = static_cast<long>(mpz_sizeinbase(a.get_num_mpz_t(), 2)) -
                 static_cast<long>(mpz_sizeinbase(a.get_den_mpz_t(), 2));
    auto power = [](long e) {
        Rational p(1);
        if (e >= 0) mpz_mul_2exp(p.get_num_mpz_t(), p.get_num_mpz_t(), static_cast<unsigned long>(e));
        else mpz_mul_2exp(p.get_den_mpz_t(), p.get_den_mpz_t(), static_cast<unsigned long>(-e));
        return p;
    };
    while (power(guess) > a) --guess;
    while (power(guess + 1) <= a) ++guess;
    return guess;
}

double to_double(const Rational& q) { return q.get_d(); }

}  // namespace matchdist
