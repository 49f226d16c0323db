#include "matchdist/distances.hpp"

#include "matchdist/numerics.hpp"
#include "matchdist/quadrature.hpp"

#include <algorithm>

namespace matchdist {
namespace {

constexpr int kMaxRefineDigits = 4000;

// Exact part sum_{k=1}^{K} alpha^{k-1}/k! |a_k - b_k|.
Rational finite_fm_sum(const FactorialMomentSeq& a, const FactorialMomentSeq& b, const Rational& alpha) {
    const std::size_t order = std::max(a.max_order(), b.max_order());
    Rational sum(0);
    Rational weight(1);  // alpha^{k-1} / k!
    for (std::size_t k = 1; k <= order; ++k) {
        if (k > 1) weight *= alpha;
        weight /= Rational(k);
        sum += weight * abs(a.at(k) - b.at(k));
    }
    return sum;
}

HighPrecision fm_against_poisson(const FactorialMomentSeq& m, const PoissonMoments& z, const Rational& alpha,
                                 int digits) {
    const std::size_t order = m.max_order();
    Rational sum(0);
    Rational weight(1);
    Rational lambda_pow(1);
    for (std::size_t k = 1; k <= order; ++k) {
        if (k > 1) weight *= alpha;
        weight /= Rational(k);
        lambda_pow *= z.lambda;
        sum += weight * abs(m.at(k) - lambda_pow);
    }
    // For k > K the finite side vanishes: (1/alpha) sum_{k>K} (alpha lambda)^k / k!.
    HighPrecision tail = exp_tail(alpha * z.lambda, order, digits + 2) * Rational(1 / alpha);
    return (HighPrecision::exact(sum, digits + 2) + tail).with_digits(digits).rounded();
}

HighPrecision tv_against_poisson_once(const FinitePmf& p, const Rational& lambda, int work_digits) {
    const HighPrecision base = exp_eval(-lambda, work_digits);
    HighPrecision sum = HighPrecision::exact(0, work_digits);
    Rational weight(1);
    for (std::size_t j = 0; j < p.size(); ++j) {
        if (j > 0) {
            weight *= lambda;
            weight /= Rational(j);
        }
        sum = sum + positive_part(HighPrecision::exact(p[j], work_digits) - base * weight);
    }
    return sum;
}

void require_positive_alpha(const Rational& alpha) {
    if (sgn(alpha) <= 0) throw std::invalid_argument("alpha must be positive, got " + to_fraction_string(alpha));
}

}  // namespace

bool DistanceReport::sandwich_holds(const Rational& margin) const {
    return certainly_less(lower_bound, exact, margin) && certainly_less(exact, upper_bound, margin);
}

bool DistanceReport::routes_agree() const { return consistent(exact, integral_check); }

HighPrecision d_alpha_generic(const MomentSource& m1, const MomentSource& m2, const Rational& alpha, int digits) {
    require_positive_alpha(alpha);
    const auto* f1 = std::get_if<FactorialMomentSeq>(&m1);
    const auto* f2 = std::get_if<FactorialMomentSeq>(&m2);
    if (f1 && f2) return HighPrecision::exact(finite_fm_sum(*f1, *f2, alpha), digits);
    if (f1) return fm_against_poisson(*f1, std::get<PoissonMoments>(m2), alpha, digits);
    if (f2) return fm_against_poisson(*f2, std::get<PoissonMoments>(m1), alpha, digits);
    throw UnsupportedCombination("d_alpha_generic needs at least one finite moment sequence");
}

HighPrecision d_alpha_matching_exact(const MatchingParams& p, const Rational& alpha, int digits) {
    require_positive_alpha(alpha);
    return (exp_tail(alpha * p.lambda(), p.n(), digits + 2) * Rational(1 / alpha)).with_digits(digits).rounded();
}

DistanceReport d_alpha_matching(const MatchingParams& p, const Rational& alpha, const ReportOptions& opts) {
    require_positive_alpha(alpha);
    const unsigned long n = p.n();
    const Rational& lambda = p.lambda();
    const Rational al = alpha * lambda;
    const int d = opts.digits;

    DistanceReport r;
    r.exact = d_alpha_matching_exact(p, alpha, d);

    QuadratureOptions qo;
    qo.digits = d;
    const Rational prefactor = pow(alpha, n) * pow(lambda, n + 1) / Rational(factorial(n));
    r.integral_check = integrate(IntegrandId::fm_kernel(n, alpha, lambda), opts.quadrature_tol, qo) * prefactor;

    const Rational base = pow(alpha, n) * pow(lambda, n + 1) / Rational(factorial(n + 1));
    const Rational n2(n + 2), n23((n + 2) * (n + 3));
    const Rational common = 1 + al / n2;
    r.lower_bound = HighPrecision::exact(base * (common + al * al / n23), d);
    HighPrecision e_al = exp_eval(al, d + 2);
    r.upper_bound = ((HighPrecision::exact(common, d + 2) + e_al * Rational(al * al / n23)) * base).with_digits(d).rounded();
    r.asymptotic = HighPrecision::exact(base, d);
    r.ratio_to_asymptotic = (r.exact * Rational(1 / base)).rounded();
    return r;
}

HighPrecision tv_generic(const FinitePmf& p1, const LawSource& p2, int digits) {
    if (const auto* finite = std::get_if<FinitePmf>(&p2)) {
        const std::size_t size = std::max(p1.size(), finite->size());
        Rational sum(0);
        for (std::size_t j = 0; j < size; ++j) sum += positive_part(p1.at(j) - finite->at(j));
        return HighPrecision::exact(sum, digits);
    }
    const Rational& lambda = std::get<PoissonMoments>(p2).lambda;
    if (sgn(lambda) <= 0) throw std::invalid_argument("Poisson law needs lambda > 0");

    // p1 vanishes beyond its support, so the positive-part sum over the
    // support is the whole distance. The differences can cancel to far below
    // the Poisson masses; refine until the bound is relative.
    int work = digits + 5;
    while (true) {
        HighPrecision tv = tv_against_poisson_once(p1, lambda, work);
        if (tv.relative_error_below(digits + 2)) return tv.with_digits(digits).rounded();
        if (work > kMaxRefineDigits) {
            throw std::runtime_error("tv_generic: could not certify " + std::to_string(digits) + " digits");
        }
        // Extra digits needed ~ log10(error / (10^-(digits+2) |value|)).
        int extra = 10;
        if (sgn(tv.value()) != 0 && sgn(tv.error_bound()) != 0) {
            Rational gap = tv.error_bound() / (decimal_ulp(digits + 2) * abs(tv.value()));
            extra = std::max(10, static_cast<int>(static_cast<double>(floor_log2(gap)) * 0.30103) + 6);
        } else {
            extra = std::max(extra, work);
        }
        work += extra;
    }
}

HighPrecision tv_matching_exact(const MatchingParams& p, int digits) {
    return tv_generic(generalized_matching_pmf(p), PoissonMoments{p.lambda()}, digits);
}

DistanceReport tv_matching(const MatchingParams& p, const ReportOptions& opts) {
    const unsigned long n = p.n();
    const Rational& lambda = p.lambda();
    const int d = opts.digits;

    DistanceReport r;
    r.exact = tv_matching_exact(p, d);

    QuadratureOptions qo;
    qo.digits = d;
    const Rational prefactor = pow(lambda, n + 1) / Rational(2 * factorial(n));
    r.integral_check = integrate(IntegrandId::tv_kernel(n, lambda), opts.quadrature_tol, qo) * prefactor;

    const Rational base = pow(Rational(2), n) * pow(lambda, n + 1) / Rational(factorial(n + 1));
    const Rational first = 2 * lambda / Rational(n + 2) * (1 - pow(Rational(1, 2), n + 1));
    const Rational second =
        4 * lambda * lambda / Rational((n + 2) * (n + 3)) * (1 - Rational(n + 3) / pow(Rational(2), n + 2));
    r.lower_bound = HighPrecision::exact(base * (1 - first), d);
    r.upper_bound = HighPrecision::exact(base * (1 - first + second), d);
    r.asymptotic = HighPrecision::exact(base, d);
    r.ratio_to_asymptotic = (r.exact * Rational(1 / base)).rounded();
    return r;
}

ReferenceBounds reference_bounds(unsigned long n, int digits) {
    if (n < 1) throw std::invalid_argument("reference_bounds needs n >= 1");
    ReferenceBounds b;
    const Rational two_n = pow(Rational(2), n);
    b.diaconis = two_n / Rational(factorial(n));
    b.dasgupta = two_n / Rational(factorial(n + 1));
    const Rational n2(n + 2), n23((n + 2) * (n + 3));
    HighPrecision e2 = exp_eval(2, digits + 2);
    b.corollary = ((HighPrecision::exact(1 + 2 / n2, digits + 2) + e2 * Rational(4 / n23)) * b.dasgupta)
                      .with_digits(digits)
                      .rounded();
    return b;
}

MinTvResult min_tv_over_support(unsigned long n, const Rational& lambda, int digits) {
    MinTvResult r{poisson_tail(lambda, n, digits), std::nullopt};
    if (lambda > 1) {
        r.scope_note = "lambda > 1: value is the minimum over laws on {0..n}; the censored matching model "
                       "is only defined for lambda in (0, 1]";
    }
    return r;
}

HighPrecision tv_fm_ratio(unsigned long n, const Rational& alpha, const Rational& lambda, int digits) {
    MatchingParams p(n, lambda);
    HighPrecision tv = tv_matching_exact(p, digits + 2);
    HighPrecision fm = d_alpha_matching_exact(p, alpha, digits + 2);
    return (tv / fm).with_digits(digits).rounded();
}

}  // namespace matchdist
