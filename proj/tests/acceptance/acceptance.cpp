// Acceptance suite: one PASS/FAIL line per criterion, exit status 0 iff all pass.

#include "matchdist/distances.hpp"
#include "matchdist/distributions.hpp"
#include "matchdist/numerics.hpp"
#include "matchdist/simulation.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

using namespace matchdist;

namespace {

struct Verdict {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what) {
        if (!ok && pass) {
            pass = false;
            detail = what;
        }
    }
};

const std::vector<Rational> kLambdaFour = {Rational(1, 10), Rational(1, 2), Rational(9, 10), Rational(1)};
const std::vector<Rational> kLambdaThree = {Rational(1, 10), Rational(1, 2), Rational(1)};
const std::vector<Rational> kAlphas = {Rational(1, 2), Rational(1), Rational(2), Rational(3)};
const std::uint64_t kSeed = 20240601;

std::string at(unsigned long n, const Rational& l) { return "n=" + std::to_string(n) + " lambda=" + to_fraction_string(l); }

// |x - reference| + bound <= 10^-tol_digits.
bool within(const HighPrecision& x, const char* reference, int tol_digits) {
    return abs(x.value() - parse_rational(reference)) + x.error_bound() <= decimal_ulp(tol_digits);
}

Verdict factorial_moment_identity() {
    Verdict v;
    std::size_t checked = 0;
    for (unsigned long n = 1; n <= 25; ++n) {
        for (const Rational& l : kLambdaFour) {
            FactorialMomentSeq m = factorial_moments(generalized_matching_pmf({n, l}), n + 5);
            for (unsigned long k = 0; k <= n + 5; ++k, ++checked) {
                Rational expected = k <= n ? pow(l, k) : Rational(0);
                v.require(m.at(k) == expected, at(n, l) + " k=" + std::to_string(k));
            }
        }
    }
    if (v.pass) v.detail = std::to_string(checked) + " exact identities";
    return v;
}

Verdict pmf_triple_agreement() {
    Verdict v;
    for (unsigned long n = 1; n <= 25; ++n) {
        for (const Rational& l : kLambdaFour) {
            FinitePmf closed = generalized_matching_pmf({n, l});
            v.require(closed == thinning_pmf({n, l}), "thinning differs at " + at(n, l));
            if (n <= 8) v.require(closed == enumerate_exact(n, l), "enumeration differs at " + at(n, l));
        }
    }
    if (v.pass) v.detail = "closed form = thinning (n<=25) = enumeration (n<=8)";
    return v;
}

Verdict inversion_round_trip() {
    Verdict v;
    Xoshiro256 rng(kSeed);
    for (int trial = 0; trial < 500; ++trial) {
        FinitePmf p = random_finite_pmf(rng, 30);
        SignedMassSeq back = invert_factorial_moments(factorial_moments(p));
        bool same = back.is_pmf && back.values.size() >= p.size();
        for (std::size_t j = 0; same && j < back.values.size(); ++j) same = back.values[j] == p.at(j);
        v.require(same, "round trip failed on trial " + std::to_string(trial));
    }
    FactorialMomentSeq two{{Rational(1), Rational(2), Rational(4)}};
    SignedMassSeq s = invert_factorial_moments(two);
    v.require(s.values.size() > 1 && s.values[1] == -2 && !s.is_pmf, "lambda=2 inversion should give -2 at j=1");
    if (v.pass) v.detail = "500 random pmfs; moments (1,2,4) invert to a signed sequence with -2 at j=1";
    return v;
}

struct GridReports {
    std::vector<std::pair<std::string, DistanceReport>> tv;
    std::vector<std::pair<std::string, DistanceReport>> fm;
};

const GridReports& grid() {
    static const GridReports g = [] {
        GridReports out;
        ReportOptions ro;
        ro.quadrature_tol = decimal_ulp(12);
        for (const Rational& l : kLambdaThree) {
            for (unsigned long n = 1; n <= 30; ++n) {
                out.tv.emplace_back(at(n, l), tv_matching({n, l}, ro));
                for (const Rational& a : kAlphas) {
                    out.fm.emplace_back(at(n, l) + " alpha=" + to_fraction_string(a), d_alpha_matching({n, l}, a, ro));
                }
            }
        }
        return out;
    }();
    return g;
}

bool rate_close(const HighPrecision& ratio) {
    return abs(ratio.value() - 1) + ratio.error_bound() <= Rational(2, 32) + Rational(1, 100);
}

Verdict tv_sandwich_and_rate() {
    Verdict v;
    for (const auto& [where, r] : grid().tv) v.require(r.sandwich_holds(10), "sandwich fails at " + where);
    HighPrecision ratio = tv_matching({30, 1}).ratio_to_asymptotic;
    v.require(rate_close(ratio), "rate at n=30: " + ratio.to_decimal(10));
    if (v.pass) v.detail = "90 strict sandwiches; n=30 ratio " + ratio.to_decimal(8);
    return v;
}

Verdict fm_sandwich_and_rate() {
    Verdict v;
    for (const auto& [where, r] : grid().fm) v.require(r.sandwich_holds(10), "sandwich fails at " + where);
    DistanceReport r30 = d_alpha_matching({30, 1}, 2);
    HighPrecision scaled = r30.exact * (Rational(factorial(31)) / pow(Rational(2), 30));
    v.require(rate_close(scaled), "rate at n=30: " + scaled.to_decimal(10));
    if (v.pass) v.detail = "360 strict sandwiches; n=30 scaled value " + scaled.to_decimal(8);
    return v;
}

Verdict series_integral_identity() {
    Verdict v;
    std::size_t count = 0;
    for (const auto* reports : {&grid().tv, &grid().fm}) {
        for (const auto& [where, r] : *reports) {
            v.require(r.routes_agree(), "series and quadrature disagree at " + where);
            ++count;
        }
    }
    if (v.pass) v.detail = std::to_string(count) + " grid points, quadrature tolerance 1e-12";
    return v;
}

bool not_above(const HighPrecision& a, const HighPrecision& b) { return a.lower() <= b.upper(); }

Verdict domination_and_monotonicity() {
    Verdict v;
    Xoshiro256 rng(kSeed + 1);
    for (int trial = 0; trial < 1000; ++trial) {
        FinitePmf a = random_finite_pmf(rng), b = random_finite_pmf(rng);
        FactorialMomentSeq ma = factorial_moments(a), mb = factorial_moments(b);
        std::vector<HighPrecision> d;
        for (const Rational& alpha : kAlphas) d.push_back(d_alpha_generic(ma, mb, alpha));
        v.require(not_above(tv_generic(a, b), d[2]), "tv above d_2 on pair " + std::to_string(trial));
        for (std::size_t i = 0; i + 1 < d.size(); ++i) {
            v.require(not_above(d[i], d[i + 1]), "d_alpha not monotone on pair " + std::to_string(trial));
        }
    }
    if (v.pass) v.detail = "1000 random pairs";
    return v;
}

Verdict minimality() {
    Verdict v;
    Xoshiro256 rng(kSeed + 2);
    for (int trial = 0; trial < 500; ++trial) {
        unsigned long n = 3 + trial % 6;
        const Rational& l = kLambdaThree[trial % 3];
        const Rational& alpha = kAlphas[(trial / 3) % 4];
        std::vector<Rational> probs = random_finite_pmf(rng, n + 1).probs();
        probs.resize(n + 1);
        FinitePmf x(probs);
        HighPrecision dx = d_alpha_generic(factorial_moments(x), PoissonMoments{l}, alpha);
        HighPrecision best = d_alpha_matching_exact({n, l}, alpha);
        v.require(not_above(best, dx), "random law beats the minimizer at " + at(n, l));
    }
    HighPrecision m = min_tv_over_support(3, 1).value;
    v.require(within(m, "0.0189881568761538090786", 10), "min tv(3, 1) = " + m.to_decimal(12));
    std::vector<Rational> probs(4);
    Rational rest = 1;
    for (unsigned j = 1; j <= 3; ++j) {
        probs[j] = Rational(37, 100) / Rational(factorial(j));
        rest -= probs[j];
    }
    probs[0] = rest;
    auto poisson = poisson_pmf_prefix(1, 3);
    for (unsigned j = 0; j <= 3; ++j) {
        v.require(certainly_less(poisson[j], HighPrecision::exact(probs[j])), "constructed law below e^-1/j!");
    }
    HighPrecision attained = tv_generic(FinitePmf(probs), PoissonMoments{1});
    v.require(abs(attained.value() - m.value()) + attained.error_bound() + m.error_bound() <= decimal_ulp(10),
              "constructed law does not attain the minimum");
    if (v.pass) v.detail = "500 random laws; min tv(3, 1) = " + m.to_decimal(11) + " attained";
    return v;
}

Verdict classical_numbers() {
    Verdict v;
    HighPrecision tv = tv_matching_exact({3, 1});
    ReferenceBounds b = reference_bounds(3);
    v.require(within(tv, "0.237473985299983958138555601478", 9), "d_tv(Z_3, Z) = " + tv.to_decimal(12));
    v.require(b.dasgupta == Rational(1, 3) && b.diaconis == Rational(4, 3), "bounds at n=3 are not 1/3 and 4/3");
    v.require(certainly_less(tv, HighPrecision::exact(b.dasgupta)), "1/3 does not dominate d_tv");
    v.require(b.dasgupta <= b.diaconis, "4/3 does not dominate 1/3");
    v.require(within(b.corollary, "0.7950686", 6), "bound with e^2 term = " + b.corollary.to_decimal(10));
    v.require(within(b.corollary, "0.795069159952473343", 15), "bound with e^2 term off the reference");
    v.require(certainly_less(tv, b.corollary), "bound with e^2 term does not dominate d_tv");
    if (v.pass) v.detail = "d_tv = " + tv.to_decimal(10) + " < 1/3 < 4/3; e^2 bound " + b.corollary.to_decimal(8);
    return v;
}

Verdict non_domination() {
    Verdict v;
    HighPrecision prev;
    for (unsigned long n = 10; n <= 25; ++n) {
        HighPrecision r = tv_fm_ratio(n, 1, 1);
        v.require(r.lower() >= Rational(Integer(1) << static_cast<mp_bitcnt_t>(n - 1)), "ratio below 2^n/2 at n=" + std::to_string(n));
        if (n > 10) v.require(certainly_less(prev, r), "ratio not increasing at n=" + std::to_string(n));
        prev = r;
    }
    for (unsigned long n = 5; n <= 20; ++n) {
        v.require(certainly_less(tv_fm_ratio(n, 2, 1), HighPrecision::exact(1)), "tv/d_2 >= 1 at n=" + std::to_string(n));
    }
    if (v.pass) v.detail = "tv/d_1 at n=25: " + prev.to_decimal(8) + "; tv/d_2 < 1 for n=5..20";
    return v;
}

Verdict monte_carlo() {
    Verdict v;
    SimConfig cfg;
    cfg.n = 5;
    cfg.lambda = Rational(1, 2);
    cfg.samples = 1000000;
    cfg.seed = kSeed;
    cfg.workers = 4;
    MonteCarloResult r = run_monte_carlo(cfg);
    v.require(r.stats.pass, "z-test failed");
    v.require(r.stats.max_abs_dev < 0.002, "max deviation " + std::to_string(r.stats.max_abs_dev));
    v.require(run_monte_carlo(cfg).empirical == r.empirical, "rerun differs");
    v.require(tally_serial(cfg) == r.empirical, "serial and parallel tallies differ");
    SimConfig classical = cfg;
    classical.lambda = 1;
    MonteCarloResult c = run_monte_carlo(classical);
    v.require(c.empirical.counts.at(4) == 0, "mass observed at j = n-1");
    v.require(c.stats.pass, "z-test failed for lambda = 1");
    if (v.pass) {
        std::ostringstream s;
        s << "max |dev| " << r.stats.max_abs_dev << ", j=4 empty at lambda=1, reruns identical";
        v.detail = s.str();
    }
    return v;
}

struct Criterion {
    const char* name;
    Verdict (*run)();
};

}  // namespace

int main() {
    const Criterion criteria[] = {
        {"factorial moments of the censored law are lambda^k up to order n", factorial_moment_identity},
        {"closed-form pmf = binomial thinning = permutation enumeration", pmf_triple_agreement},
        {"moment inversion round trip; lambda > 1 gives a signed sequence", inversion_round_trip},
        {"total variation sandwich and rate", tv_sandwich_and_rate},
        {"factorial moment distance sandwich and rate", fm_sandwich_and_rate},
        {"series and quadrature routes agree", series_integral_identity},
        {"d_tv <= d_2 and d_alpha monotone in alpha", domination_and_monotonicity},
        {"censored matching law minimizes d_alpha; tv minimum attained", minimality},
        {"classical n=3 distance and published bounds", classical_numbers},
        {"tv / d_1 grows like 2^n while tv / d_2 stays below 1", non_domination},
        {"Monte Carlo concordance and reproducibility", monte_carlo},
    };
    int failures = 0;
    int index = 0;
    for (const Criterion& c : criteria) {
        ++index;
        auto start = std::chrono::steady_clock::now();
        Verdict v;
        try {
            v = c.run();
        } catch (const std::exception& e) {
            v.pass = false;
            v.detail = std::string("exception: ") + e.what();
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("%s %2d  %s  (%s; %.2fs)\n", v.pass ? "PASS" : "FAIL", index, c.name, v.detail.c_str(), secs);
        failures += !v.pass;
    }
    std::printf("%d/%d criteria passed\n", index - failures, index);
    return failures == 0 ? 0 : 1;
}
