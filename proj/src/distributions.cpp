#include "matchdist/distributions.hpp"

#include "matchdist/numerics.hpp"

#include <stdexcept>

namespace matchdist {

FinitePmf::FinitePmf(std::vector<Rational> probs, std::string label)
    : probs_(std::move(probs)), label_(std::move(label)) {
    if (probs_.empty()) throw std::invalid_argument("pmf needs at least one entry");
    Rational total(0);
    for (const auto& p : probs_) {
        if (sgn(p) < 0) throw std::invalid_argument("pmf entry is negative: " + to_fraction_string(p));
        total += p;
    }
    if (total != 1) throw std::invalid_argument("pmf entries sum to " + to_fraction_string(total) + ", not 1");
}

FinitePmf point_mass(std::size_t at) {
    std::vector<Rational> probs(at + 1, Rational(0));
    probs[at] = 1;
    return FinitePmf(std::move(probs), "delta_" + std::to_string(at));
}

MatchingParams::MatchingParams(unsigned long n, Rational lambda) : n_(n), lambda_(std::move(lambda)) {
    if (n_ < 1) throw std::invalid_argument("matching model needs n >= 1");
    if (sgn(lambda_) <= 0 || lambda_ > 1) {
        throw std::invalid_argument("lambda must lie in (0, 1], got " + to_fraction_string(lambda_));
    }
}

FinitePmf classical_matching_pmf(unsigned long n) {
    if (n < 1) throw std::invalid_argument("classical_matching_pmf needs n >= 1");
    FinitePmf pmf = generalized_matching_pmf(MatchingParams(n, 1));
    return FinitePmf(pmf.probs(), "classical(n=" + std::to_string(n) + ")");
}

FinitePmf generalized_matching_pmf(const MatchingParams& p, PmfMethod method) {
    const unsigned long n = p.n();
    const Rational& lambda = p.lambda();
    std::vector<Rational> probs(n + 1);

    if (method == PmfMethod::Series) {
        // Partial sums of e^{-lambda}: prefix[m] = sum_{i<=m} (-lambda)^i / i!.
        std::vector<Rational> prefix(n + 1);
        Rational term(1), acc(0);
        for (unsigned long i = 0; i <= n; ++i) {
            if (i > 0) {
                term *= -lambda;
                term /= Rational(i);
            }
            acc += term;
            prefix[i] = acc;
        }
        Rational lead(1);  // lambda^j / j!
        for (unsigned long j = 0; j <= n; ++j) {
            if (j > 0) {
                lead *= lambda;
                lead /= Rational(j);
            }
            probs[j] = lead * prefix[n - j];
        }
    } else {
        std::vector<Rational> s(n + 1);  // S_i = C(n,i) lambda^i (n-i)!/n! = lambda^i / i!
        for (unsigned long i = 0; i <= n; ++i) s[i] = pow(lambda, i) / Rational(factorial(i));
        for (unsigned long j = 0; j <= n; ++j) {
            Rational acc(0);
            for (unsigned long i = j; i <= n; ++i) {
                Rational t = Rational(binomial(i, j)) * s[i];
                if ((i - j) % 2 == 0) acc += t;
                else acc -= t;
            }
            probs[j] = acc;
        }
    }
    return FinitePmf(std::move(probs), "generalized(n=" + std::to_string(n) + ",lambda=" + to_fraction_string(lambda) + ")");
}

FinitePmf binomial_thinning(const FinitePmf& pmf, const Rational& lambda) {
    if (sgn(lambda) < 0 || lambda > 1) throw std::invalid_argument("thinning probability must lie in [0, 1]");
    const std::size_t n = pmf.max_index();
    const Rational keep = lambda;
    const Rational drop = 1 - lambda;
    std::vector<Rational> probs(n + 1, Rational(0));
    for (std::size_t m = 0; m <= n; ++m) {
        if (sgn(pmf[m]) == 0) continue;
        for (std::size_t j = 0; j <= m; ++j) {
            probs[j] += pmf[m] * Rational(binomial(m, j)) * pow(keep, j) * pow(drop, m - j);
        }
    }
    return FinitePmf(std::move(probs), "thinned(" + pmf.label() + ")");
}

FinitePmf thinning_pmf(const MatchingParams& p) {
    // Classical pmf by the alternating-sum formula with lambda = 1, then
    // Binomial(m, lambda) censoring of each count m.
    const unsigned long n = p.n();
    std::vector<Rational> classical(n + 1);
    for (unsigned long j = 0; j <= n; ++j) {
        Rational acc(0), term(1);
        for (unsigned long k = 0; k + j <= n; ++k) {
            if (k > 0) {
                term /= Rational(k);
                term = -term;
            }
            acc += term;
        }
        classical[j] = acc / Rational(factorial(j));
    }
    FinitePmf thinned = binomial_thinning(FinitePmf(std::move(classical)), p.lambda());
    return FinitePmf(thinned.probs(), "thinning(n=" + std::to_string(n) + ",lambda=" + to_fraction_string(p.lambda()) + ")");
}

std::vector<HighPrecision> poisson_pmf_prefix(const Rational& lambda, unsigned long n, int digits) {
    if (sgn(lambda) <= 0) throw std::invalid_argument("poisson_pmf_prefix requires lambda > 0");
    const HighPrecision base = exp_eval(-lambda, digits + 2);
    std::vector<HighPrecision> out;
    out.reserve(n + 1);
    Rational weight(1);  // lambda^j / j!
    for (unsigned long j = 0; j <= n; ++j) {
        if (j > 0) {
            weight *= lambda;
            weight /= Rational(j);
        }
        out.push_back((base * weight).with_digits(digits).rounded());
    }
    return out;
}

Integer falling_factorial(unsigned long x, unsigned long k) {
    if (k > x) return 0;
    Integer r(1);
    for (unsigned long i = 0; i < k; ++i) r *= (x - i);
    return r;
}

FactorialMomentSeq factorial_moments(const FinitePmf& pmf, std::size_t kmax) {
    FactorialMomentSeq seq;
    seq.moments.assign(kmax + 1, Rational(0));
    for (std::size_t j = 0; j < pmf.size(); ++j) {
        if (sgn(pmf[j]) == 0) continue;
        Integer falling(1);
        for (std::size_t k = 0; k <= kmax && k <= j; ++k) {
            if (k > 0) falling *= static_cast<unsigned long>(j - k + 1);
            seq.moments[k] += pmf[j] * Rational(falling);
        }
    }
    return seq;
}

FactorialMomentSeq factorial_moments(const FinitePmf& pmf) { return factorial_moments(pmf, pmf.max_index()); }

Rational matching_factorial_moment(const MatchingParams& p, unsigned long k) {
    return k <= p.n() ? pow(p.lambda(), k) : Rational(0);
}

SignedMassSeq invert_factorial_moments(const FactorialMomentSeq& m) {
    if (m.moments.empty() || m.moments[0] != 1) {
        throw std::invalid_argument("moment inversion needs moments[0] = 1");
    }
    const std::size_t order = m.max_order();
    SignedMassSeq out;
    out.values.assign(order + 1, Rational(0));
    for (std::size_t j = 0; j <= order; ++j) {
        Rational acc(0);
        for (std::size_t k = j; k <= order; ++k) {
            if (sgn(m.moments[k]) == 0) continue;
            Rational t = Rational(binomial(k, j)) * m.moments[k] / Rational(factorial(k));
            if ((k - j) % 2 == 0) acc += t;
            else acc -= t;
        }
        out.values[j] = acc;
    }
    Rational total(0);
    bool non_negative = true;
    for (const auto& v : out.values) {
        total += v;
        if (sgn(v) < 0) non_negative = false;
    }
    out.is_pmf = non_negative && total == 1;
    return out;
}

Rational pgf_eval(const FinitePmf& pmf, const Rational& u) {
    // Horner from the top coefficient.
    Rational acc(0);
    for (std::size_t j = pmf.size(); j-- > 0;) {
        acc *= u;
        acc += pmf[j];
    }
    return acc;
}

}  // namespace matchdist
