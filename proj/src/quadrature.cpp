#include "matchdist/quadrature.hpp"

#include <mpfr.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <utility>
#include <vector>

namespace matchdist {
namespace {

// Minimal RAII handle for an mpfr_t with its own precision.
class Real {
public:
    explicit Real(mpfr_prec_t prec) { mpfr_init2(v_, prec); mpfr_set_zero(v_, 1); }
    Real(const Real& other) {
        mpfr_init2(v_, mpfr_get_prec(other.v_));
        mpfr_set(v_, other.v_, MPFR_RNDN);
    }
    Real& operator=(const Real& other) {
        if (this != &other) {
            mpfr_set_prec(v_, mpfr_get_prec(other.v_));
            mpfr_set(v_, other.v_, MPFR_RNDN);
        }
        return *this;
    }
    ~Real() { mpfr_clear(v_); }

    mpfr_ptr get() { return v_; }
    mpfr_srcptr get() const { return v_; }

private:
    mpfr_t v_;
};

struct Rule {
    std::vector<Real> nodes;    // on [-1, 1]
    std::vector<Real> weights;
};

// Legendre P_n(x) and its derivative by the three-term recurrence.
void legendre(int n, const Real& x, Real& p, Real& dp, mpfr_prec_t prec) {
    Real p0(prec), p1(prec), tmp(prec), tmp2(prec);
    mpfr_set_ui(p0.get(), 1, MPFR_RNDN);
    mpfr_set(p1.get(), x.get(), MPFR_RNDN);
    for (int k = 2; k <= n; ++k) {
        // P_k = ((2k-1) x P_{k-1} - (k-1) P_{k-2}) / k
        mpfr_mul(tmp.get(), x.get(), p1.get(), MPFR_RNDN);
        mpfr_mul_ui(tmp.get(), tmp.get(), static_cast<unsigned long>(2 * k - 1), MPFR_RNDN);
        mpfr_mul_ui(tmp2.get(), p0.get(), static_cast<unsigned long>(k - 1), MPFR_RNDN);
        mpfr_sub(tmp.get(), tmp.get(), tmp2.get(), MPFR_RNDN);
        mpfr_div_ui(tmp.get(), tmp.get(), static_cast<unsigned long>(k), MPFR_RNDN);
        p0 = p1;
        p1 = tmp;
    }
    p = p1;
    // P'_n = n (x P_n - P_{n-1}) / (x^2 - 1)
    mpfr_mul(tmp.get(), x.get(), p1.get(), MPFR_RNDN);
    mpfr_sub(tmp.get(), tmp.get(), p0.get(), MPFR_RNDN);
    mpfr_mul_ui(tmp.get(), tmp.get(), static_cast<unsigned long>(n), MPFR_RNDN);
    mpfr_sqr(tmp2.get(), x.get(), MPFR_RNDN);
    mpfr_sub_ui(tmp2.get(), tmp2.get(), 1, MPFR_RNDN);
    mpfr_div(dp.get(), tmp.get(), tmp2.get(), MPFR_RNDN);
}

Rule build_rule(int n, mpfr_prec_t prec) {
    Rule rule;
    const mpfr_prec_t work = prec + 32;
    Real x(work), p(work), dp(work), step(work), w(work);
    for (int i = 1; i <= n; ++i) {
        double guess = std::cos(M_PI * (i - 0.25) / (n + 0.5));
        mpfr_set_d(x.get(), guess, MPFR_RNDN);
        // Newton converges quadratically from the Chebyshev-like guess.
        for (int iter = 0; iter < 200; ++iter) {
            legendre(n, x, p, dp, work);
            mpfr_div(step.get(), p.get(), dp.get(), MPFR_RNDN);
            mpfr_sub(x.get(), x.get(), step.get(), MPFR_RNDN);
            if (mpfr_zero_p(step.get()) || mpfr_get_exp(step.get()) < -static_cast<mpfr_exp_t>(work) + 4) break;
        }
        legendre(n, x, p, dp, work);
        // w = 2 / ((1 - x^2) P'_n(x)^2)
        mpfr_sqr(w.get(), x.get(), MPFR_RNDN);
        mpfr_ui_sub(w.get(), 1, w.get(), MPFR_RNDN);
        mpfr_mul(w.get(), w.get(), dp.get(), MPFR_RNDN);
        mpfr_mul(w.get(), w.get(), dp.get(), MPFR_RNDN);
        mpfr_ui_div(w.get(), 2, w.get(), MPFR_RNDN);
        Real node(prec), weight(prec);
        mpfr_set(node.get(), x.get(), MPFR_RNDN);
        mpfr_set(weight.get(), w.get(), MPFR_RNDN);
        rule.nodes.push_back(node);
        rule.weights.push_back(weight);
    }
    return rule;
}

const Rule& cached_rule(int n, mpfr_prec_t prec) {
    static std::mutex mutex;
    static std::map<std::pair<int, mpfr_prec_t>, Rule> cache;
    std::lock_guard lock(mutex);
    auto key = std::make_pair(n, prec);
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, build_rule(n, prec)).first;
    return it->second;  // std::map nodes are stable
}

class Integrand {
public:
    Integrand(const IntegrandId& id, mpfr_prec_t prec)
        : id_(id), prec_(prec), rate_(prec), a_(prec), b_(prec), e_(prec) {
        Rational rate = id.rate();
        mpfr_set_q(rate_.get(), rate.get_mpq_t(), MPFR_RNDN);
    }

    void operator()(const Real& y, Real& out) {
        mpfr_mul(e_.get(), rate_.get(), y.get(), MPFR_RNDN);
        mpfr_exp(e_.get(), e_.get(), MPFR_RNDN);
        const unsigned long n = id_.n;
        if (id_.tag == Kernel::TvKernel) {
            mpfr_pow_ui(a_.get(), y.get(), n, MPFR_RNDN);
            mpfr_ui_sub(b_.get(), 2, y.get(), MPFR_RNDN);
            mpfr_pow_ui(b_.get(), b_.get(), n, MPFR_RNDN);
            mpfr_add(a_.get(), a_.get(), b_.get(), MPFR_RNDN);
        } else {
            mpfr_ui_sub(a_.get(), 1, y.get(), MPFR_RNDN);
            mpfr_pow_ui(a_.get(), a_.get(), n, MPFR_RNDN);
        }
        mpfr_mul(out.get(), a_.get(), e_.get(), MPFR_RNDN);
    }

private:
    const IntegrandId& id_;
    mpfr_prec_t prec_;
    Real rate_, a_, b_, e_;
};

// Gauss rule of the given order on [lo, hi].
void apply_rule(const Rule& rule, Integrand& f, const Real& lo, const Real& hi, Real& out, mpfr_prec_t prec) {
    Real half(prec), mid(prec), y(prec), fy(prec);
    mpfr_sub(half.get(), hi.get(), lo.get(), MPFR_RNDN);
    mpfr_div_2ui(half.get(), half.get(), 1, MPFR_RNDN);
    mpfr_add(mid.get(), hi.get(), lo.get(), MPFR_RNDN);
    mpfr_div_2ui(mid.get(), mid.get(), 1, MPFR_RNDN);
    mpfr_set_zero(out.get(), 1);
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        mpfr_fma(y.get(), half.get(), rule.nodes[i].get(), mid.get(), MPFR_RNDN);
        f(y, fy);
        mpfr_fma(out.get(), rule.weights[i].get(), fy.get(), out.get(), MPFR_RNDN);
    }
    mpfr_mul(out.get(), out.get(), half.get(), MPFR_RNDN);
}

Rational to_rational(const Real& r) {
    Rational q;
    mpfr_get_q(q.get_mpq_t(), r.get());
    return q;
}

int digits_for_tol(const Rational& tol) {
    // smallest d with 10^-d <= tol
    int d = 0;
    while (decimal_ulp(d) > tol) ++d;
    return std::max(d, 1);
}

}  // namespace

IntegrandId IntegrandId::exp_tail(Rational x, unsigned long n) {
    IntegrandId id;
    id.tag = Kernel::ExpTail;
    id.n = n;
    id.x = std::move(x);
    return id;
}

IntegrandId IntegrandId::fm_kernel(unsigned long n, Rational alpha, Rational lambda) {
    IntegrandId id;
    id.tag = Kernel::FmKernel;
    id.n = n;
    id.alpha = std::move(alpha);
    id.lambda = std::move(lambda);
    return id;
}

IntegrandId IntegrandId::tv_kernel(unsigned long n, Rational lambda) {
    IntegrandId id;
    id.tag = Kernel::TvKernel;
    id.n = n;
    id.lambda = std::move(lambda);
    return id;
}

Rational IntegrandId::rate() const {
    switch (tag) {
        case Kernel::ExpTail: return x;
        case Kernel::FmKernel: return alpha * lambda;
        case Kernel::TvKernel: return -lambda;
    }
    return 0;
}

std::string IntegrandId::describe() const {
    switch (tag) {
        case Kernel::ExpTail: return "EXP_TAIL(n=" + std::to_string(n) + ", x=" + to_fraction_string(x) + ")";
        case Kernel::FmKernel:
            return "FM_KERNEL(n=" + std::to_string(n) + ", alpha=" + to_fraction_string(alpha) +
                   ", lambda=" + to_fraction_string(lambda) + ")";
        case Kernel::TvKernel:
            return "TV_KERNEL(n=" + std::to_string(n) + ", lambda=" + to_fraction_string(lambda) + ")";
    }
    return "?";
}

HighPrecision integrate(const IntegrandId& f, const Rational& tol, const QuadratureOptions& opts) {
    if (sgn(tol) <= 0) throw std::invalid_argument("integrate requires tol > 0");

    const int tol_digits = digits_for_tol(tol);
    const int work_digits = std::max(opts.digits, tol_digits) + 20;
    const auto prec = static_cast<mpfr_prec_t>(work_digits * 3.33 + 16);
    const Rule& g8 = cached_rule(8, prec);
    const Rule& g16 = cached_rule(16, prec);
    Integrand integrand(f, prec);

    struct Panel {
        Real lo, hi;
        int depth;
    };
    std::vector<Panel> stack;
    {
        Real lo(prec), hi(prec);
        mpfr_set_ui(hi.get(), 1, MPFR_RNDN);
        stack.push_back({lo, hi, 0});
    }

    Real coarse(prec), fine(prec), diff(prec), total(prec), err_total(prec), abs_total(prec);
    const Rational panel_tol = tol / 2;  // half for the rule disagreement, half for rounding
    bool exhausted = false;

    while (!stack.empty()) {
        Panel panel = stack.back();
        stack.pop_back();
        apply_rule(g8, integrand, panel.lo, panel.hi, coarse, prec);
        apply_rule(g16, integrand, panel.lo, panel.hi, fine, prec);
        mpfr_sub(diff.get(), fine.get(), coarse.get(), MPFR_RNDU);
        mpfr_abs(diff.get(), diff.get(), MPFR_RNDU);

        Real width(prec);
        mpfr_sub(width.get(), panel.hi.get(), panel.lo.get(), MPFR_RNDN);
        Rational allowed = panel_tol * to_rational(width);

        if (to_rational(diff) <= allowed || panel.depth >= opts.max_depth) {
            if (panel.depth >= opts.max_depth && to_rational(diff) > allowed) exhausted = true;
            mpfr_add(total.get(), total.get(), fine.get(), MPFR_RNDN);
            mpfr_add(err_total.get(), err_total.get(), diff.get(), MPFR_RNDU);
            Real af(prec);
            mpfr_abs(af.get(), fine.get(), MPFR_RNDU);
            mpfr_add(abs_total.get(), abs_total.get(), af.get(), MPFR_RNDU);
            continue;
        }
        Real mid(prec);
        mpfr_add(mid.get(), panel.lo.get(), panel.hi.get(), MPFR_RNDN);
        mpfr_div_2ui(mid.get(), mid.get(), 1, MPFR_RNDN);
        stack.push_back({mid, panel.hi, panel.depth + 1});
        stack.push_back({panel.lo, mid, panel.depth + 1});
    }

    // Rounding allowance: every evaluation is carried ~20 digits beyond what
    // the tolerance needs; charge 2^-(prec-24) per unit of integrated mass.
    Rational rounding = to_rational(abs_total);
    mpz_mul_2exp(rounding.get_den_mpz_t(), rounding.get_den_mpz_t(), static_cast<unsigned long>(prec - 24));
    rounding.canonicalize();
    Rational err = to_rational(err_total) + rounding;

    if (exhausted || err > tol) {
        throw QuadratureError("quadrature of " + f.describe() + " reached depth limit; achieved bound " +
                                  format_decimal(err, 6),
                              err);
    }
    return HighPrecision(to_rational(total), err, tol_digits).rounded();
}

}  // namespace matchdist
