#pragma once

#include "matchdist/high_precision.hpp"
#include "matchdist/rational.hpp"

#include <stdexcept>
#include <string>

namespace matchdist {

/// Integrands on [0, 1] that show up in the distance closed forms.
enum class Kernel {
    ExpTail,   ///< (1-y)^n e^{x y}
    FmKernel,  ///< (1-y)^n e^{alpha lambda y}
    TvKernel,  ///< [y^n + (2-y)^n] e^{-lambda y}
};

struct IntegrandId {
    Kernel tag = Kernel::ExpTail;
    unsigned long n = 0;
    Rational x{0};
    Rational alpha{0};
    Rational lambda{0};

    static IntegrandId exp_tail(Rational x, unsigned long n);
    static IntegrandId fm_kernel(unsigned long n, Rational alpha, Rational lambda);
    static IntegrandId tv_kernel(unsigned long n, Rational lambda);

    /// Coefficient c of the exponential factor e^{c y}.
    Rational rate() const;
    std::string describe() const;
};

class QuadratureError : public std::runtime_error {
public:
    QuadratureError(const std::string& what, Rational achieved)
        : std::runtime_error(what), achieved_(std::move(achieved)) {}
    const Rational& achieved() const { return achieved_; }

private:
    Rational achieved_;
};

struct QuadratureOptions {
    int max_depth = 40;
    /// Working precision for nodes and integrand evaluation; raised
    /// automatically when tol asks for more.
    int digits = kDefaultDigits;
};

/// Adaptive Gauss-Legendre quadrature over [0, 1].
///
/// Each panel is integrated with the 8- and 16-point rules; a panel is
/// accepted when the two disagree by at most tol * width / 2, otherwise it is
/// bisected. The returned bound is the summed disagreement plus a rounding
/// allowance, and never exceeds tol.
HighPrecision integrate(const IntegrandId& f, const Rational& tol, const QuadratureOptions& opts = {});

}  // namespace matchdist
