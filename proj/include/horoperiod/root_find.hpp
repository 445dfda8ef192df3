#pragma once

#include <cmath>
#include <limits>
#include <utility>

#include "horoperiod/errors.hpp"

namespace horo {

struct RootTolerance {
    double rel = 1e-12;
    double abs = 1e-300;
    int max_iter = 400;
};

struct RootResult {
    double x;
    double fx;
    int iterations;
};

/*
 * Brent's method on a sign-changing bracket [a, b].
 *
 * Function values may be +-inf at the bracket ends (large negative exponents
 * overflow near u -> 0); only their sign is used there, and any step whose
 * interpolant is non-finite falls back to bisection.
 */
template <class F>
RootResult brent_root(F&& f, double a, double b, const RootTolerance& tol = {}) {
    double fa = f(a);
    double fb = f(b);
    if (fa == 0.0) return {a, fa, 0};
    if (fb == 0.0) return {b, fb, 0};
    if (std::isnan(fa) || std::isnan(fb) || std::signbit(fa) == std::signbit(fb)) {
        fail(ErrorKind::ConvergenceFailure, "root bracket does not change sign");
    }

    double c = a, fc = fa;
    double d = b - a, e = d;
    for (int it = 1; it <= tol.max_iter; ++it) {
        if (std::signbit(fb) == std::signbit(fc)) {
            c = a;
            fc = fa;
            d = e = b - a;
        }
        if (std::abs(fc) < std::abs(fb)) {
            a = b; b = c; c = a;
            fa = fb; fb = fc; fc = fa;
        }
        const double tol1 = 2.0 * std::numeric_limits<double>::epsilon() * std::abs(b)
                            + 0.5 * std::max(tol.rel * std::abs(b), tol.abs);
        const double xm = 0.5 * (c - b);
        if (std::abs(xm) <= tol1 || fb == 0.0) return {b, fb, it};

        const bool finite = std::isfinite(fa) && std::isfinite(fb) && std::isfinite(fc);
        if (finite && std::abs(e) >= tol1 && std::abs(fa) > std::abs(fb)) {
            double p, q, r;
            const double s = fb / fa;
            if (a == c) {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                q = fa / fc;
                r = fb / fc;
                p = s * (2.0 * xm * q * (q - r) - (b - a) * (r - 1.0));
                q = (q - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if (p > 0.0) q = -q;
            p = std::abs(p);
            const double min1 = 3.0 * xm * q - std::abs(tol1 * q);
            const double min2 = std::abs(e * q);
            if (std::isfinite(p / q) && 2.0 * p < std::min(min1, min2)) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += (std::abs(d) > tol1) ? d : std::copysign(tol1, xm);
        fb = f(b);
        if (std::isnan(fb)) fail(ErrorKind::DomainError, "root function returned NaN");
    }
    fail(ErrorKind::ConvergenceFailure, "root iteration limit reached");
}

} // namespace horo
