#include "horoperiod/scalar_kernel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace horo {

namespace {

constexpr double kLn2 = std::numbers::ln2;

void require_gamma(const ProblemParams& params) {
    if (!(params.gamma > 0.0) || !std::isfinite(params.gamma))
        fail(ErrorKind::DomainError, "gamma must be positive and finite, got " + std::to_string(params.gamma));
}

void require_energy_region(const ProblemParams& params) {
    require_gamma(params);
    if (!(params.p < 0.0)) fail(ErrorKind::UnsupportedRegion, "energy requires p < 0");
    if (!(params.q >= 1.0)) fail(ErrorKind::UnsupportedRegion, "energy requires q >= 1");
}

void require_oscillation_region(const ProblemParams& params) {
    require_gamma(params);
    if (!(params.p <= -1.0) || !(params.q >= 1.0))
        fail(ErrorKind::UnsupportedRegion, "requires p <= -1 and q >= 1");
}

// log(2 cosh(2t)) = log(u^2 + u^-2) with t = log u.
double log_u2_plus_inv(double t) { return 2.0 * std::abs(t) + std::log1p(std::exp(-4.0 * std::abs(t))); }

// log(u^(2-2p) - u^(-2-2p)) - log(2^q gamma (u^2+u^-2)^(1-q)), t = log u > 0.
double log_critical_balance(const ProblemParams& pr, double t) {
    const double lhs = (-2.0 - 2.0 * pr.p) * t + std::log(std::expm1(4.0 * t));
    const double rhs = pr.q * kLn2 + std::log(pr.gamma) + (1.0 - pr.q) * log_u2_plus_inv(t);
    return lhs - rhs;
}

double energy_with_velocity(const ProblemParams& pr, double u, double v2) {
    const double base = v2 + u * u + 1.0 / (u * u);
    const double kinetic = pr.q == 1.0 ? base : std::pow(base, pr.q) / pr.q;
    // -(2^q gamma / p) u^(2p), exponent taken in log form so that tiny u overflows to +inf cleanly
    const double coeff = -std::exp(pr.q * kLn2) * pr.gamma / pr.p;
    return kinetic + coeff * std::exp(2.0 * pr.p * std::log(u));
}

RootTolerance log_space(const RootTolerance& tol) { return {0.0, tol.rel, tol.max_iter}; }

} // namespace

void validate(const ProblemParams& params) {
    if (!std::isfinite(params.p) || !std::isfinite(params.q))
        fail(ErrorKind::DomainError, "p and q must be finite");
    require_gamma(params);
}

double potential_energy(const ProblemParams& params, double u) {
    if (!(u > 0.0)) fail(ErrorKind::NonpositiveArgument, "u must be positive");
    require_energy_region(params);
    return energy_with_velocity(params, u, 0.0);
}

double first_integral(const ProblemParams& params, double u, double u_tau) {
    if (!(u > 0.0)) fail(ErrorKind::NonpositiveArgument, "u must be positive");
    require_energy_region(params);
    return energy_with_velocity(params, u, u_tau * u_tau);
}

double critical_residual(const ProblemParams& params, double u) {
    if (!(u > 1.0)) fail(ErrorKind::DomainError, "critical residual needs u > 1");
    const double d = log_critical_balance(params, std::log(u));
    return d > 0.0 ? -std::expm1(-d) : std::expm1(d);
}

CriticalData critical_point(const ProblemParams& params, const RootTolerance& tol) {
    require_oscillation_region(params);
    auto f = [&](double t) { return log_critical_balance(params, t); };

    double lo = 1e-8;
    while (f(lo) > 0.0) {
        lo *= 1e-4;
        if (lo < 1e-280) fail(ErrorKind::ConvergenceFailure, "critical point bracket underflow");
    }
    double hi = 1.0;
    while (f(hi) < 0.0) {
        hi *= 2.0;
        if (hi > 1e6) fail(ErrorKind::ConvergenceFailure, "critical point bracket overflow");
    }
    // the balance has slope ~ (2 - 2p) in t; scale so the residual meets tol.rel
    const double slope = 6.0 - 2.0 * params.p + 2.0 * std::abs(params.q - 1.0);
    const auto root = brent_root(f, lo, hi, {0.0, tol.rel / slope, tol.max_iter});
    const double u_gamma = std::exp(root.x);
    return {u_gamma, potential_energy(params, u_gamma)};
}

double degenerate_cutoff(double e_star) { return 1e-12 * std::max(1.0, std::abs(e_star)); }

TurningPoints turning_points(const ProblemParams& params, double energy, const RootTolerance& tol) {
    return turning_points(params, critical_point(params, tol), energy, tol);
}

TurningPoints turning_points(const ProblemParams& params, const CriticalData& crit, double energy,
                             const RootTolerance& tol) {
    require_oscillation_region(params);
    if (!std::isfinite(energy)) fail(ErrorKind::DomainError, "energy level must be finite");
    const double cutoff = degenerate_cutoff(crit.e_star);
    if (energy < crit.e_star - cutoff)
        fail(ErrorKind::BelowMinimum, "E = " + std::to_string(energy) + " below E* = " + std::to_string(crit.e_star));
    if (std::abs(energy - crit.e_star) <= cutoff)
        fail(ErrorKind::DegenerateLevel, "E is within resolution of the minimum level");

    auto g = [&](double t) { return energy_with_velocity(params, std::exp(t), 0.0) - energy; };
    const double t_gamma = std::log(crit.u_gamma);

    double step = 0.25;
    while (g(t_gamma - step) <= 0.0) {
        step *= 2.0;
        if (step > 2000.0) fail(ErrorKind::ConvergenceFailure, "cannot bracket u-");
    }
    const double t_minus = brent_root(g, t_gamma - step, t_gamma, log_space(tol)).x;

    step = 0.25;
    while (g(t_gamma + step) <= 0.0) {
        step *= 2.0;
        if (step > 2000.0) fail(ErrorKind::ConvergenceFailure, "cannot bracket u+");
    }
    const double t_plus = brent_root(g, t_gamma, t_gamma + step, log_space(tol)).x;
    return {std::exp(t_minus), std::exp(t_plus)};
}

ShapeCoords shape_from_turning(const TurningPoints& tp) {
    if (!(tp.u_minus > 0.0) || !(tp.u_plus > tp.u_minus))
        fail(ErrorKind::InvalidShape, "turning points must satisfy 0 < u- < u+");
    return {1.0 / (tp.u_plus * tp.u_minus), tp.u_plus / tp.u_minus};
}

TurningPoints turning_from_shape(const ShapeCoords& shape) {
    const double scale = 1.0 / std::sqrt(shape.alpha);
    const double root_r = std::sqrt(shape.r);
    return {scale / root_r, scale * root_r};
}

GammaEnergy gamma_energy_from_shape(double p, double q, const ShapeCoords& shape) {
    const double alpha = shape.alpha;
    const double r = shape.r;
    if (!(alpha > 0.0 && alpha < 1.0)) fail(ErrorKind::InvalidShape, "alpha must lie in (0, 1)");
    if (!(r > 1.0) || !std::isfinite(r)) fail(ErrorKind::InvalidShape, "r must exceed 1");
    if (!(p <= -1.0) || !(q >= 1.0)) fail(ErrorKind::UnsupportedRegion, "requires p <= -1 and q >= 1");

    const double log_r = std::log(r);
    const double a2 = alpha * alpha;
    const double big_a = r * r + a2;      // (u+^2 + u+^-2) alpha r
    const double big_b = 1.0 + a2 * r * r; // (u-^2 + u-^-2) alpha r
    const double log_ar = std::log(alpha) + log_r;
    const double r2p = std::exp(2.0 * p * log_r);
    const double one_minus_r2p = -std::expm1(2.0 * p * log_r);

    // A^q - B^q = B^q expm1(q log1p((A - B)/B)), A - B = (r^2 - 1)(1 - alpha^2)
    const double rel_gap = (r - 1.0) * (r + 1.0) * (1.0 - a2) / big_b;
    const double log_diff = q * std::log(big_b) + std::log(std::expm1(q * std::log1p(rel_gap)));
    const double log_gamma = std::log(-p / q) - q * kLn2 + log_diff - (q - p) * log_ar - std::log(one_minus_r2p);

    const double x = std::exp(q * (std::log(big_a) - log_ar));
    const double y = r2p * std::exp(q * (std::log(big_b) - log_ar));
    const double energy = (x - y) / (q * one_minus_r2p);
    return {std::exp(log_gamma), energy};
}

ConstantSolutions constant_solutions(const ProblemParams& params, const RootTolerance& tol) {
    validate(params);
    const double p = params.p;
    const double q = params.q;
    const double target = std::log(params.gamma);

    // With c = e^t the left side is e^(-pt) cosh(t)^(q-1) sinh(t); work with its logarithm.
    auto log_lhs = [&](double t) {
        const double e = std::exp(-2.0 * t);
        const double log_cosh = t + std::log1p(e) - kLn2;
        const double log_sinh = t + std::log(-std::expm1(-2.0 * t)) - kLn2;
        return -p * t + (q - 1.0) * log_cosh + log_sinh;
    };
    // d/dt of log_lhs.
    auto slope = [&](double t) { return -p + (q - 1.0) * std::tanh(t) + 1.0 / std::tanh(t); };

    const double tail = q - p; // slope as t -> infinity
    std::vector<double> crit;  // zeros of slope, ascending
    auto zero_of_slope = [&](double a, double b) {
        return brent_root(slope, a, b, {0.0, 1e-15, 400}).x;
    };
    auto expand_up = [&](double a, auto pred) {
        double b = std::max(2.0 * a, 1.0);
        while (!pred(b)) {
            b *= 2.0;
            if (b > 1e300) fail(ErrorKind::ConvergenceFailure, "bracket expansion failed");
        }
        return b;
    };
    auto expand_down = [&](double b, auto pred) {
        double a = std::min(0.5 * b, 1e-3);
        while (!pred(a)) {
            a *= 1e-3;
            if (a < 1e-300) fail(ErrorKind::ConvergenceFailure, "bracket expansion failed");
        }
        return a;
    };

    if (q <= 2.0) {
        // slope decreases monotonically from +inf to tail
        if (tail < 0.0) {
            const double hi = expand_up(1.0, [&](double t) { return slope(t) < 0.0; });
            const double lo = expand_down(hi, [&](double t) { return slope(t) > 0.0; });
            crit.push_back(zero_of_slope(lo, hi));
        }
    } else {
        // slope decreases on (0, t*) and increases on (t*, inf)
        const double t_star = std::atanh(1.0 / std::sqrt(q - 1.0));
        if (slope(t_star) < 0.0) {
            const double lo = expand_down(t_star, [&](double t) { return slope(t) > 0.0; });
            crit.push_back(zero_of_slope(lo, t_star));
            if (tail > 0.0) {
                const double hi = expand_up(t_star, [&](double t) { return slope(t) > 0.0; });
                crit.push_back(zero_of_slope(t_star, hi));
            }
        }
    }

    const double inf = std::numeric_limits<double>::infinity();
    const double end_value = tail > 0.0 ? inf : (tail < 0.0 ? -inf : -q * kLn2);
    ConstantSolutions out;

    // Supremum when bounded above.
    if (tail <= 0.0) {
        double sup = end_value;
        for (double t : crit) sup = std::max(sup, log_lhs(t));
        out.gamma_threshold = std::exp(sup);
    }

    const double tangency = 1e-12;
    std::vector<double> knots{0.0};
    knots.insert(knots.end(), crit.begin(), crit.end());
    knots.push_back(inf);
    auto value_at = [&](std::size_t i) {
        if (i == 0) return -inf;
        if (i + 1 == knots.size()) return end_value;
        return log_lhs(knots[i]);
    };
    auto is_crit = [&](std::size_t i) { return i > 0 && i + 1 < knots.size(); };

    std::vector<double> roots_t;
    for (std::size_t i = 1; i + 1 < knots.size(); ++i) {
        if (std::abs(value_at(i) - target) <= tangency) roots_t.push_back(knots[i]);
    }
    for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
        const double va = value_at(i), vb = value_at(i + 1);
        if ((is_crit(i) && std::abs(va - target) <= tangency) || (is_crit(i + 1) && std::abs(vb - target) <= tangency))
            continue;
        if (!((va < target && target < vb) || (vb < target && target < va))) continue;
        const bool rising = vb > va;
        auto below = [&](double t) { return rising ? log_lhs(t) < target : log_lhs(t) > target; };
        double a = knots[i], b = knots[i + 1];
        if (i == 0) a = expand_down(std::isfinite(b) ? b : 1.0, below);
        if (!std::isfinite(b)) b = expand_up(std::max(a, 1.0), [&](double t) { return !below(t); });
        auto f = [&](double t) { return log_lhs(t) - target; };
        roots_t.push_back(brent_root(f, a, b, log_space(tol)).x);
    }
    std::sort(roots_t.begin(), roots_t.end());
    for (double t : roots_t) out.roots.push_back(std::exp(t));
    return out;
}

} // namespace horo
