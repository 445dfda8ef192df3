#include "horoperiod/period_engine.hpp"

#include <boost/math/quadrature/tanh_sinh.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace horo {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kChebyshevNodeCap = 1024;
constexpr std::size_t kTanhSinhLevels = 12;

void require_period_region(double p, double q) {
    if (!(p <= -1.0) || !(q >= 1.0) || !std::isfinite(p) || !std::isfinite(q))
        fail(ErrorKind::DomainError, "period function needs p <= -1 and q >= 1");
}

void require_chart(double alpha, double r) {
    if (!(alpha >= 0.0 && alpha < 1.0)) fail(ErrorKind::DomainError, "alpha must lie in [0, 1)");
    if (!(r > 1.0)) fail(ErrorKind::DomainError, "r must exceed 1");
    if (!(r < 1e150)) fail(ErrorKind::DomainError, "r too large for double evaluation");
}

// log(1 + lambda (e^k - 1)), k >= 0
double log_mix_up(double lambda, double k) {
    if (k < 700.0) return std::log1p(lambda * std::expm1(k));
    return k + std::log(lambda + (1.0 - lambda) * std::exp(-k));
}

// log(1 + mu (e^-k - 1)), k >= 0
double log_mix_down(double mu, double k) {
    const double arg = mu * -std::expm1(-k);
    if (arg < 0.5) return std::log1p(-arg);
    return std::log((1.0 - mu) + mu * std::exp(-k));
}

/*
 * Shape-chart integrand with everything that depends only on (p, q, alpha, r)
 * hoisted out. F is evaluated relative to whichever endpoint is closer, so
 * the O((s-1)(r-s)) value is obtained without cancelling O(1) terms.
 */
struct ShapeIntegrand {
    double p, q, alpha, r;
    double log_r, a2, big_a, big_b, q_log_ratio, lam_den;

    ShapeIntegrand(double p_, double q_, double alpha_, double r_) : p(p_), q(q_), alpha(alpha_), r(r_) {
        log_r = std::log(r);
        a2 = alpha * alpha;
        big_a = r * r + a2;
        big_b = 1.0 + a2 * r * r;
        q_log_ratio = q * std::log1p((r - 1.0) * (r + 1.0) * (1.0 - a2) / big_b);
        lam_den = std::expm1(2.0 * p * log_r); // r^2p - 1 < 0
    }

    // log_s = log s, log_sr = log(s/r); near_low selects the s = 1 expansion
    double eval(double log_s, double log_sr, bool near_low) const {
        if (near_low) {
            const double lambda = std::expm1(2.0 * p * log_s) / lam_den;
            const double m_minus_b = big_b * std::expm1(log_mix_up(lambda, q_log_ratio) / q);
            const double s2m1 = std::expm1(2.0 * log_s);
            const double tail = 1.0 - a2 * std::exp(2.0 * (log_r - log_s));
            return m_minus_b - s2m1 * tail;
        }
        // 1 - lambda = r^2p (s/r)^2p - r^2p over 1 - r^2p
        const double mu = std::exp(2.0 * p * log_r) * std::expm1(2.0 * p * log_sr) / -lam_den;
        const double m_minus_a = big_a * std::expm1(log_mix_down(mu, q_log_ratio) / q);
        const double s2_minus_r2 = r * r * std::expm1(2.0 * log_sr);
        const double tail = 1.0 - a2 * std::exp(-2.0 * log_s);
        return m_minus_a - s2_minus_r2 * tail;
    }
};

/*
 * Gauss-Chebyshev evaluation after s^beta = x = ((r^beta-1) z + (r^beta+1))/2:
 * Theta = int_{-1}^{1} dz / sqrt((1 - z^2) W(z)). Nodes are parameterized by
 * their angle so that 1 +- z come out as 2cos^2 and 2sin^2 of half the angle.
 */
class ChebyshevPeriod {
public:
    ChebyshevPeriod(const ShapeIntegrand& f, double beta) : f_(f) {
        beta_ = std::min(beta, kMaxSubstitutionStretch / f.log_r);
        span_ = std::expm1(beta_ * f.log_r);
        top_ = 1.0 + span_;
        scale_ = beta_ * beta_ / (span_ * span_);
    }

    double weight(double half_angle) const { return weight_cs(std::cos(half_angle), std::sin(half_angle)); }

    // c = cos, s = sin of the half angle, passed separately so both stay accurate near the ends
    double weight_cs(double c, double s) const {
        const double c2 = c * c; // (1 + z)/2
        const double s2 = s * s; // (1 - z)/2
        const double xm1 = span_ * c2;
        const double log_s = std::log1p(xm1) / beta_;
        const double log_sr = std::log1p(-span_ * s2 / top_) / beta_;
        const double big_f = f_.eval(log_s, log_sr, c2 <= 0.5);
        // J/(1-z^2) with 1 - z^2 = 4 c2 s2; x^{2(beta-1)/beta} = s^{2(beta-1)}
        const double w = scale_ * std::exp(2.0 * (beta_ - 1.0) * log_s) * big_f / (c2 * s2);
        return w;
    }

    double sum(int n) const {
        double acc = 0.0;
        const double h = kPi / n;
        for (int k = 0; k < n; ++k) {
            const double w = weight(0.5 * (k + 0.5) * h);
            if (!(w > 0.0) || !std::isfinite(w))
                fail(ErrorKind::DomainError, "period integrand lost positivity at a quadrature node");
            acc += 1.0 / std::sqrt(w);
        }
        return acc * h;
    }

    /*
     * Tanh-sinh over the half angle in (0, pi/2). The node clustering resolves the
     * thin layer next to s = 1 that appears for q > 1 and large r, where the
     * Chebyshev sum would need nodes growing like r^q.
     */
    PeriodValue tanh_sinh_sum(const QuadratureConfig& cfg) const {
        long calls = 0;
        auto g = [&](double eta, double eta_c) {
            ++calls;
            const double d = std::abs(eta_c);
            const double w = eta < kPi / 4 ? weight_cs(std::cos(d), std::sin(d)) : weight_cs(std::sin(d), std::cos(d));
            if (!(w > 0.0) || !std::isfinite(w))
                fail(ErrorKind::DomainError, "period integrand lost positivity at a quadrature node");
            return 1.0 / std::sqrt(w);
        };
        double err = 0.0, l1 = 0.0;
        // nodes closer than 1e-150 to an end would square to subnormals
        boost::math::quadrature::tanh_sinh<double> rule(kTanhSinhLevels, 1e-150);
        const double value = 2.0 * rule.integrate(g, 0.0, kPi / 2, cfg.target_tol / 4, &err, &l1);
        err *= 2.0;
        const int nodes = static_cast<int>(std::min<long>(calls, std::numeric_limits<int>::max()));
        if (!(err < cfg.target_tol) || calls > cfg.max_nodes)
            throw ConvergenceError("period quadrature did not reach tolerance", value, err, nodes);
        return {value, err, nodes};
    }

private:
    const ShapeIntegrand& f_;
    double beta_, span_, top_, scale_;
};

PeriodValue integrate_shape(double p, double q, double alpha, double r, double beta, const QuadratureConfig& cfg) {
    if (r - 1.0 < kNearDegenerateGap) {
        const double value = limits::near_circle(p, q, alpha);
        return {value, value * (r - 1.0) * std::max(1.0, q - p), 0};
    }
    const ShapeIntegrand f(p, q, alpha, r);
    const ChebyshevPeriod rule(f, beta);
    int n = cfg.initial_nodes;
    double prev = rule.sum(n);
    double err = std::numeric_limits<double>::infinity();
    const int cap = std::min(cfg.max_nodes, kChebyshevNodeCap);
    while (2 * n <= cap) {
        n *= 2;
        const double cur = rule.sum(n);
        err = std::abs(cur - prev);
        prev = cur;
        if (err < cfg.target_tol) return {cur, err, n};
    }
    if (cfg.max_nodes > cap) return rule.tanh_sinh_sum(cfg);
    throw ConvergenceError("period quadrature did not reach tolerance", prev, err, n);
}

} // namespace

void QuadratureConfig::validate() const {
    if (!(target_tol > 0.0)) fail(ErrorKind::DomainError, "target_tol must be positive");
    if (initial_nodes < 8) fail(ErrorKind::DomainError, "initial_nodes must be at least 8");
    if (max_nodes < initial_nodes) fail(ErrorKind::DomainError, "max_nodes must be >= initial_nodes");
    if (!(beta > 0.0)) fail(ErrorKind::DomainError, "beta must be positive");
}

double integrand_F(double p, double q, double s, double alpha, double r) {
    require_period_region(p, q);
    require_chart(alpha, r);
    if (!(s >= 1.0 && s <= r)) fail(ErrorKind::DomainError, "s must lie in [1, r]");
    const ShapeIntegrand f(p, q, alpha, r);
    const double log_s = std::log(s);
    return f.eval(log_s, log_s - f.log_r, s - 1.0 <= r - s);
}

double integrand_G(double p, double q, double u, double u_minus, double u_plus) {
    require_period_region(p, q);
    if (!(u_minus > 0.0 && u_plus > u_minus && u_plus * u_minus > 1.0))
        fail(ErrorKind::DomainError, "need 0 < u- < u+ with u- u+ > 1");
    if (!(u >= u_minus && u <= u_plus)) fail(ErrorKind::DomainError, "u must lie in [u-, u+]");
    const double lm = std::pow(u_minus, 2.0 * p);
    const double lp = std::pow(u_plus, 2.0 * p);
    const double lu = std::pow(u, 2.0 * p);
    const double weight_plus = (lm - lu) / (lm - lp);
    const double weight_minus = (lu - lp) / (lm - lp);
    const double wp = std::pow(u_plus * u_plus + 1.0 / (u_plus * u_plus), q);
    const double wm = std::pow(u_minus * u_minus + 1.0 / (u_minus * u_minus), q);
    return std::pow(weight_plus * wp + weight_minus * wm, 1.0 / q) - u * u - 1.0 / (u * u);
}

PeriodValue period_shape(double p, double q, const ShapeCoords& shape, const QuadratureConfig& cfg) {
    require_period_region(p, q);
    cfg.validate();
    if (!(shape.alpha > 0.0 && shape.alpha < 1.0) || !(shape.r > 1.0))
        fail(ErrorKind::DomainError, "shape coordinates need 0 < alpha < 1 < r");
    require_chart(shape.alpha, shape.r);
    return integrate_shape(p, q, shape.alpha, shape.r, cfg.beta, cfg);
}

PeriodValue period_energy(const ProblemParams& params, double energy, const QuadratureConfig& cfg) {
    return period_energy(params, critical_point(params), energy, cfg);
}

PeriodValue period_energy(const ProblemParams& params, const CriticalData& crit, double energy,
                          const QuadratureConfig& cfg) {
    const TurningPoints tp = turning_points(params, crit, energy);
    return period_shape(params.p, params.q, shape_from_turning(tp), cfg);
}

double boundary_beta(double p, double q) { return (4.0 * q - 2.0 * p) / 3.0; }

PeriodValue boundary_period(double p, double q, double r, const QuadratureConfig& cfg) {
    require_period_region(p, q);
    cfg.validate();
    require_chart(0.0, r);
    return integrate_shape(p, q, 0.0, r, boundary_beta(p, q), cfg);
}

namespace limits {

double steep(double alpha, double r) {
    if (!(alpha >= 0.0 && alpha < 1.0) || !(r > 1.0)) fail(ErrorKind::DomainError, "need 0 <= alpha < 1 < r");
    const double a2 = alpha * alpha;
    return std::acos(std::sqrt((1.0 - a2) / ((r - alpha) * (r + alpha))));
}

double near_circle(double p, double q, double alpha) {
    require_period_region(p, q);
    if (!(alpha >= 0.0 && alpha <= 1.0)) fail(ErrorKind::DomainError, "alpha must lie in [0, 1]");
    const double a2 = alpha * alpha;
    const double d = 1.0 - a2;
    const double k = (2.0 - 2.0 * p) + (2.0 + 2.0 * p) * a2 + (2.0 * q - 2.0) * d * d / (1.0 + a2);
    return kPi / std::sqrt(k);
}

double near_minimum(double p, double q, double u_gamma) {
    if (!(u_gamma > 1.0)) fail(ErrorKind::DomainError, "u_gamma must exceed 1");
    return near_circle(p, q, 1.0 / (u_gamma * u_gamma));
}

double boundary_near_circle(double p, double q) { return near_circle(p, q, 0.0); }

double large_orbit() { return kPi / 2.0; }

} // namespace limits

} // namespace horo
