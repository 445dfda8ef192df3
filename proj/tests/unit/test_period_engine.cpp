#include "doctest.h"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include "horoperiod/period_engine.hpp"

using namespace horo;
using doctest::Approx;

namespace {

constexpr double kPi = std::numbers::pi;

// Direct transcription of F in extended precision, no endpoint-relative tricks.
long double naive_F(long double p, long double q, long double s, long double alpha, long double r) {
    const long double a2 = alpha * alpha;
    const long double lambda = (1 - std::pow(s, 2 * p)) / (1 - std::pow(r, 2 * p));
    const long double big_a = r * r + a2;
    const long double big_b = 1 + a2 * r * r;
    const long double mix = lambda * std::pow(big_a, q) + (1 - lambda) * std::pow(big_b, q);
    return std::pow(mix, 1 / q) - s * s - a2 * r * r / (s * s);
}

// Theta by adaptive Gauss-Kronrod after s = (r+1)/2 - (r-1)/2 cos(t), which
// removes both inverse square root singularities. Nodes within 1e-7 of an end
// carry no weight at this tolerance and are where the direct formula cancels.
double oracle_period(double p, double q, double alpha, double r) {
    auto integrand = [&](double t) -> double {
        if (t < 1e-7 || kPi - t < 1e-7) return 0.0;
        const long double s = 0.5L * (r + 1.0L) - 0.5L * (r - 1.0L) * std::cos(static_cast<long double>(t));
        const long double f = naive_F(p, q, s, alpha, r);
        return static_cast<double>(0.5L * (r - 1.0L) * std::sin(static_cast<long double>(t)) / std::sqrt(f));
    };
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(integrand, 0.0, kPi, 15, 1e-13);
}

ErrorKind kind_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("expected an exception");
    return ErrorKind::DomainError;
}

} // namespace

TEST_CASE("F examples") {
    CHECK(integrand_F(-1, 1, 1.0, 0.5, 2.0) == Approx(0.0).epsilon(1e-15));
    CHECK(std::abs(integrand_F(-1, 1, 2.0, 0.5, 2.0)) < 1e-14);
    CHECK(integrand_F(-1, 1, 1.5, 0.5, 2.0) == Approx(35.0 / 36.0).epsilon(1e-14));
}

TEST_CASE("F agrees with the direct formula away from the endpoints") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> up(-12, -1), uq(1, 6), ua(0.05, 0.95), ur(1.2, 8), ut(0.1, 0.9);
    for (int i = 0; i < 200; ++i) {
        const double p = up(rng), q = uq(rng), a = ua(rng), r = ur(rng);
        const double s = 1.0 + ut(rng) * (r - 1.0);
        const double ref = naive_F(p, q, s, a, r);
        CHECK(integrand_F(p, q, s, a, r) == Approx(ref).epsilon(1e-9));
        CHECK(ref > 0.0);
    }
}

TEST_CASE("F stays positive and accurate next to the endpoints") {
    // Near s = 1, F ~ F'(1)(s - 1); the slope is recovered from a one-sided quotient.
    const double p = -5, q = 2, a = 0.5, r = 3;
    const double f1 = integrand_F(p, q, 1.0 + 1e-6, a, r);
    const double f2 = integrand_F(p, q, 1.0 + 2e-6, a, r);
    CHECK(f1 > 0.0);
    CHECK(f2 / f1 == Approx(2.0).epsilon(1e-4));
    const double g1 = integrand_F(p, q, r - 1e-6, a, r);
    const double g2 = integrand_F(p, q, r - 2e-6, a, r);
    CHECK(g1 > 0.0);
    CHECK(g2 / g1 == Approx(2.0).epsilon(1e-4));
}

TEST_CASE("chart consistency F(s) = G(s u-) / u-^2") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> up(-10, -1), uq(1, 4), um(0.4, 1.5), ur(1.1, 5), ut(0.05, 0.95);
    int checked = 0;
    while (checked < 200) {
        const double p = up(rng), q = uq(rng), u_minus = um(rng);
        const double u_plus = u_minus * ur(rng);
        if (u_plus * u_minus <= 1.0) continue;
        const ShapeCoords sh = shape_from_turning({u_minus, u_plus});
        const double s = 1.0 + ut(rng) * (sh.r - 1.0);
        const double g = integrand_G(p, q, s * u_minus, u_minus, u_plus) / (u_minus * u_minus);
        CHECK(integrand_F(p, q, s, sh.alpha, sh.r) == Approx(g).epsilon(1e-9));
        ++checked;
    }
}

TEST_CASE("F domain errors") {
    CHECK(kind_of([] { integrand_F(-1, 1, 0.9, 0.5, 2.0); }) == ErrorKind::DomainError);
    CHECK(kind_of([] { integrand_F(-1, 1, 1.5, 1.0, 2.0); }) == ErrorKind::DomainError);
    CHECK(kind_of([] { integrand_F(-1, 1, 1.0, 0.5, 1.0); }) == ErrorKind::DomainError);
    CHECK(kind_of([] { integrand_F(-0.5, 1, 1.5, 0.5, 2.0); }) == ErrorKind::DomainError);
    CHECK(kind_of([] { integrand_F(-2, 0.5, 1.5, 0.5, 2.0); }) == ErrorKind::DomainError);
}

TEST_CASE("p = -1 period is a quarter turn in every chart") {
    const PeriodValue v = period_shape(-1, 1, {0.7, 3.0});
    CHECK(std::abs(v.value - kPi / 2) < 1e-8);
    CHECK(v.error_estimate < 1e-10);
    CHECK(v.nodes_used >= 16);
    CHECK(std::abs(period_energy({-1, 1, 1.5}, 5.0).value - kPi / 2) < 1e-8);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> ua(0.01, 0.99), ulr(0.01, 12);
    for (int i = 0; i < 50; ++i) {
        const double r = std::exp(ulr(rng));
        CHECK(std::abs(period_shape(-1, 1, {ua(rng), r}).value - kPi / 2) < 1e-8);
    }
}

TEST_CASE("quadrature matches the Gauss-Kronrod oracle") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> up(-20, -1), uq(1, 5), ua(0.05, 0.95), ulr(0.05, 2.5);
    for (int i = 0; i < 60; ++i) {
        const double p = up(rng), q = uq(rng), a = ua(rng), r = std::exp(ulr(rng));
        const double ref = oracle_period(p, q, a, r);
        const PeriodValue v = period_shape(p, q, {a, r});
        CHECK(v.value == Approx(ref).epsilon(1e-8));
    }
}

TEST_CASE("period limits") {
    CHECK(period_shape(-5, 1, {0.5, 1.0001}).value == Approx(kPi / std::sqrt(10.0)).epsilon(1e-3));
    CHECK(std::abs(period_shape(-3, 1, {0.5, 1e6}).value - kPi / 2) < 1e-2);

    const ProblemParams pr{-3, 1, 1};
    const CriticalData crit = critical_point(pr);
    CHECK(period_energy(pr, crit.e_star + 1e-6).value == Approx(kPi / std::sqrt(6.0)).epsilon(1e-3));
    CHECK(limits::near_minimum(-3, 1, crit.u_gamma) == Approx(kPi / std::sqrt(6.0)).epsilon(1e-12));
    CHECK(kind_of([&] { period_energy(pr, crit.e_star - 1.0); }) == ErrorKind::BelowMinimum);

    CHECK(boundary_period(-3, 1, 1.0001).value == Approx(kPi / std::sqrt(8.0)).epsilon(1e-3));
    CHECK(boundary_period(-3, 2, 1.0001).value == Approx(kPi / std::sqrt(10.0)).epsilon(1e-3));
    CHECK(std::abs(boundary_period(-3, 1, 1e6).value - kPi / 2) < 1e-2);
    CHECK(limits::boundary_near_circle(-3, 2) == Approx(kPi / std::sqrt(10.0)).epsilon(1e-15));
    CHECK(boundary_beta(-3, 2) == Approx(14.0 / 3.0));
}

TEST_CASE("closed-form limit values") {
    CHECK(limits::steep(0.5, 2.0) == Approx(std::acos(std::sqrt(0.2))).epsilon(1e-15));
    CHECK(limits::steep(0.5, 2.0) == Approx(1.107149).epsilon(1e-6));
    for (double p : {-1.0, -2.5, -7.0, -40.0})
        for (double a : {0.0, 0.3, 0.9}) {
            const double k = (2 - 2 * p) + (2 + 2 * p) * a * a;
            CHECK(limits::near_circle(p, 1, a) == Approx(kPi / std::sqrt(k)).epsilon(1e-15));
        }
    CHECK(limits::large_orbit() == Approx(kPi / 2));
    CHECK(kind_of([] { limits::steep(1.0, 2.0); }) == ErrorKind::DomainError);
    CHECK(kind_of([] { limits::near_minimum(-3, 1, 0.9); }) == ErrorKind::DomainError);
}

TEST_CASE("near-circle quadrature agrees with the closed form") {
    for (double q : {1.0, 2.0, 6.0})
        for (double a : {0.1, 0.5, 0.9}) {
            const double lim = limits::near_circle(-4, q, a);
            CHECK(period_shape(-4, q, {a, 1.0 + 1e-4}).value == Approx(lim).epsilon(1e-3));
            CHECK(period_shape(-4, q, {a, 1.0 + 1e-6}).value == Approx(lim).epsilon(1e-5));
        }
}

TEST_CASE("near-degenerate guard returns the closed form") {
    const PeriodValue v = period_shape(-4, 2, {0.5, 1.0 + 1e-10});
    CHECK(v.nodes_used == 0);
    CHECK(v.value == Approx(limits::near_circle(-4, 2, 0.5)).epsilon(1e-15));
    CHECK(v.error_estimate > 0.0);
    CHECK(v.error_estimate < 1e-8);
}

TEST_CASE("alpha -> 1 one-sided limit is a quarter turn") {
    for (double p : {-2.0, -5.0, -20.0})
        for (double r : {1.5, 4.0, 50.0})
            CHECK(period_shape(p, 1, {1.0 - 1e-6, r}).value == Approx(kPi / 2).epsilon(1e-5));
}

TEST_CASE("bounds and monotonicity on random samples") {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> up(-15, -1.05), uq(1, 5), ua(0.02, 0.98), ulr(0.01, 5), uu(0, 1);
    for (int i = 0; i < 40; ++i) {
        const double p = up(rng), q = uq(rng), a = ua(rng), r = std::exp(ulr(rng));
        const double th = period_shape(p, q, {a, r}).value;
        const double bd = boundary_period(p, q, r).value;
        CHECK(th < kPi / 2);
        CHECK(th > bd - 1e-9);
        CHECK(bd > kPi / std::sqrt(2 * q - 2 * p));

        const double p2 = p + (-1.0 - p) * uu(rng);
        CHECK(period_shape(p2, q, {a, r}).value >= th - 1e-9);
        const double a2 = a + (1.0 - a) * 0.9 * uu(rng);
        CHECK(period_shape(p, q, {a2, r}).value >= th - 1e-9);
        const double q2 = q + 3.0 * uu(rng);
        CHECK(period_shape(p, q2, {a, r}).value <= th + 1e-9);
        const double r2 = r * std::exp(uu(rng));
        CHECK(boundary_period(p, q, r2).value >= bd - 1e-9);
    }
}

TEST_CASE("thin layer at s = 1 for q > 1 and large r") {
    // 60-digit references from tests/oracles/period_layer.py
    struct Case {
        double q, r, ref;
    };
    for (const Case c : {Case{2, 10, 1.47266777836341}, Case{2, 100, 1.560995165755164},
                         Case{3, 10, 1.472056474067234}, Case{2, 1000, 1.569816222304926}}) {
        const PeriodValue v = period_shape(-18, c.q, {0.1, c.r});
        CHECK(std::abs(v.value - c.ref) < 1e-12);
        CHECK(v.nodes_used < 4096);
    }
}

TEST_CASE("steep exponent approaches the arccos limit") {
    const double lim = limits::steep(0.5, 4.0);
    const double g100 = std::abs(period_shape(-100, 1, {0.5, 4.0}).value - lim);
    const double g200 = std::abs(period_shape(-200, 1, {0.5, 4.0}).value - lim);
    CHECK(g200 < g100);
    CHECK(g200 / lim < 1e-3);
}

TEST_CASE("quadrature configuration errors") {
    QuadratureConfig bad;
    bad.initial_nodes = 4;
    CHECK(kind_of([&] { period_shape(-3, 1, {0.5, 2.0}, bad); }) == ErrorKind::DomainError);
    bad = {};
    bad.beta = 0.0;
    CHECK(kind_of([&] { period_shape(-3, 1, {0.5, 2.0}, bad); }) == ErrorKind::DomainError);
    CHECK(kind_of([] { period_shape(-3, 1, {0.0, 2.0}); }) == ErrorKind::DomainError);
    CHECK(kind_of([] { period_shape(-0.5, 1, {0.5, 2.0}); }) == ErrorKind::DomainError);

    QuadratureConfig tight;
    tight.target_tol = 1e-15;
    tight.max_nodes = 32;
    try {
        period_shape(-30, 3, {0.2, 40.0}, tight);
        FAIL("expected ConvergenceError");
    } catch (const ConvergenceError& e) {
        CHECK(e.kind() == ErrorKind::ConvergenceFailure);
        CHECK(e.nodes_used == 32);
        CHECK(e.best_value > 0.0);
        CHECK(e.best_value < kPi / 2);
        CHECK(e.error_estimate > 0.0);
    }
}
