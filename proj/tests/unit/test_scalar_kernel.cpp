#include "doctest.h"

#include <cmath>
#include <random>

#include "horoperiod/scalar_kernel.hpp"

using namespace horo;
using doctest::Approx;

namespace {

// Independent closed form of the unweighted energy.
double energy_q1(double p, double gamma, double u) {
    return u * u + 1.0 / (u * u) - 2.0 * gamma / p * std::pow(u, 2.0 * p);
}

// At p = -1 the energy is u^2 + (1 + 2 gamma) u^-2, so u^2 solves a quadratic.
TurningPoints quartic_turning_points(double gamma, double energy) {
    const double k = 1.0 + 2.0 * gamma;
    const double disc = std::sqrt(energy * energy - 4.0 * k);
    return {std::sqrt((energy - disc) / 2.0), std::sqrt((energy + disc) / 2.0)};
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

TEST_CASE("potential energy examples") {
    CHECK(potential_energy({-1, 1, 1.5}, 1.0) == Approx(5.0).epsilon(1e-15));
    CHECK(potential_energy({-1, 1, 1.5}, 2.0) == Approx(5.0).epsilon(1e-15));
    CHECK(potential_energy({-1, 2, 1.0}, 1.0) == Approx(6.0).epsilon(1e-15));
}

TEST_CASE("potential energy errors") {
    CHECK(kind_of([] { potential_energy({-1, 1, 1.5}, 0.0); }) == ErrorKind::NonpositiveArgument);
    CHECK(kind_of([] { potential_energy({-1, 1, 1.5}, -1.0); }) == ErrorKind::NonpositiveArgument);
    CHECK(kind_of([] { potential_energy({0.5, 1, 1.5}, 1.0); }) == ErrorKind::UnsupportedRegion);
    CHECK(kind_of([] { potential_energy({-1, 1, 0.0}, 1.0); }) == ErrorKind::DomainError);
}

TEST_CASE("weighted energy reduces to the unweighted one at q = 1") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> p_dist(-30.0, -1.0), g_dist(0.01, 50.0), u_dist(0.3, 3.0);
    for (int i = 0; i < 200; ++i) {
        const double p = p_dist(rng), g = g_dist(rng), u = u_dist(rng);
        CHECK(potential_energy({p, 1.0, g}, u) == Approx(energy_q1(p, g, u)).epsilon(1e-13));
    }
}

TEST_CASE("energy is strictly convex for p <= -1") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> p_dist(-20.0, -1.0), g_dist(0.05, 20.0), q_dist(1.0, 6.0);
    for (int i = 0; i < 50; ++i) {
        const ProblemParams pr{p_dist(rng), i % 2 ? 1.0 : q_dist(rng), g_dist(rng)};
        const double h = 1e-3;
        for (double u = 0.6; u < 2.5; u += 0.01) {
            const double second = potential_energy(pr, u + h) - 2.0 * potential_energy(pr, u) + potential_energy(pr, u - h);
            CHECK(second > 0.0);
        }
    }
}

TEST_CASE("critical point examples") {
    auto c = critical_point({-1, 1, 1.5});
    CHECK(c.u_gamma == Approx(std::sqrt(2.0)).epsilon(1e-12));
    CHECK(c.e_star == Approx(4.0).epsilon(1e-12));

    c = critical_point({-3, 1, 1.0});
    CHECK(c.u_gamma == Approx(std::pow(2.0, 0.25)).epsilon(1e-12));

    c = critical_point({-9, 1, 384.0});
    CHECK(c.u_gamma == Approx(std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("critical point residual and minimality") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> p_dist(-60.0, -1.0), lg_dist(-4.0, 6.0), q_dist(1.0, 12.0);
    for (int i = 0; i < 200; ++i) {
        const ProblemParams pr{p_dist(rng), i % 3 ? q_dist(rng) : 1.0, std::exp(lg_dist(rng))};
        const auto c = critical_point(pr);
        CHECK(c.u_gamma > 1.0);
        CHECK(std::abs(critical_residual(pr, c.u_gamma)) < 1e-12);
        const double d = 1e-4 * c.u_gamma;
        CHECK(potential_energy(pr, c.u_gamma + d) > c.e_star);
        CHECK(potential_energy(pr, c.u_gamma - d) > c.e_star);
    }
}

TEST_CASE("critical point rejects unsupported regions") {
    CHECK(kind_of([] { critical_point({-0.5, 1, 1.0}); }) == ErrorKind::UnsupportedRegion);
    CHECK(kind_of([] { critical_point({-2, 0.5, 1.0}); }) == ErrorKind::UnsupportedRegion);
}

TEST_CASE("turning point examples") {
    const ProblemParams pr{-1, 1, 1.5};
    auto tp = turning_points(pr, 5.0);
    CHECK(tp.u_minus == Approx(1.0).epsilon(1e-12));
    CHECK(tp.u_plus == Approx(2.0).epsilon(1e-12));

    tp = turning_points(pr, 6.0);
    CHECK(tp.u_minus == Approx(std::sqrt(3.0 - std::sqrt(5.0))).epsilon(1e-12));
    CHECK(tp.u_plus == Approx(std::sqrt(3.0 + std::sqrt(5.0))).epsilon(1e-12));

    CHECK(kind_of([&] { turning_points(pr, 4.0); }) == ErrorKind::DegenerateLevel);
    CHECK(kind_of([&] { turning_points(pr, 3.0); }) == ErrorKind::BelowMinimum);
}

TEST_CASE("turning points match the p = -1 quartic on random levels") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> g_dist(0.1, 10.0), f_dist(1.0001, 10.0);
    for (int i = 0; i < 100; ++i) {
        const double g = g_dist(rng);
        const double e = 2.0 * std::sqrt(1.0 + 2.0 * g) * f_dist(rng);
        const auto tp = turning_points({-1, 1, g}, e);
        const auto ref = quartic_turning_points(g, e);
        CHECK(tp.u_minus == Approx(ref.u_minus).epsilon(1e-11));
        CHECK(tp.u_plus == Approx(ref.u_plus).epsilon(1e-11));
    }
}

TEST_CASE("turning points nest monotonically in E and gamma") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> p_dist(-25.0, -1.0), lg_dist(-2.0, 4.0), q_dist(1.0, 5.0), f_dist(1e-6, 3.0);
    for (int i = 0; i < 100; ++i) {
        const double p = p_dist(rng), q = i % 2 ? 1.0 : q_dist(rng);
        const ProblemParams pr{p, q, std::exp(lg_dist(rng))};
        const auto c = critical_point(pr);
        double e1 = c.e_star + std::abs(c.e_star) * f_dist(rng);
        double e2 = c.e_star + std::abs(c.e_star) * f_dist(rng);
        if (e1 > e2) std::swap(e1, e2);
        const auto a = turning_points(pr, c, e1);
        const auto b = turning_points(pr, c, e2);
        CHECK(b.u_minus < a.u_minus);
        CHECK(a.u_minus < a.u_plus);
        CHECK(a.u_plus < b.u_plus);
        CHECK(a.u_minus * a.u_plus > 1.0);

        // fixed E, gamma1 > gamma2
        const ProblemParams lo{p, q, pr.gamma * 0.5};
        const double e = std::max(e2, critical_point(lo).e_star + 1.0);
        const auto t1 = turning_points(pr, e);
        const auto t2 = turning_points(lo, e);
        // at large |p| the gamma dependence of u+ falls below double resolution
        CHECK(t2.u_plus >= t1.u_plus * (1.0 - 1e-12));
        CHECK(t1.u_plus > t1.u_minus);
        CHECK(t1.u_minus > t2.u_minus);
    }
}

TEST_CASE("shape coordinates") {
    const auto s = shape_from_turning({1.0, 2.0});
    CHECK(s.alpha == Approx(0.5).epsilon(1e-15));
    CHECK(s.r == Approx(2.0).epsilon(1e-15));

    const auto ge = gamma_energy_from_shape(-1, 1, {0.5, 2.0});
    CHECK(ge.gamma == Approx(1.5).epsilon(1e-14));
    CHECK(ge.energy == Approx(5.0).epsilon(1e-14));

    CHECK(kind_of([] { gamma_energy_from_shape(-1, 1, {1.2, 2.0}); }) == ErrorKind::InvalidShape);
    CHECK(kind_of([] { gamma_energy_from_shape(-1, 1, {0.5, 1.0}); }) == ErrorKind::InvalidShape);
    CHECK(kind_of([] { gamma_energy_from_shape(-1, 1, {0.0, 2.0}); }) == ErrorKind::InvalidShape);
}

TEST_CASE("(gamma, E) -> turning points -> shape -> (gamma, E) round trip") {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> p_dist(-40.0, -1.0), lg_dist(-3.0, 5.0), q_dist(1.0, 8.0), lf_dist(-6.0, 3.0);
    for (int i = 0; i < 300; ++i) {
        const ProblemParams pr{p_dist(rng), i % 2 ? 1.0 : q_dist(rng), std::exp(lg_dist(rng))};
        const auto c = critical_point(pr);
        const double e = c.e_star + std::max(1.0, std::abs(c.e_star)) * std::pow(10.0, lf_dist(rng));
        const auto shape = shape_from_turning(turning_points(pr, c, e));
        REQUIRE(shape.alpha > 0.0);
        REQUIRE(shape.alpha < 1.0);
        const auto back = gamma_energy_from_shape(pr.p, pr.q, shape);
        CHECK(back.gamma == Approx(pr.gamma).epsilon(1e-10));
        CHECK(back.energy == Approx(e).epsilon(1e-10));
    }
}

TEST_CASE("constant solutions") {
    SUBCASE("tangent threshold") {
        const auto cs = constant_solutions({3, 1, 0.125});
        REQUIRE(cs.roots.size() == 1);
        CHECK(cs.roots[0] == Approx(std::sqrt(2.0)).epsilon(1e-9));
        REQUIRE(cs.gamma_threshold);
        CHECK(*cs.gamma_threshold == Approx(0.125).epsilon(1e-14));
    }
    SUBCASE("two roots below threshold") {
        const auto cs = constant_solutions({3, 1, 0.1});
        REQUIRE(cs.roots.size() == 2);
        // x = c^-2 solves x - x^2 = 0.2
        CHECK(cs.roots[0] == Approx(1.0 / std::sqrt((1.0 + std::sqrt(0.2)) / 2.0)).epsilon(1e-12));
        CHECK(cs.roots[1] == Approx(1.0 / std::sqrt((1.0 - std::sqrt(0.2)) / 2.0)).epsilon(1e-12));
        CHECK(cs.roots[0] == Approx(1.175571).epsilon(1e-6));
        CHECK(cs.roots[1] == Approx(1.902113).epsilon(1e-6));
    }
    SUBCASE("none above threshold") {
        CHECK(constant_solutions({3, 1, 0.2}).roots.empty());
    }
    SUBCASE("p = 0") {
        const auto cs = constant_solutions({0, 1, 1.0});
        REQUIRE(cs.roots.size() == 1);
        CHECK(cs.roots[0] == Approx(1.0 + std::sqrt(2.0)).epsilon(1e-12));
        CHECK_FALSE(cs.gamma_threshold);
    }
    SUBCASE("p = 1 has a unique root only below 1/2") {
        CHECK(constant_solutions({1, 1, 0.3}).roots.size() == 1);
        CHECK(constant_solutions({1, 1, 0.5}).roots.empty());
        CHECK(constant_solutions({1, 1, 0.7}).roots.empty());
    }
}

TEST_CASE("constant solution threshold formula for p > 1") {
    for (double p : {1.5, 2.0, 3.0, 5.0, 9.0}) {
        const double g0 = std::pow(p - 1.0, (p - 1.0) / 2.0) / std::pow(p + 1.0, (p + 1.0) / 2.0);
        const auto cs = constant_solutions({p, 1, 0.5 * g0});
        REQUIRE(cs.gamma_threshold);
        CHECK(*cs.gamma_threshold == Approx(g0).epsilon(1e-12));
        CHECK(cs.roots.size() == 2);
        CHECK(constant_solutions({p, 1, 1.01 * g0}).roots.empty());
    }
}

TEST_CASE("constant roots satisfy the constant equation") {
    std::mt19937_64 rng(29);
    std::uniform_real_distribution<double> p_dist(-30.0, 4.0), lg_dist(-4.0, 4.0), q_dist(1.0, 8.0);
    for (int i = 0; i < 300; ++i) {
        const ProblemParams pr{p_dist(rng), i % 2 ? 1.0 : q_dist(rng), std::exp(lg_dist(rng))};
        const auto cs = constant_solutions(pr);
        if (pr.p <= pr.q - 1e-9 && pr.q <= 2.0) {
            CHECK(cs.roots.size() == 1);
        }
        for (double c : cs.roots) {
            const double lhs = std::pow(c, -pr.p) * std::pow((c + 1.0 / c) / 2.0, pr.q - 1.0) * (c - 1.0 / c) / 2.0;
            CHECK(lhs == Approx(pr.gamma).epsilon(1e-10));
        }
    }
}

TEST_CASE("constant root coincides with the critical point of the energy") {
    // u_gamma^2 is the constant solution for p <= -1
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> p_dist(-30.0, -1.0), lg_dist(-3.0, 4.0), q_dist(1.0, 6.0);
    for (int i = 0; i < 100; ++i) {
        const ProblemParams pr{p_dist(rng), i % 2 ? 1.0 : q_dist(rng), std::exp(lg_dist(rng))};
        const auto cs = constant_solutions(pr);
        REQUIRE(cs.roots.size() == 1);
        const auto c = critical_point(pr);
        CHECK(cs.roots[0] == Approx(c.u_gamma * c.u_gamma).epsilon(1e-10));
    }
}
