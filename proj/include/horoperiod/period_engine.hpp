#pragma once

#include "horoperiod/scalar_kernel.hpp"

namespace horo {

/// Half-period of the tau-oscillation, in radians.
struct PeriodValue {
    double value;
    double error_estimate; // |Theta_2N - Theta_N| of the last refinement
    int nodes_used;
};

struct QuadratureConfig {
    double target_tol = 1e-10;
    int initial_nodes = 16;
    int max_nodes = 1 << 20;
    double beta = 1.0; // exponent of the s^beta = x substitution

    void validate() const;
};

/// Largest beta * log(r) the substitution is allowed to reach; beta is reduced beyond it.
inline constexpr double kMaxSubstitutionStretch = 4.0;

/// Below this r - 1 the period is taken from the r -> 1 closed form.
inline constexpr double kNearDegenerateGap = 1e-8;

/// F_{p,q}(s, alpha, r) for 1 <= s <= r, 0 <= alpha < 1 < r, p <= -1, q >= 1.
/// alpha = 0 is accepted (the boundary chart).
double integrand_F(double p, double q, double s, double alpha, double r);

/// Turning-point chart integrand G_{p,q}(u, u-, u+), so that Theta = int_{u-}^{u+} du / sqrt(G).
double integrand_G(double p, double q, double u, double u_minus, double u_plus);

PeriodValue period_shape(double p, double q, const ShapeCoords& shape, const QuadratureConfig& cfg = {});
PeriodValue period_energy(const ProblemParams& params, double energy, const QuadratureConfig& cfg = {});
PeriodValue period_energy(const ProblemParams& params, const CriticalData& crit, double energy,
                          const QuadratureConfig& cfg = {});

/// Theta at alpha = 0, with the substitution exponent (4q - 2p)/3.
PeriodValue boundary_period(double p, double q, double r, const QuadratureConfig& cfg = {});

/// Substitution exponent used for the alpha = 0 chart.
double boundary_beta(double p, double q);

// Closed-form limits of the period function.
namespace limits {

/// p -> -infinity (and q -> +infinity): arccos sqrt((1 - alpha^2)/(r^2 - alpha^2)).
double steep(double alpha, double r);

/// r -> 1 at fixed alpha.
double near_circle(double p, double q, double alpha);

/// E -> E* given the minimizer u_gamma.
double near_minimum(double p, double q, double u_gamma);

/// r -> 1 at alpha = 0: pi / sqrt(2q - 2p).
double boundary_near_circle(double p, double q);

/// r -> infinity, E -> infinity, gamma -> 0, and the p = -1 value.
double large_orbit();

} // namespace limits

} // namespace horo
