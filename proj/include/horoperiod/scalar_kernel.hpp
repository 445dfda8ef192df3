#pragma once

#include <optional>
#include <vector>

#include "horoperiod/root_find.hpp"

namespace horo {

/// One problem instance: exponent p, weight exponent q (1 = unweighted) and gamma > 0.
struct ProblemParams {
    double p = -1.0;
    double q = 1.0;
    double gamma = 1.0;
};

/// Location of the energy minimum and the minimum level itself.
struct CriticalData {
    double u_gamma;
    double e_star;
};

struct TurningPoints {
    double u_minus;
    double u_plus;
};

/// alpha = 1/(u+ u-) in (0,1), r = u+/u- > 1.
struct ShapeCoords {
    double alpha;
    double r;
};

struct GammaEnergy {
    double gamma;
    double energy;
};

struct ConstantSolutions {
    std::vector<double> roots;  // ascending, all > 1
    /// Supremum of the left-hand side over c > 1 when it is bounded; for q = 1, p > 1
    /// this is (p-1)^((p-1)/2) / (p+1)^((p+1)/2).
    std::optional<double> gamma_threshold;
};

void validate(const ProblemParams& params);

/// Weighted energy (1/q)(u^2 + u^-2)^q - (2^q gamma / p) u^(2p); q = 1 is the unweighted case.
/// Requires p < 0, q >= 1, u > 0.
double potential_energy(const ProblemParams& params, double u);

/// First integral along an orbit: the same energy with u^2 + u^-2 replaced by u_tau^2 + u^2 + u^-2.
double first_integral(const ProblemParams& params, double u, double u_tau);

/// Left minus right side of u^(2-2p) - u^(-2-2p) = 2^q gamma (u^2 + u^-2)^(1-q),
/// divided by the larger magnitude of the two sides.
double critical_residual(const ProblemParams& params, double u);

/// Requires p <= -1, q >= 1, gamma > 0.
CriticalData critical_point(const ProblemParams& params, const RootTolerance& tol = {});

/// Cutoff below which E is treated as the minimum level itself.
double degenerate_cutoff(double e_star);

TurningPoints turning_points(const ProblemParams& params, double energy, const RootTolerance& tol = {});
TurningPoints turning_points(const ProblemParams& params, const CriticalData& crit, double energy,
                             const RootTolerance& tol = {});

ShapeCoords shape_from_turning(const TurningPoints& tp);
TurningPoints turning_from_shape(const ShapeCoords& shape);

/// Recovers (gamma, E) from the shape chart; requires 0 < alpha < 1 < r, p <= -1, q >= 1.
GammaEnergy gamma_energy_from_shape(double p, double q, const ShapeCoords& shape);

/// All c > 1 solving c^-p ((c + 1/c)/2)^(q-1) ((c - 1/c)/2) = gamma.
ConstantSolutions constant_solutions(const ProblemParams& params, const RootTolerance& tol = {});

} // namespace horo
