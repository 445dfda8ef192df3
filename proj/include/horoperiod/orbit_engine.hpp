#pragma once

#include <vector>

#include "horoperiod/errors.hpp"
#include "horoperiod/period_engine.hpp"
#include "horoperiod/scalar_kernel.hpp"

namespace horo {

/// Sampled trajectory of u(tau) at a fixed first-integral level.
struct OrbitProfile {
    ProblemParams params;
    double energy = 0.0;
    std::vector<double> tau;
    std::vector<double> u;
    std::vector<double> u_tau;
    double max_drift = 0.0; // max |Ebar(u, u_tau) - E| / max(1, |E|)
    bool equilibrium = false; // E at the minimum level, u stays at u_gamma
};

struct OrbitConfig {
    double abs_tol = 1e-12;
    double rel_tol = 1e-12;
    double drift_tol = 1e-8;
    double max_dt = 0.05;
    long max_steps = 10'000'000;
    double polish_tol = 1e-13; // tolerance of the re-integration used to pin turning times

    void validate() const;
};

/// phi(theta) on a uniform periodic grid with its certification numbers.
struct SolutionProfile {
    ProblemParams params;
    double energy = 0.0;
    int m = 0; // fold symmetry; 0 marks a constant profile
    std::vector<double> theta;
    std::vector<double> phi;
    double half_period = 0.0;    // measured tau gap between turning points, 0 for constants
    double residual_max = 0.0;   // max |LHS - gamma|
    double residual_bracket = 0.0; // max |A - gamma phi^p w^(1-q)|, the equation divided by phi^-p w^(q-1)
    double hconvex_min = 0.0;    // min of phi'' - phi'^2/(2 phi) + (phi - 1/phi)/2
    double hk_value = 0.0;
    double symmetry_error = 0.0; // max |phi(theta + 2 pi/m) - phi(theta)|
};

struct SolutionConfig {
    int grid_size = 1024;     // starting size; doubled until the Fourier tail of phi reaches roundoff
    int max_grid_size = 1 << 16;
    double period_tol = 1e-7;
    OrbitConfig orbit{1e-12, 1e-12, 1e-8, 0.05, 10'000'000, 1e-13};
    QuadratureConfig quadrature{1e-12};
};

/// Smallest grid size accepted by the periodic differentiation.
inline constexpr int kMinGridSize = 256;

class OrbitDriftError : public Error {
public:
    OrbitDriftError(const std::string& what, OrbitProfile partial, double drift)
        : Error(ErrorKind::DriftExceeded, what), partial(std::move(partial)), drift(drift) {}

    OrbitProfile partial;
    double drift;
};

/// u_tautau from the reduced equation; requires u > 0.
double orbit_rhs(const ProblemParams& params, double u, double u_tau);

/// Adaptive 5(4) trajectory from u(0) = u-, u_tau(0) = 0 over [0, duration].
OrbitProfile integrate_orbit(const ProblemParams& params, double energy, double duration,
                             const OrbitConfig& cfg = {});

/// tau gap between consecutive turning points (u_tau = 0), averaged over all that were found.
double measure_half_period(const OrbitProfile& orbit, const OrbitConfig& cfg = {});

struct TurningEvent {
    double tau;
    double u;
};

/// Turning points of the orbit, polished by re-integration from the nearest sample.
std::vector<TurningEvent> turning_events(const OrbitProfile& orbit, const OrbitConfig& cfg = {});

/// 2 pi / m periodic solution at level E; the grid is m * 2^k so the symmetry is exact.
SolutionProfile build_solution(const ProblemParams& params, double energy, int m, const SolutionConfig& cfg = {});

/// Constant profile phi = c.
SolutionProfile constant_profile(const ProblemParams& params, double c, int grid_size = 1024);

/// Fills theta, m and all certification fields for given samples of phi on [0, 2 pi).
SolutionProfile certify_profile(const ProblemParams& params, std::vector<double> phi, int m, double energy = 0.0);

/// Derivatives of periodic samples on [0, 2 pi): spectral when the size is 2^a 3^b 5^c 7^d,
/// eighth-order central differences otherwise.
struct PeriodicDerivatives {
    std::vector<double> d1;
    std::vector<double> d2;
};
PeriodicDerivatives periodic_derivatives(const std::vector<double>& samples);

double pde_residual(const ProblemParams& params, const SolutionProfile& profile);
double bracket_residual(const ProblemParams& params, const SolutionProfile& profile);
double hconvex_min(const SolutionProfile& profile);
double hk_integral(const SolutionProfile& profile);

} // namespace horo
