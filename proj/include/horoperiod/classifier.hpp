#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "horoperiod/period_engine.hpp"
#include "horoperiod/scalar_kernel.hpp"

namespace horo {

/// gamma_{p,l}; requires p < 1 - 2(l+1)^2, throws BoundaryDivergence otherwise.
double threshold_gamma(double p, int l);

/// gamma_{p,q,l} through the balance equation for u_gamma; requires p <= -1, q >= 1, q - p > 2(l+1)^2.
double threshold_gamma_weighted(double p, double q, int l);

/// Largest l with q - p > 2(l+1)^2 (0 if none), capped at l_max.
int admissible_threshold_levels(double p, double q, int l_max);

struct ScanConfig {
    double start_rel = 1e-8;      // first E - E* as a fraction of max(1, |E*|)
    int points_per_decade = 64;
    int decades = 12;
    int max_extra_decades = 12;   // extension allowed while waiting for the asymptote
    double asymptote_tol = 5e-3;  // scan ends once pi/2 - Theta is below this
    double match_tol = 1e-9;      // |Theta(E) - pi/(2m)| accepted for a branch
    QuadratureConfig quadrature{1e-12};

    void validate() const;
};

struct Branch {
    int m;
    double energy;
    double theta_check;
};

struct ClassificationReport {
    ProblemParams params;
    std::vector<double> constant_roots;
    std::vector<Branch> branches; // ordered by m, then E
    bool infinite_family = false;
    int lower_bound_count = 0;
    bool scan_complete = true;
    bool scanned = false;         // false when the period function does not apply (p > -1 or q < 1)
    double theta_min = 0.0;       // range of Theta over the scan, including the E -> E* limit
    double theta_max = 0.0;
    int scan_points = 0;
};

ClassificationReport count_solutions(const ProblemParams& params, int m_max = 8, const ScanConfig& scan = {});

/// Theta on the scan grid, first entry the E -> E* limit (at delta = 0).
struct ThetaSample {
    double delta; // E - E*
    double theta;
};
std::vector<ThetaSample> theta_scan(const ProblemParams& params, const CriticalData& crit, const ScanConfig& scan,
                                    bool* complete = nullptr);

struct ScanRecord {
    std::size_t index;
    ProblemParams params;
    int constant_count = 0;
    int branch_count = 0;
    bool infinite_family = false;
    std::vector<int> thresholds_crossed; // l with gamma > gamma_{p,q,l}
    std::string status = "ok";           // ok, or an error kind name such as ScanIncomplete
    std::string detail;
};

/// Grid points in p-major, then q, then gamma order; records are delivered to sink in index
/// order whatever the worker count.
void region_scan(const std::vector<double>& p_grid, const std::vector<double>& q_grid,
                 const std::vector<double>& gamma_grid, int m_max, const ScanConfig& scan, int workers,
                 const std::function<void(const ScanRecord&)>& sink);

std::vector<ScanRecord> region_scan(const std::vector<double>& p_grid, const std::vector<double>& q_grid,
                                    const std::vector<double>& gamma_grid, int m_max, const ScanConfig& scan = {},
                                    int workers = 1);

} // namespace horo
