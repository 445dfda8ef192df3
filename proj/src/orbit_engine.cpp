#include "horoperiod/orbit_engine.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>

#include <boost/numeric/odeint.hpp>
#include <unsupported/Eigen/FFT>

namespace horo {

namespace {

namespace odeint = boost::numeric::odeint;
using State = std::array<double, 2>;
using Dopri5 = odeint::runge_kutta_dopri5<State>;

constexpr double kPi = std::numbers::pi;
constexpr double kResolvedTail = 1e-13;

struct ReducedSystem {
    const ProblemParams& params;
    void operator()(const State& x, State& dx, double /*tau*/) const {
        dx[0] = x[1];
        dx[1] = orbit_rhs(params, x[0], x[1]);
    }
};

double relative_drift(const ProblemParams& params, double energy, double u, double u_tau) {
    return std::abs(first_integral(params, u, u_tau) - energy) / std::max(1.0, std::abs(energy));
}

// Turning point near the sample, by Newton steps on u_tau with re-integration.
TurningEvent polish_turning(const ProblemParams& params, double tau, State x, const OrbitConfig& cfg) {
    const ReducedSystem sys{params};
    auto stepper = odeint::make_controlled(cfg.polish_tol, cfg.polish_tol, Dopri5());
    for (int it = 0; it < 40; ++it) {
        const double accel = orbit_rhs(params, x[0], x[1]);
        if (accel == 0.0) fail(ErrorKind::NoEventFound, "turning point polish hit an equilibrium");
        const double dt = -x[1] / accel;
        if (std::abs(dt) <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(tau))) break;
        odeint::integrate_adaptive(stepper, sys, x, tau, tau + dt, dt);
        tau += dt;
    }
    return {tau, x[0]};
}

bool fft_friendly(std::size_t n) {
    for (std::size_t f : {2u, 3u, 5u, 7u})
        while (n % f == 0) n /= f;
    return n == 1;
}

PeriodicDerivatives spectral_derivatives(const std::vector<double>& y) {
    const std::size_t n = y.size();
    Eigen::FFT<double> fft;
    std::vector<std::complex<double>> spec;
    fft.fwd(spec, y);
    // modes at roundoff level (about eps / sqrt(n) of the peak) would be amplified by k^2
    double peak = 0.0;
    for (const auto& c : spec) peak = std::max(peak, std::abs(c));
    const double floor = 16.0 * std::numeric_limits<double>::epsilon() / std::sqrt(static_cast<double>(n)) * peak;
    std::vector<std::complex<double>> s1(n), s2(n);
    for (std::size_t k = 0; k < n; ++k) {
        if (std::abs(spec[k]) <= floor) continue;
        const double wave = (2 * k <= n) ? static_cast<double>(k) : static_cast<double>(k) - static_cast<double>(n);
        const bool nyquist = (2 * k == n);
        s1[k] = nyquist ? 0.0 : std::complex<double>(0.0, wave) * spec[k];
        s2[k] = -wave * wave * spec[k];
    }
    std::vector<std::complex<double>> o1, o2;
    fft.inv(o1, s1);
    fft.inv(o2, s2);
    PeriodicDerivatives d{std::vector<double>(n), std::vector<double>(n)};
    for (std::size_t k = 0; k < n; ++k) {
        d.d1[k] = o1[k].real();
        d.d2[k] = o2[k].real();
    }
    return d;
}

PeriodicDerivatives central_derivatives(const std::vector<double>& y) {
    static constexpr std::array<double, 4> c1{4.0 / 5.0, -1.0 / 5.0, 4.0 / 105.0, -1.0 / 280.0};
    static constexpr std::array<double, 4> c2{8.0 / 5.0, -1.0 / 5.0, 8.0 / 315.0, -1.0 / 560.0};
    static constexpr double c2_centre = -205.0 / 72.0;
    const std::size_t n = y.size();
    const double h = 2.0 * kPi / static_cast<double>(n);
    PeriodicDerivatives d{std::vector<double>(n), std::vector<double>(n)};
    for (std::size_t j = 0; j < n; ++j) {
        double a1 = 0.0, a2 = c2_centre * y[j];
        for (std::size_t k = 1; k <= 4; ++k) {
            const double fwd = y[(j + k) % n];
            const double bwd = y[(j + n - k) % n];
            a1 += c1[k - 1] * (fwd - bwd);
            a2 += c2[k - 1] * (fwd + bwd);
        }
        d.d1[j] = a1 / h;
        d.d2[j] = a2 / (h * h);
    }
    return d;
}

void require_grid(const std::vector<double>& phi) {
    if (phi.size() < static_cast<std::size_t>(kMinGridSize))
        fail(ErrorKind::GridTooCoarse, "profile needs at least " + std::to_string(kMinGridSize) + " samples");
    for (double v : phi)
        if (!(v > 0.0) || !std::isfinite(v)) fail(ErrorKind::NonpositiveArgument, "profile samples must be positive");
}

// phi'' - phi'^2/(2 phi) + (phi - 1/phi)/2
double bracket(double phi, double d1, double d2) { return d2 - d1 * d1 / (2.0 * phi) + 0.5 * (phi - 1.0 / phi); }

// phi on m * per_fold points; index j maps to tau = pi j / n, folded onto the half period
std::vector<double> folded_profile(const ProblemParams& params, double energy, double u_minus, int m,
                                   std::size_t per_fold, const OrbitConfig& cfg) {
    const std::size_t n = per_fold * static_cast<std::size_t>(m);
    const std::size_t half_index = per_fold / 2;
    std::vector<double> times(half_index + 1);
    for (std::size_t i = 0; i <= half_index; ++i) times[i] = kPi * static_cast<double>(i) / static_cast<double>(n);

    std::vector<double> u_fold;
    u_fold.reserve(half_index + 1);
    double drift = 0.0;
    const ReducedSystem sys{params};
    State x{u_minus, 0.0};
    try {
        odeint::integrate_times(odeint::make_controlled(cfg.abs_tol, cfg.rel_tol, Dopri5()), sys, x, times.begin(),
                                times.end(), 1e-3, [&](const State& s, double) {
                                    u_fold.push_back(s[0]);
                                    drift = std::max(drift, relative_drift(params, energy, s[0], s[1]));
                                });
    } catch (const odeint::odeint_error& e) {
        fail(ErrorKind::StepFailure, std::string("step control failed: ") + e.what());
    }
    if (drift > cfg.drift_tol) fail(ErrorKind::DriftExceeded, "first-integral drift on the profile run");

    std::vector<double> phi(n);
    for (std::size_t j = 0; j < n; ++j) {
        std::size_t i = j % per_fold;
        if (i > half_index) i = per_fold - i;
        phi[j] = u_fold[i] * u_fold[i];
    }
    return phi;
}

// Largest Fourier coefficient in the upper half of the band, relative to the largest overall.
double spectral_tail(const std::vector<double>& y) {
    Eigen::FFT<double> fft;
    std::vector<std::complex<double>> spec;
    fft.fwd(spec, y);
    const std::size_t n = y.size();
    double peak = 0.0, tail = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t wave = std::min(k, n - k);
        peak = std::max(peak, std::abs(spec[k]));
        if (4 * wave >= n) tail = std::max(tail, std::abs(spec[k]));
    }
    return peak > 0.0 ? tail / peak : 0.0;
}

} // namespace

void OrbitConfig::validate() const {
    if (!(abs_tol > 0.0) || !(rel_tol > 0.0) || !(drift_tol > 0.0) || !(polish_tol > 0.0))
        fail(ErrorKind::DomainError, "orbit tolerances must be positive");
    if (!(max_dt > 0.0)) fail(ErrorKind::DomainError, "max_dt must be positive");
    if (max_steps < 1) fail(ErrorKind::DomainError, "max_steps must be positive");
}

double orbit_rhs(const ProblemParams& params, double u, double u_tau) {
    if (!(u > 0.0)) fail(ErrorKind::NonpositiveArgument, "u must be positive");
    const double lu = std::log(u);
    const double w = u_tau * u_tau + u * u + 1.0 / (u * u);
    const double forcing = std::exp(params.q * std::numbers::ln2 + std::log(params.gamma) + (2.0 * params.p - 1.0) * lu +
                                    (1.0 - params.q) * std::log(w));
    return 1.0 / (u * u * u) - u + forcing;
}

OrbitProfile integrate_orbit(const ProblemParams& params, double energy, double duration, const OrbitConfig& cfg) {
    cfg.validate();
    if (!(duration > 0.0) || !std::isfinite(duration)) fail(ErrorKind::DomainError, "duration must be positive");
    const CriticalData crit = critical_point(params);

    OrbitProfile orbit;
    orbit.params = params;
    orbit.energy = energy;
    double u0 = 0.0;
    try {
        u0 = turning_points(params, crit, energy).u_minus;
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::DegenerateLevel) throw;
        u0 = crit.u_gamma;
        orbit.equilibrium = true;
    }

    auto record = [&](double t, const State& x) {
        orbit.tau.push_back(t);
        orbit.u.push_back(x[0]);
        orbit.u_tau.push_back(x[1]);
        orbit.max_drift = std::max(orbit.max_drift, relative_drift(params, energy, x[0], x[1]));
        if (orbit.max_drift > cfg.drift_tol)
            throw OrbitDriftError("first-integral drift exceeded tolerance at tau = " + std::to_string(t), orbit,
                                  orbit.max_drift);
    };

    const ReducedSystem sys{params};
    auto stepper = odeint::make_dense_output(cfg.abs_tol, cfg.rel_tol, cfg.max_dt, Dopri5());
    State x{u0, 0.0};
    record(0.0, x);
    stepper.initialize(x, 0.0, std::min(1e-3, duration));
    long steps = 0;
    try {
        while (stepper.current_time() < duration) {
            if (++steps > cfg.max_steps) fail(ErrorKind::StepFailure, "orbit integration exceeded max_steps");
            stepper.do_step(sys);
            if (stepper.current_time() >= duration) {
                State end;
                stepper.calc_state(duration, end);
                record(duration, end);
                break;
            }
            record(stepper.current_time(), stepper.current_state());
        }
    } catch (const odeint::odeint_error& e) {
        fail(ErrorKind::StepFailure, std::string("step control failed: ") + e.what());
    }
    return orbit;
}

std::vector<TurningEvent> turning_events(const OrbitProfile& orbit, const OrbitConfig& cfg) {
    cfg.validate();
    if (orbit.equilibrium) fail(ErrorKind::NoEventFound, "equilibrium orbit has no turning points");
    const auto& v = orbit.u_tau;
    std::vector<TurningEvent> events;
    if (v.empty()) return events;
    if (v.front() == 0.0) events.push_back({orbit.tau.front(), orbit.u.front()});
    for (std::size_t k = 0; k + 1 < v.size(); ++k) {
        const bool down = v[k] > 0.0 && v[k + 1] <= 0.0;
        const bool up = v[k] < 0.0 && v[k + 1] >= 0.0;
        if (!down && !up) continue;
        const std::size_t j = std::abs(v[k]) < std::abs(v[k + 1]) ? k : k + 1;
        events.push_back(polish_turning(orbit.params, orbit.tau[j], {orbit.u[j], v[j]}, cfg));
    }
    return events;
}

double measure_half_period(const OrbitProfile& orbit, const OrbitConfig& cfg) {
    const std::vector<TurningEvent> events = turning_events(orbit, cfg);
    if (events.size() < 2) fail(ErrorKind::NoEventFound, "fewer than two turning points; extend the duration");
    return (events.back().tau - events.front().tau) / static_cast<double>(events.size() - 1);
}

SolutionProfile build_solution(const ProblemParams& params, double energy, int m, const SolutionConfig& cfg) {
    if (m < 1) fail(ErrorKind::DomainError, "fold symmetry m must be at least 1");
    if (cfg.grid_size < kMinGridSize) fail(ErrorKind::GridTooCoarse, "grid_size below minimum");
    const double target = kPi / (2.0 * m);
    const CriticalData crit = critical_point(params);

    const double theta_quad = period_energy(params, crit, energy, cfg.quadrature).value;
    if (std::abs(theta_quad - target) > cfg.period_tol)
        fail(ErrorKind::PeriodMismatch, "half period " + std::to_string(theta_quad) + " does not match pi/(2m) = " +
                                            std::to_string(target));

    const OrbitProfile orbit = integrate_orbit(params, energy, 2.2 * target, cfg.orbit);
    const double half = measure_half_period(orbit, cfg.orbit);
    if (std::abs(half - target) > cfg.period_tol)
        fail(ErrorKind::PeriodMismatch, "measured half period " + std::to_string(half) +
                                            " does not match pi/(2m) = " + std::to_string(target));

    std::size_t per_fold = 2;
    while (per_fold * static_cast<std::size_t>(m) < static_cast<std::size_t>(cfg.grid_size)) per_fold *= 2;
    std::vector<double> phi = folded_profile(params, energy, orbit.u.front(), m, per_fold, cfg.orbit);
    while (spectral_tail(phi) > kResolvedTail && phi.size() * 2 <= static_cast<std::size_t>(cfg.max_grid_size)) {
        per_fold *= 2;
        phi = folded_profile(params, energy, orbit.u.front(), m, per_fold, cfg.orbit);
    }
    SolutionProfile prof = certify_profile(params, std::move(phi), m, energy);
    prof.half_period = half;
    return prof;
}

SolutionProfile constant_profile(const ProblemParams& params, double c, int grid_size) {
    if (!(c > 0.0)) fail(ErrorKind::NonpositiveArgument, "constant must be positive");
    if (grid_size < kMinGridSize) fail(ErrorKind::GridTooCoarse, "grid_size below minimum");
    return certify_profile(params, std::vector<double>(static_cast<std::size_t>(grid_size), c), 0);
}

SolutionProfile certify_profile(const ProblemParams& params, std::vector<double> phi, int m, double energy) {
    require_grid(phi);
    SolutionProfile prof;
    prof.params = params;
    prof.energy = energy;
    prof.m = m;
    const std::size_t n = phi.size();
    prof.theta.resize(n);
    for (std::size_t j = 0; j < n; ++j) prof.theta[j] = 2.0 * kPi * static_cast<double>(j) / static_cast<double>(n);
    prof.phi = std::move(phi);

    prof.residual_max = pde_residual(params, prof);
    prof.residual_bracket = bracket_residual(params, prof);
    prof.hconvex_min = hconvex_min(prof);
    prof.hk_value = hk_integral(prof);

    if (m >= 1 && n % static_cast<std::size_t>(m) == 0) {
        const std::size_t shift = n / static_cast<std::size_t>(m);
        for (std::size_t j = 0; j < n; ++j)
            prof.symmetry_error = std::max(prof.symmetry_error, std::abs(prof.phi[(j + shift) % n] - prof.phi[j]));
    } else if (m >= 1) {
        prof.symmetry_error = std::numeric_limits<double>::infinity(); // grid cannot express the rotation
    }
    return prof;
}

PeriodicDerivatives periodic_derivatives(const std::vector<double>& samples) {
    if (samples.size() < 9) fail(ErrorKind::GridTooCoarse, "too few samples to differentiate");
    return fft_friendly(samples.size()) ? spectral_derivatives(samples) : central_derivatives(samples);
}

double pde_residual(const ProblemParams& params, const SolutionProfile& profile) {
    require_grid(profile.phi);
    const PeriodicDerivatives d = periodic_derivatives(profile.phi);
    double worst = 0.0;
    for (std::size_t j = 0; j < profile.phi.size(); ++j) {
        const double f = profile.phi[j];
        const double weight = d.d1[j] * d.d1[j] / (2.0 * f) + 0.5 * (f + 1.0 / f);
        const double lhs = std::pow(f, -params.p) * std::pow(weight, params.q - 1.0) * bracket(f, d.d1[j], d.d2[j]);
        worst = std::max(worst, std::abs(lhs - params.gamma));
    }
    return worst;
}

double bracket_residual(const ProblemParams& params, const SolutionProfile& profile) {
    require_grid(profile.phi);
    const PeriodicDerivatives d = periodic_derivatives(profile.phi);
    double worst = 0.0;
    for (std::size_t j = 0; j < profile.phi.size(); ++j) {
        const double f = profile.phi[j];
        const double weight = d.d1[j] * d.d1[j] / (2.0 * f) + 0.5 * (f + 1.0 / f);
        const double rhs = params.gamma * std::pow(f, params.p) * std::pow(weight, 1.0 - params.q);
        worst = std::max(worst, std::abs(bracket(f, d.d1[j], d.d2[j]) - rhs));
    }
    return worst;
}

double hconvex_min(const SolutionProfile& profile) {
    require_grid(profile.phi);
    const PeriodicDerivatives d = periodic_derivatives(profile.phi);
    double lo = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < profile.phi.size(); ++j) lo = std::min(lo, bracket(profile.phi[j], d.d1[j], d.d2[j]));
    return lo;
}

double hk_integral(const SolutionProfile& profile) {
    require_grid(profile.phi);
    const PeriodicDerivatives d = periodic_derivatives(profile.phi);
    double acc = 0.0;
    for (std::size_t j = 0; j < profile.phi.size(); ++j) {
        const double f = profile.phi[j];
        acc += (d.d2[j] - d.d1[j] * d.d1[j] / f) * bracket(f, d.d1[j], d.d2[j]);
    }
    return acc * 2.0 * kPi / static_cast<double>(profile.phi.size());
}

} // namespace horo
