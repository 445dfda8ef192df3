#include "horoperiod/classifier.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <condition_variable>
#include <mutex>
#include <numbers>
#include <optional>
#include <thread>

#include "horoperiod/root_find.hpp"

namespace horo {

namespace {

constexpr double kPi = std::numbers::pi;

int level_square(int l) { return 2 * (l + 1) * (l + 1); }

void require_level(int l) {
    if (l < 1) fail(ErrorKind::DomainError, "threshold level l must be at least 1");
}

// Log-space bracket for one sign change of Theta - target between two scan samples.
std::optional<Branch> solve_branch(const ProblemParams& params, const CriticalData& crit, int m, double lo, double hi,
                                   const ScanConfig& scan) {
    const double target = kPi / (2.0 * m);
    auto g = [&](double log_delta) {
        return period_energy(params, crit, crit.e_star + std::exp(log_delta), scan.quadrature).value - target;
    };
    const RootResult root = brent_root(g, std::log(lo), std::log(hi), {0.0, 1e-14, 300});
    const double energy = crit.e_star + std::exp(root.x);
    const double theta = period_energy(params, crit, energy, scan.quadrature).value;
    if (std::abs(theta - target) > scan.match_tol) return std::nullopt;
    return Branch{m, energy, theta};
}

} // namespace

double threshold_gamma(double p, int l) {
    require_level(l);
    const double k = static_cast<double>(level_square(l));
    if (!std::isfinite(p)) fail(ErrorKind::DomainError, "p must be finite");
    if (!(p < 1.0 - k))
        fail(ErrorKind::BoundaryDivergence, "gamma_{p,l} needs p < " + std::to_string(1.0 - k));
    const double n = (l + 1.0) * (l + 1.0);
    const double log_gamma =
        std::log((1.0 - n) / (1.0 + p)) + 0.5 * (p - 1.0) * std::log((k - 1.0 + p) / (1.0 + p));
    return std::exp(log_gamma);
}

double threshold_gamma_weighted(double p, double q, int l) {
    require_level(l);
    if (!std::isfinite(p) || !std::isfinite(q)) fail(ErrorKind::DomainError, "p and q must be finite");
    if (!(p <= -1.0) || !(q >= 1.0)) fail(ErrorKind::UnsupportedRegion, "weighted threshold needs p <= -1, q >= 1");
    const double k = static_cast<double>(level_square(l));
    if (!(q - p > k))
        fail(ErrorKind::UnsupportedRegion, "weighted threshold needs q - p > " + std::to_string(k));

    // balance equation in w = u_gamma^-4, strictly decreasing from q - p at w = 0 to 2 at w = 1
    auto balance = [&](double w) { return (1.0 - p) + (1.0 + p) * w + (q - 1.0) * (1.0 - w) * (1.0 - w) / (1.0 + w) - k; };
    const double w = brent_root(balance, 0.0, 1.0, {1e-15, 1e-300, 400}).x;

    // u^2 = w^-1/2, u^(2-2p) - u^(-2-2p) = w^((1+p)/2) (1 - w) / w
    const double log_gamma = -q * std::numbers::ln2 + (q - 1.0) * std::log(std::pow(w, -0.5) + std::sqrt(w)) +
                             0.5 * (1.0 + p) * std::log(w) + std::log1p(-w) - std::log(w);
    return std::exp(log_gamma);
}

int admissible_threshold_levels(double p, double q, int l_max) {
    int l = 0;
    while (l < l_max && q - p > level_square(l + 1)) ++l;
    return l;
}

void ScanConfig::validate() const {
    if (!(start_rel > 0.0)) fail(ErrorKind::DomainError, "start_rel must be positive");
    if (points_per_decade < 1 || decades < 1 || max_extra_decades < 0)
        fail(ErrorKind::DomainError, "scan grid sizes must be positive");
    if (!(asymptote_tol > 0.0) || !(match_tol > 0.0)) fail(ErrorKind::DomainError, "scan tolerances must be positive");
    quadrature.validate();
}

std::vector<ThetaSample> theta_scan(const ProblemParams& params, const CriticalData& crit, const ScanConfig& scan,
                                    bool* complete) {
    scan.validate();
    std::vector<ThetaSample> samples;
    samples.push_back({0.0, limits::near_minimum(params.p, params.q, crit.u_gamma)});
    const double delta0 = scan.start_rel * std::max(1.0, std::abs(crit.e_star));
    const int base = scan.points_per_decade * scan.decades;
    const int cap = scan.points_per_decade * (scan.decades + scan.max_extra_decades);
    bool done = false;
    for (int i = 0; i <= cap; ++i) {
        const double delta = delta0 * std::pow(10.0, static_cast<double>(i) / scan.points_per_decade);
        const double theta = period_energy(params, crit, crit.e_star + delta, scan.quadrature).value;
        samples.push_back({delta, theta});
        if (i >= base && kPi / 2.0 - theta < scan.asymptote_tol) {
            done = true;
            break;
        }
    }
    if (complete) *complete = done;
    return samples;
}

ClassificationReport count_solutions(const ProblemParams& params, int m_max, const ScanConfig& scan) {
    validate(params);
    if (m_max < 1) fail(ErrorKind::DomainError, "m_max must be at least 1");
    scan.validate();

    if (params.p < -1.0 && params.q < 1.0)
        fail(ErrorKind::UnsupportedRegion, "no classification for p < -1 with q < 1");

    ClassificationReport rep;
    rep.params = params;
    rep.constant_roots = constant_solutions(params).roots;

    if (params.p == -1.0 && params.q == 1.0) {
        rep.infinite_family = true;
    } else if (params.p <= -1.0 && params.q >= 1.0) {
        rep.scanned = true;
        const CriticalData crit = critical_point(params);
        const std::vector<ThetaSample> samples = theta_scan(params, crit, scan, &rep.scan_complete);
        rep.scan_points = static_cast<int>(samples.size());
        rep.theta_min = rep.theta_max = samples.front().theta;
        for (const auto& s : samples) {
            rep.theta_min = std::min(rep.theta_min, s.theta);
            rep.theta_max = std::max(rep.theta_max, s.theta);
        }

        // m = 1 is never reached: Theta < pi/2 for p < -1
        const double floor_delta = 10.0 * degenerate_cutoff(crit.e_star);
        for (int m = 2; m <= m_max; ++m) {
            const double target = kPi / (2.0 * m);
            for (std::size_t k = 0; k + 1 < samples.size(); ++k) {
                const double fa = samples[k].theta - target;
                const double fb = samples[k + 1].theta - target;
                if ((fa < 0.0) == (fb < 0.0)) continue;
                double lo = samples[k].delta;
                const double hi = samples[k + 1].delta;
                if (lo == 0.0) {
                    // crossing between the E* limit and the first grid point
                    const double f_floor =
                        period_energy(params, crit, crit.e_star + floor_delta, scan.quadrature).value - target;
                    if ((f_floor < 0.0) == (fb < 0.0)) continue; // below resolution of the energy level
                    lo = floor_delta;
                }
                if (auto br = solve_branch(params, crit, m, lo, hi, scan)) rep.branches.push_back(*br);
            }
        }
    }
    rep.lower_bound_count = static_cast<int>(rep.constant_roots.size() + rep.branches.size());
    return rep;
}

namespace {

ScanRecord scan_point(std::size_t index, const ProblemParams& params, int m_max, const ScanConfig& scan) {
    ScanRecord rec;
    rec.index = index;
    rec.params = params;
    try {
        const ClassificationReport rep = count_solutions(params, m_max, scan);
        rec.constant_count = static_cast<int>(rep.constant_roots.size());
        rec.branch_count = static_cast<int>(rep.branches.size());
        rec.infinite_family = rep.infinite_family;
        if (!rep.scan_complete) rec.status = std::string(to_string(ErrorKind::ScanIncomplete));
        if (params.p <= -1.0 && params.q >= 1.0) {
            const int levels = admissible_threshold_levels(params.p, params.q, std::max(0, m_max - 1));
            for (int l = 1; l <= levels; ++l) {
                const double g = params.q == 1.0 ? threshold_gamma(params.p, l)
                                                 : threshold_gamma_weighted(params.p, params.q, l);
                if (params.gamma > g) rec.thresholds_crossed.push_back(l);
            }
        }
    } catch (const Error& e) {
        rec.status = to_string(e.kind());
        rec.detail = e.what();
    } catch (const std::exception& e) {
        rec.status = "InternalError";
        rec.detail = e.what();
    }
    return rec;
}

} // namespace

void region_scan(const std::vector<double>& p_grid, const std::vector<double>& q_grid,
                 const std::vector<double>& gamma_grid, int m_max, const ScanConfig& scan, int workers,
                 const std::function<void(const ScanRecord&)>& sink) {
    if (workers < 1) fail(ErrorKind::DomainError, "worker count must be at least 1");
    const std::size_t nq = q_grid.size(), ng = gamma_grid.size();
    const std::size_t total = p_grid.size() * nq * ng;
    if (total == 0) return;
    auto params_at = [&](std::size_t i) {
        return ProblemParams{p_grid[i / (nq * ng)], q_grid[(i / ng) % nq], gamma_grid[i % ng]};
    };

    if (workers == 1 || total == 1) {
        for (std::size_t i = 0; i < total; ++i) sink(scan_point(i, params_at(i), m_max, scan));
        return;
    }

    std::vector<std::optional<ScanRecord>> slots(total);
    std::mutex mu;
    std::condition_variable ready;
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next++; i < total; i = next++) {
            ScanRecord rec = scan_point(i, params_at(i), m_max, scan);
            {
                std::lock_guard lock(mu);
                slots[i] = std::move(rec);
            }
            ready.notify_one();
        }
    };
    std::vector<std::jthread> pool;
    const std::size_t n_workers = std::min<std::size_t>(static_cast<std::size_t>(workers), total);
    for (std::size_t w = 0; w < n_workers; ++w) pool.emplace_back(work);

    for (std::size_t i = 0; i < total; ++i) {
        std::unique_lock lock(mu);
        ready.wait(lock, [&] { return slots[i].has_value(); });
        ScanRecord rec = std::move(*slots[i]);
        slots[i].reset();
        lock.unlock();
        sink(rec);
    }
}

std::vector<ScanRecord> region_scan(const std::vector<double>& p_grid, const std::vector<double>& q_grid,
                                    const std::vector<double>& gamma_grid, int m_max, const ScanConfig& scan,
                                    int workers) {
    std::vector<ScanRecord> out;
    region_scan(p_grid, q_grid, gamma_grid, m_max, scan, workers, [&](const ScanRecord& r) { out.push_back(r); });
    return out;
}

} // namespace horo
