#include "cli.hpp"

#include <charconv>
#include <climits>
#include <cstdlib>
#include <cmath>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "report_json.hpp"

#include "horoperiod/classifier.hpp"
#include "horoperiod/orbit_engine.hpp"
#include "horoperiod/period_engine.hpp"
#include "horoperiod/scalar_kernel.hpp"

namespace horo::cli {

namespace {

using nlohmann::json;

constexpr const char* kExitCodeHelp =
    "Exit codes:\n"
    "  0   success\n"
    "  2   domain error (input outside the supported region, E below the minimum level, ...)\n"
    "  3   convergence failure (quadrature, integration, period mismatch, failed certification)\n"
    "  4   no branch with the requested fold m\n"
    "  5   partial scan (status column names the failure)\n"
    "  64  usage error (malformed or conflicting flags)\n"
    "  70  internal error";

// bad flags that CLI11 cannot express as validators
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    std::optional<double> quad_tol;
    std::optional<double> ode_tol;
    double root_tol = 1e-12;
    int grid_size = 1024;
    std::string output;
    std::string format; // empty: csv for scan, json otherwise
    int workers = 1;
};

int exit_code_for(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::ConvergenceFailure:
    case ErrorKind::DriftExceeded:
    case ErrorKind::StepFailure:
    case ErrorKind::NoEventFound:
    case ErrorKind::PeriodMismatch:
        return kExitConvergence;
    case ErrorKind::ScanIncomplete:
        return kExitPartialScan;
    default:
        return kExitDomain;
    }
}

double parse_double(const std::string& text) {
    double x = 0.0;
    const char* first = text.data();
    const char* last = first + text.size();
    if (first != last && *first == '+') ++first;
    const auto res = std::from_chars(first, last, x);
    if (res.ec != std::errc() || res.ptr != last || !std::isfinite(x))
        throw UsageError("not a finite number: '" + text + "'");
    return x;
}

// "a:b:n" for n evenly spaced points including both ends, or a comma list
std::vector<double> parse_grid(const std::string& spec) {
    std::vector<double> out;
    if (spec.empty()) return out;
    if (spec.find(':') != std::string::npos) {
        std::vector<std::string> parts;
        std::stringstream ss(spec);
        for (std::string part; std::getline(ss, part, ':');) parts.push_back(part);
        if (parts.size() != 3) throw UsageError("grid range must be start:stop:count, got '" + spec + "'");
        const double a = parse_double(parts[0]);
        const double b = parse_double(parts[1]);
        int n = 0;
        const auto res = std::from_chars(parts[2].data(), parts[2].data() + parts[2].size(), n);
        if (res.ec != std::errc() || res.ptr != parts[2].data() + parts[2].size() || n < 1)
            throw UsageError("grid count must be a positive integer, got '" + parts[2] + "'");
        for (int i = 0; i < n; ++i) out.push_back(n == 1 ? a : a + (b - a) * i / (n - 1));
        if (n > 1) out.back() = b;
        return out;
    }
    std::stringstream ss(spec);
    for (std::string item; std::getline(ss, item, ',');) out.push_back(parse_double(item));
    return out;
}

QuadratureConfig quadrature_config(const RunConfig& run, double fallback) {
    QuadratureConfig q;
    q.target_tol = run.quad_tol.value_or(fallback);
    return q;
}

ScanConfig scan_config(const RunConfig& run) {
    ScanConfig s;
    if (run.quad_tol) s.quadrature.target_tol = *run.quad_tol;
    return s;
}

SolutionConfig solution_config(const RunConfig& run) {
    SolutionConfig s;
    s.grid_size = run.grid_size;
    if (run.quad_tol) s.quadrature.target_tol = *run.quad_tol;
    if (run.ode_tol) s.orbit.abs_tol = s.orbit.rel_tol = *run.ode_tol;
    return s;
}

RootTolerance root_tolerance(const RunConfig& run) {
    RootTolerance t;
    t.rel = run.root_tol;
    return t;
}

void write_json(std::ostream& os, const json& doc) { os << doc.dump(2) << '\n'; }

struct Params {
    double p = 0.0;
    double q = 1.0;
    double gamma = 0.0;
    ProblemParams problem() const { return {p, q, gamma}; }
};

// ---- period ----

struct PeriodArgs {
    Params params;
    double energy = 0.0, alpha = 0.0, r = 0.0;
    CLI::Option *gamma_opt = nullptr, *energy_opt = nullptr, *alpha_opt = nullptr, *r_opt = nullptr;
};

int cmd_period(const PeriodArgs& a, const RunConfig& run, std::ostream& os) {
    const bool energy_chart = a.gamma_opt->count() > 0 || a.energy_opt->count() > 0;
    const bool shape_chart = a.alpha_opt->count() > 0 || a.r_opt->count() > 0;
    if (energy_chart && shape_chart) throw UsageError("give either --gamma/--E or --alpha/--r, not both");
    if (!energy_chart && !shape_chart) throw UsageError("give --gamma and --E, or --alpha and --r");
    if (energy_chart && (a.gamma_opt->count() == 0 || a.energy_opt->count() == 0))
        throw UsageError("the energy chart needs both --gamma and --E");
    if (shape_chart && (a.alpha_opt->count() == 0 || a.r_opt->count() == 0))
        throw UsageError("the shape chart needs both --alpha and --r");

    const QuadratureConfig qcfg = quadrature_config(run, QuadratureConfig{}.target_tol);
    ProblemParams params = a.params.problem();
    double energy = a.energy;
    ShapeCoords shape{a.alpha, a.r};
    if (energy_chart) {
        validate(params);
        const CriticalData crit = critical_point(params, root_tolerance(run));
        shape = shape_from_turning(turning_points(params, crit, energy, root_tolerance(run)));
    } else {
        const GammaEnergy ge = gamma_energy_from_shape(params.p, params.q, shape);
        params.gamma = ge.gamma;
        energy = ge.energy;
    }
    const PeriodValue v = period_shape(params.p, params.q, shape, qcfg);
    const char* chart = energy_chart ? "energy" : "shape";

    if (run.format == "csv") {
        os << "chart,p,q,gamma,energy,alpha,r,theta,error_estimate,nodes_used\n";
        os << chart << ',' << format_double(params.p) << ',' << format_double(params.q) << ','
           << format_double(params.gamma) << ',' << format_double(energy) << ',' << format_double(shape.alpha) << ','
           << format_double(shape.r) << ',' << format_double(v.value) << ',' << format_double(v.error_estimate)
           << ',' << v.nodes_used << '\n';
    } else {
        write_json(os, {{"schema_version", kSchemaVersion},
                        {"kind", "period"},
                        {"chart", chart},
                        {"params", params_json(params)},
                        {"energy", energy},
                        {"alpha", shape.alpha},
                        {"r", shape.r},
                        {"theta", v.value},
                        {"error_estimate", v.error_estimate},
                        {"nodes_used", v.nodes_used}});
    }
    return kExitOk;
}

// ---- solve ----

struct SolveArgs {
    Params params;
    int m = 0;
    std::string verify;
    CLI::Option *p_opt = nullptr, *gamma_opt = nullptr, *m_opt = nullptr;
};

int cmd_verify(const SolveArgs& a, std::ostream& os, std::ostream& err) {
    std::ifstream in(a.verify, std::ios::binary);
    if (!in) throw UsageError("cannot read " + a.verify);
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::exception& e) {
        fail(ErrorKind::DomainError, std::string("profile JSON does not parse: ") + e.what());
    }
    const SolutionProfile stored = solution_from_json(doc);
    const double stored_residual = doc.at("certification").value("residual_max", std::nan(""));
    SolutionProfile again = certify_profile(stored.params, stored.phi, stored.m, stored.energy);
    again.half_period = stored.half_period;
    const double delta = std::abs(again.residual_max - stored_residual);
    const bool reproduced = delta <= 1e-12;
    write_json(os, {{"schema_version", kSchemaVersion},
                    {"kind", "verification"},
                    {"params", params_json(again.params)},
                    {"energy", again.energy},
                    {"m", again.m},
                    {"grid_size", again.phi.size()},
                    {"stored_residual_max", stored_residual},
                    {"residual_delta", delta},
                    {"reproduced", reproduced},
                    {"certification", certification_json(again)}});
    if (!reproduced) {
        err << "verify: residual differs from the stored value by " << format_double(delta) << '\n';
        return kExitConvergence;
    }
    if (!is_certified(again)) {
        err << "verify: profile does not pass certification\n";
        return kExitConvergence;
    }
    return kExitOk;
}

int cmd_solve(const SolveArgs& a, const RunConfig& run, std::ostream& os, std::ostream& err) {
    if (!a.verify.empty()) {
        if (a.p_opt->count() || a.gamma_opt->count() || a.m_opt->count())
            throw UsageError("--verify takes the parameters from the profile file");
        return cmd_verify(a, os, err);
    }
    if (!a.p_opt->count() || !a.gamma_opt->count() || !a.m_opt->count())
        throw UsageError("solve needs --p, --gamma and --m (or --verify FILE)");
    if (run.format == "csv") throw UsageError("solve writes JSON only");

    const ProblemParams params = a.params.problem();
    const ClassificationReport rep = count_solutions(params, a.m, scan_config(run));
    std::optional<Branch> pick;
    for (const Branch& b : rep.branches)
        if (b.m == a.m && (!pick || b.energy < pick->energy)) pick = b;
    if (!pick) {
        err << "solve: no branch with m = " << a.m << (rep.scan_complete ? "" : " (scan incomplete)") << '\n';
        return kExitNoBranch;
    }
    const SolutionProfile prof = build_solution(params, pick->energy, a.m, solution_config(run));
    write_json(os, solution_json(prof));
    if (!is_certified(prof)) {
        err << "solve: profile written but not certified (residual_max " << format_double(prof.residual_max)
            << ")\n";
        return kExitConvergence;
    }
    return kExitOk;
}

// ---- classify ----

int cmd_classify(const Params& pa, int m_max, const RunConfig& run, std::ostream& os) {
    const ClassificationReport rep = count_solutions(pa.problem(), m_max, scan_config(run));
    if (run.format == "csv") {
        os << "p,q,gamma,constant_count,branch_count,infinite_family,lower_bound_count,scan_complete\n";
        os << format_double(pa.p) << ',' << format_double(pa.q) << ',' << format_double(pa.gamma) << ','
           << rep.constant_roots.size() << ',' << rep.branches.size() << ','
           << (rep.infinite_family ? "true" : "false") << ',' << rep.lower_bound_count << ','
           << (rep.scan_complete ? "true" : "false") << '\n';
    } else {
        write_json(os, classification_json(rep));
    }
    return rep.scan_complete ? kExitOk : kExitPartialScan;
}

// ---- thresholds ----

struct ThresholdArgs {
    double p = 0.0;
    std::string p_grid;
    double q = 1.0;
    int l = 1;
    CLI::Option* p_opt = nullptr;
};

double threshold_for(double p, double q, int l) {
    return q == 1.0 ? threshold_gamma(p, l) : threshold_gamma_weighted(p, q, l);
}

int cmd_thresholds(const ThresholdArgs& a, const RunConfig& run, std::ostream& os) {
    const bool single = a.p_opt->count() > 0;
    if (single == !a.p_grid.empty()) throw UsageError("give exactly one of --p and --p-grid");
    if (a.l < 1) throw UsageError("--l must be at least 1");

    struct Row {
        double p;
        std::optional<double> gamma;
        std::string status;
    };
    std::vector<Row> rows;
    if (single) {
        rows.push_back({a.p, threshold_for(a.p, a.q, a.l), "ok"});
    } else {
        for (double p : parse_grid(a.p_grid)) {
            try {
                rows.push_back({p, threshold_for(p, a.q, a.l), "ok"});
            } catch (const Error& e) {
                rows.push_back({p, std::nullopt, std::string(to_string(e.kind()))});
            }
        }
    }

    if (run.format == "csv") {
        os << "p,q,l,gamma,status\n";
        for (const Row& r : rows)
            os << format_double(r.p) << ',' << format_double(a.q) << ',' << a.l << ','
               << (r.gamma ? format_double(*r.gamma) : "") << ',' << r.status << '\n';
    } else {
        json out = json::array();
        for (const Row& r : rows)
            out.push_back({{"p", r.p}, {"gamma", r.gamma ? json(*r.gamma) : json(nullptr)}, {"status", r.status}});
        json doc{{"schema_version", kSchemaVersion}, {"kind", "thresholds"}, {"q", a.q}, {"l", a.l}, {"rows", out}};
        if (single) doc["gamma"] = *rows.front().gamma;
        write_json(os, doc);
    }
    return kExitOk;
}

// ---- constants ----

int cmd_constants(const Params& pa, const RunConfig& run, std::ostream& os) {
    const ConstantSolutions cs = constant_solutions(pa.problem(), root_tolerance(run));
    if (run.format == "csv") {
        os << "p,q,gamma,root_index,root\n";
        for (std::size_t i = 0; i < cs.roots.size(); ++i)
            os << format_double(pa.p) << ',' << format_double(pa.q) << ',' << format_double(pa.gamma) << ',' << i
               << ',' << format_double(cs.roots[i]) << '\n';
    } else {
        write_json(os, {{"schema_version", kSchemaVersion},
                        {"kind", "constants"},
                        {"params", params_json(pa.problem())},
                        {"roots", cs.roots},
                        {"gamma_threshold", cs.gamma_threshold ? json(*cs.gamma_threshold) : json(nullptr)}});
    }
    return kExitOk;
}

// ---- scan ----

struct ScanArgs {
    std::string p_grid, q_grid = "1", gamma_grid;
    int m_max = 8;
};

int cmd_scan(const ScanArgs& a, const RunConfig& run, std::ostream& os) {
    const std::vector<double> ps = parse_grid(a.p_grid), qs = parse_grid(a.q_grid), gs = parse_grid(a.gamma_grid);
    bool all_ok = true;
    if (run.format != "json") {
        os << kScanCsvHeader << '\n';
        region_scan(ps, qs, gs, a.m_max, scan_config(run), run.workers, [&](const ScanRecord& rec) {
            all_ok = all_ok && rec.status == "ok";
            os << scan_csv_row(rec) << '\n';
            os.flush();
        });
    } else {
        json records = json::array();
        region_scan(ps, qs, gs, a.m_max, scan_config(run), run.workers, [&](const ScanRecord& rec) {
            all_ok = all_ok && rec.status == "ok";
            records.push_back(scan_record_json(rec));
        });
        write_json(os, {{"schema_version", kSchemaVersion},
                        {"kind", "region_scan"},
                        {"m_max", a.m_max},
                        {"records", records}});
    }
    return all_ok ? kExitOk : kExitPartialScan;
}

void add_params(CLI::App* sub, Params& pa, bool with_gamma, CLI::Option** p_opt = nullptr,
                CLI::Option** gamma_opt = nullptr) {
    CLI::Option* p = sub->add_option("--p", pa.p, "exponent p");
    CLI::Option* q = sub->add_option("--q", pa.q, "weight exponent q");
    q->capture_default_str();
    if (p_opt) *p_opt = p;
    else p->required();
    if (with_gamma) {
        CLI::Option* g = sub->add_option("--gamma", pa.gamma, "gamma > 0");
        if (gamma_opt) *gamma_opt = g;
        else g->required();
    }
}

} // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Period function, periodic solutions and classification scans for the horospherical "
                 "p-Minkowski problem on the circle",
                 "horoperiod"};
    app.footer(kExitCodeHelp);
    app.fallthrough();
    app.require_subcommand(1);

    RunConfig run;
    app.set_config("--config", "", "key=value file with defaults for the global options");
    app.add_option("--quad-tol", run.quad_tol, "period quadrature tolerance")->check(CLI::PositiveNumber);
    app.add_option("--ode-tol", run.ode_tol, "orbit integrator absolute and relative tolerance")
        ->check(CLI::PositiveNumber);
    app.add_option("--root-tol", run.root_tol, "relative tolerance of scalar root solves")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app.add_option("--grid", run.grid_size, "starting profile grid size")
        ->check(CLI::Range(kMinGridSize, 1 << 16))
        ->capture_default_str();
    app.add_option("-o,--output", run.output, "output file (default stdout)");
    app.add_option("--format", run.format, "json or csv (scan defaults to csv, the rest to json)")
        ->check(CLI::IsMember({"json", "csv"}));
    CLI::Option* workers_opt =
        app.add_option("--workers", run.workers, "scan worker threads (default $HOROPERIOD_THREADS or 1)")
            ->check(CLI::Range(1, 4096));

    std::function<int(std::ostream&)> action;

    PeriodArgs period;
    CLI::App* sub = app.add_subcommand("period", "Theta at a level E, or at shape coordinates (alpha, r)");
    add_params(sub, period.params, false);
    period.gamma_opt = sub->add_option("--gamma", period.params.gamma, "gamma > 0");
    period.energy_opt = sub->add_option("--E", period.energy, "first-integral level");
    period.alpha_opt = sub->add_option("--alpha", period.alpha, "alpha = 1/(u+ u-)");
    period.r_opt = sub->add_option("--r", period.r, "r = u+/u-");
    sub->callback([&] { action = [&](std::ostream& os) { return cmd_period(period, run, os); }; });

    SolveArgs solve;
    sub = app.add_subcommand("solve", "m-fold periodic solution on the smallest-E branch");
    add_params(sub, solve.params, true, &solve.p_opt, &solve.gamma_opt);
    solve.m_opt = sub->add_option("--m", solve.m, "fold symmetry, at least 2")->check(CLI::Range(2, INT_MAX));
    sub->add_option("--verify", solve.verify, "re-certify a profile JSON written by solve");
    sub->callback([&] { action = [&](std::ostream& os) { return cmd_solve(solve, run, os, err); }; });

    Params classify;
    int classify_m_max = 8;
    sub = app.add_subcommand("classify", "constant roots and non-constant branches at one (p, q, gamma)");
    add_params(sub, classify, true);
    sub->add_option("--m-max", classify_m_max, "largest fold searched")
        ->check(CLI::Range(1, 1000))
        ->capture_default_str();
    sub->callback([&] { action = [&](std::ostream& os) { return cmd_classify(classify, classify_m_max, run, os); }; });

    ThresholdArgs thr;
    sub = app.add_subcommand("thresholds", "gamma_{p,q,l} at one p or along a p grid");
    thr.p_opt = sub->add_option("--p", thr.p, "exponent p");
    sub->add_option("--p-grid", thr.p_grid, "start:stop:count or comma list");
    sub->add_option("--q", thr.q, "weight exponent q")->capture_default_str();
    sub->add_option("--l", thr.l, "level l >= 1")->capture_default_str();
    sub->callback([&] { action = [&](std::ostream& os) { return cmd_thresholds(thr, run, os); }; });

    Params constants;
    sub = app.add_subcommand("constants", "constant solutions c > 1");
    add_params(sub, constants, true);
    sub->callback([&] { action = [&](std::ostream& os) { return cmd_constants(constants, run, os); }; });

    ScanArgs scan;
    sub = app.add_subcommand("scan", "region scan over a (p, q, gamma) grid");
    sub->add_option("--p-grid", scan.p_grid, "start:stop:count or comma list")->required();
    sub->add_option("--q-grid", scan.q_grid, "start:stop:count or comma list")->capture_default_str();
    sub->add_option("--gamma-grid", scan.gamma_grid, "start:stop:count or comma list")->required();
    sub->add_option("--m-max", scan.m_max, "largest fold searched")->check(CLI::Range(1, 1000))->capture_default_str();
    sub->callback([&] { action = [&](std::ostream& os) { return cmd_scan(scan, run, os); }; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::CallForVersion&) {
        out << app.version() << '\n';
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "usage: " << e.what() << '\n';
        return kExitUsage;
    }

    try {
        if (workers_opt->count() == 0) {
            if (const char* env = std::getenv("HOROPERIOD_THREADS"); env && *env) {
                const std::string text(env);
                const auto res = std::from_chars(text.data(), text.data() + text.size(), run.workers);
                if (res.ec != std::errc() || res.ptr != text.data() + text.size() || run.workers < 1 ||
                    run.workers > 4096)
                    throw UsageError("HOROPERIOD_THREADS must be an integer in [1, 4096], got '" + text + "'");
            }
        }
        if (run.output.empty()) return action(out);
        std::ofstream file(run.output, std::ios::binary | std::ios::trunc);
        if (!file) throw UsageError("cannot open " + run.output + " for writing");
        const int code = action(file);
        file.flush();
        if (!file) fail(ErrorKind::DomainError, "write to " + run.output + " failed");
        return code;
    } catch (const UsageError& e) {
        err << "usage: " << e.what() << '\n';
        return kExitUsage;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return exit_code_for(e.kind());
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return kExitInternal;
    }
}

} // namespace horo::cli
