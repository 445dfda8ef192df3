#include "report_json.hpp"

#include <array>
#include <charconv>
#include <cmath>

namespace horo::cli {

using nlohmann::json;

std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    std::array<char, 40> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x, std::chars_format::general, 17);
    return std::string(buf.data(), res.ptr);
}

json params_json(const ProblemParams& params) {
    return {{"p", params.p}, {"q", params.q}, {"gamma", params.gamma}};
}

bool is_certified(const SolutionProfile& profile) {
    return profile.residual_max < kResidualGate && profile.hconvex_min > 0.0 && profile.hk_value >= kHkGate &&
           profile.symmetry_error == 0.0;
}

namespace {

// inf is not representable in JSON; symmetry_error uses it for grids not divisible by m
json finite_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

template <class T>
T field(const json& doc, const char* key) {
    if (!doc.contains(key)) fail(ErrorKind::DomainError, std::string("profile JSON lacks field ") + key);
    try {
        return doc.at(key).get<T>();
    } catch (const json::exception& e) {
        fail(ErrorKind::DomainError, std::string("profile JSON field ") + key + ": " + e.what());
    }
}

} // namespace

json certification_json(const SolutionProfile& profile) {
    return {{"residual_max", profile.residual_max},
            {"residual_bracket", profile.residual_bracket},
            {"hconvex_min", profile.hconvex_min},
            {"hk_value", profile.hk_value},
            {"symmetry_error", finite_or_null(profile.symmetry_error)},
            {"residual_gate", kResidualGate},
            {"hk_gate", kHkGate},
            {"certified", is_certified(profile)}};
}

json solution_json(const SolutionProfile& profile) {
    return {{"schema_version", kSchemaVersion},
            {"kind", "solution_profile"},
            {"params", params_json(profile.params)},
            {"energy", profile.energy},
            {"m", profile.m},
            {"half_period", profile.half_period},
            {"grid_size", profile.phi.size()},
            {"theta", profile.theta},
            {"phi", profile.phi},
            {"certification", certification_json(profile)}};
}

SolutionProfile solution_from_json(const json& doc) {
    if (!doc.is_object()) fail(ErrorKind::DomainError, "profile JSON must be an object");
    if (field<int>(doc, "schema_version") != kSchemaVersion)
        fail(ErrorKind::DomainError, "unsupported schema_version");
    if (field<std::string>(doc, "kind") != "solution_profile")
        fail(ErrorKind::DomainError, "JSON document is not a solution profile");
    const json params = field<json>(doc, "params");
    SolutionProfile prof;
    prof.params = {field<double>(params, "p"), field<double>(params, "q"), field<double>(params, "gamma")};
    prof.energy = field<double>(doc, "energy");
    prof.m = field<int>(doc, "m");
    prof.half_period = field<double>(doc, "half_period");
    prof.phi = field<std::vector<double>>(doc, "phi");
    prof.theta = field<std::vector<double>>(doc, "theta");
    if (prof.theta.size() != prof.phi.size()) fail(ErrorKind::DomainError, "theta and phi differ in length");
    return prof;
}

json classification_json(const ClassificationReport& report) {
    json branches = json::array();
    for (const Branch& b : report.branches)
        branches.push_back({{"m", b.m}, {"energy", b.energy}, {"theta_check", b.theta_check}});
    return {{"schema_version", kSchemaVersion},
            {"kind", "classification"},
            {"params", params_json(report.params)},
            {"constant_roots", report.constant_roots},
            {"branches", branches},
            {"infinite_family", report.infinite_family},
            {"lower_bound_count", report.lower_bound_count},
            {"scanned", report.scanned},
            {"scan_complete", report.scan_complete},
            {"theta_min", report.theta_min},
            {"theta_max", report.theta_max},
            {"scan_points", report.scan_points}};
}

json scan_record_json(const ScanRecord& record) {
    return {{"index", record.index},
            {"p", record.params.p},
            {"q", record.params.q},
            {"gamma", record.params.gamma},
            {"constant_count", record.constant_count},
            {"branch_count", record.branch_count},
            {"infinite_family", record.infinite_family},
            {"thresholds_crossed", record.thresholds_crossed},
            {"status", record.status},
            {"detail", record.detail}};
}

std::string scan_csv_row(const ScanRecord& record) {
    return format_double(record.params.p) + ',' + format_double(record.params.q) + ',' +
           format_double(record.params.gamma) + ',' + std::to_string(record.constant_count) + ',' +
           std::to_string(record.branch_count) + ',' + (record.infinite_family ? "true" : "false") + ',' +
           record.status;
}

} // namespace horo::cli
