#pragma once

#include <string>

#include "json.hpp"

#include "horoperiod/classifier.hpp"
#include "horoperiod/orbit_engine.hpp"

namespace horo::cli {

inline constexpr int kSchemaVersion = 1;

// certification gates applied to solve output
inline constexpr double kResidualGate = 1e-6;
inline constexpr double kHkGate = -1e-8;

/// 17 significant digits, locale independent.
std::string format_double(double x);

nlohmann::json params_json(const ProblemParams& params);
nlohmann::json certification_json(const SolutionProfile& profile);
bool is_certified(const SolutionProfile& profile);

nlohmann::json solution_json(const SolutionProfile& profile);
/// Inverse of solution_json for the fields needed to re-certify; throws DomainError on schema mismatch.
SolutionProfile solution_from_json(const nlohmann::json& doc);

nlohmann::json classification_json(const ClassificationReport& report);
nlohmann::json scan_record_json(const ScanRecord& record);

inline constexpr const char* kScanCsvHeader = "p,q,gamma,constant_count,branch_count,infinite_family,status";
std::string scan_csv_row(const ScanRecord& record);

} // namespace horo::cli
