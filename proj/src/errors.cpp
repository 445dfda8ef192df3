#include "horoperiod/errors.hpp"

namespace horo {

std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
    case ErrorKind::NonpositiveArgument: return "NonpositiveArgument";
    case ErrorKind::UnsupportedRegion: return "UnsupportedRegion";
    case ErrorKind::ConvergenceFailure: return "ConvergenceFailure";
    case ErrorKind::BelowMinimum: return "BelowMinimum";
    case ErrorKind::DegenerateLevel: return "DegenerateLevel";
    case ErrorKind::InvalidShape: return "InvalidShape";
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::DriftExceeded: return "DriftExceeded";
    case ErrorKind::StepFailure: return "StepFailure";
    case ErrorKind::NoEventFound: return "NoEventFound";
    case ErrorKind::PeriodMismatch: return "PeriodMismatch";
    case ErrorKind::GridTooCoarse: return "GridTooCoarse";
    case ErrorKind::BoundaryDivergence: return "BoundaryDivergence";
    case ErrorKind::ScanIncomplete: return "ScanIncomplete";
    }
    return "Unknown";
}

} // namespace horo
