#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace horo {

enum class ErrorKind {
    NonpositiveArgument,
    UnsupportedRegion,
    ConvergenceFailure,
    BelowMinimum,
    DegenerateLevel,
    InvalidShape,
    DomainError,
    DriftExceeded,
    StepFailure,
    NoEventFound,
    PeriodMismatch,
    GridTooCoarse,
    BoundaryDivergence,
    ScanIncomplete,
};

std::string_view to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

/// Quadrature that did not meet its tolerance; carries the best value found.
class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, double best_value, double error_estimate, int nodes_used)
        : Error(ErrorKind::ConvergenceFailure, what),
          best_value(best_value),
          error_estimate(error_estimate),
          nodes_used(nodes_used) {}

    double best_value;
    double error_estimate;
    int nodes_used;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

} // namespace horo
