#pragma once

#include <ostream>

namespace horo::cli {

enum ExitCode : int {
    kExitOk = 0,
    kExitDomain = 2,
    kExitConvergence = 3,
    kExitNoBranch = 4,
    kExitPartialScan = 5,
    kExitUsage = 64,
    kExitInternal = 70,
};

/// Parses argv (argv[0] is the program name), runs one subcommand and returns the exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace horo::cli
