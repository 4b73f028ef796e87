#pragma once

#include <iosfwd>

namespace memwalk {

/// Exit codes of the command-line tool.
enum ExitCode : int {
    kExitOk = 0,
    kExitVerificationFailed = 1,
    kExitUsage = 2,
    kExitRuntime = 3,
};

/// Entry point of the `memwalk` tool; writes human-readable text to `out`
/// and diagnostics to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace memwalk
