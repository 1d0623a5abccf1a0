#pragma once

#include <ostream>

namespace decoy::cli {

/// Process exit codes.
enum ExitCode : int {
    kOk = 0,
    kRuntimeError = 1,     ///< driver unavailable, I/O failure, anything unexpected
    kUsageError = 2,       ///< bad flags, bad config file, invalid configuration
    kInputError = 3,       ///< missing or malformed fixtures, wordlists or logs
    kMismatchedPlans = 4,  ///< analyze: paired logs do not share a genuine plan
};

/// Entry point of the `decoy` tool: simulate | obfuscate | analyze.
/// `--config FILE` (any position after the subcommand) prepends the flags
/// found in FILE, one JSON object per line, so explicit flags win.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace decoy::cli
