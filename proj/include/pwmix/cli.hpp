#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace pwmix {

/// Exit codes of the command-line front end.
enum ExitCode : int {
    kExitOk = 0,
    kExitVerifyFailed = 1,
    kExitUsage = 2,     // bad flags, precondition or domain errors
    kExitCapacity = 3,
};

/// Runs `pwmix <subcommand> ...`; args excludes the program name. Output
/// goes to `out` unless --out names a file.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace pwmix
