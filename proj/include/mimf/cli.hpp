#pragma once

#include <ostream>
#include <span>
#include <string>

namespace mimf {

/// Exit codes of the command-line front end.
enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitSolverLimit = 2 };

/// Runs one subcommand (generate, build, solve, verify-hull, bench).
/// `args` excludes the program name. Results go to `out`, diagnostics and
/// logs to `err`; MIMF_LOG_LEVEL selects the log level (default warn).
int cli_dispatch( std::span<const std::string> args, std::ostream& out, std::ostream& err );

} // namespace mimf
