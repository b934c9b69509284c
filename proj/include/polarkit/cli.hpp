#pragma once

#include <iosfwd>

namespace polarkit {

/// Exit codes of the command-line tool.
enum ExitCode : int { kExitOk = 0, kExitFailed = 1, kExitUsage = 2, kExitResource = 3 };

/// Runs the `polarkit` command line; argv[0] is the program name.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace polarkit
