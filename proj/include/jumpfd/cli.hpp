#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace jumpfd {

/// Exit codes of the command-line tool.
enum ExitCode : int { kExitOk = 0, kExitNotConverged = 1, kExitUsage = 2 };

/// Runs the command line `args` (program name excluded).
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run_cli(int argc, char** argv);

}  // namespace jumpfd
