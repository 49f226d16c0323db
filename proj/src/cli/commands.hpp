#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace matchdist::cli {

/// Exit codes of the command line tool.
enum ExitCode : int { kSuccess = 0, kPropertyFailure = 1, kUsageError = 2 };

/// Runs the tool on `args` (without the program name).
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace matchdist::cli
