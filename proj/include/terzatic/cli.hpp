#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace terzatic {

/// Exit codes: 0 ok / holds, 1 violated or failed, 2 invalid input, 3 cap exceeded.
enum ExitCode : int { kExitOk = 0, kExitViolated = 1, kExitInvalid = 2, kExitCap = 3 };

/// Runs the command line `args` (program name excluded).
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace terzatic
