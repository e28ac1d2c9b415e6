#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace pdag {

/// Exit codes of the command-line front end.
enum ExitCode : int {
  kExitOk = 0,
  kExitInfeasible = 1,
  kExitInput = 2,
  kExitCapExceeded = 3,
};

/// Runs one command (`args` excludes the program name). Primary output goes
/// to `out`, diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pdag
