#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace dsop::app {

/// Process exit statuses of the dsop command.
enum ExitStatus : int {
  kOk = 0,
  kCheckFailed = 1,  // verify or rescore found a mismatch; I/O failures
  kInfeasible = 2,
  kInvalidInput = 3,  // parse or validation error in an instance file
  kTimeout = 4,
  kUsage = 5,  // bad flags or configuration
};

/// Runs the command line `args` (without the program name), writing primary
/// output to `out` and diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dsop::app
