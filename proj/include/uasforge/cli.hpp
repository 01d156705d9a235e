#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace uasforge {

/// Exit codes of the uasforge tool.
enum ExitCode : int {
  exit_ok = 0,
  exit_error = 1,       // diagnostics, unknown verdicts, missing annotations, I/O
  exit_usage = 2,
  exit_violation = 3,   // falsified obligation, failed claim, refused generation
  exit_no_solver = 4,
};

/// Runs the command line `args` (without the program name).
int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

} // namespace uasforge
