#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace toptile {

enum ExitCode : int {
  exit_pass = 0,
  exit_negative = 1,
  exit_usage = 2,
  exit_inconclusive = 3,
  exit_violation = 4,
};

/// Runs one `toptile` command line; args exclude the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace toptile
