#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace bellgate {

/// Exit codes of the command-line front end.
enum ExitCode : int {
  exit_ok = 0,
  exit_config = 1,     ///< config, validation or usage error
  exit_io = 2,
  exit_numerical = 3,
};

/// Entry point of the `bellgate` tool; `args` excludes the program name.
/// Subcommands: geometry, analyze, simulate, causality.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace bellgate
