#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace vortnet::cli {

/// Exit codes shared by every subcommand.
enum ExitCode : int {
  kOk = 0,
  kFailure = 1,  // library or I/O error
  kUsage = 2,    // bad arguments
};

/// Parses `args` (without the program name) and runs the chosen subcommand:
/// gen, eig, cluster, bench or render.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace vortnet::cli
