#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace mma::cli {

/// Runs the mma-lab command line with `args` (args[0] is the program name).
/// Returns the process exit code: 0 ok, 1 numerical failure, 2 usage or
/// configuration error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mma::cli
