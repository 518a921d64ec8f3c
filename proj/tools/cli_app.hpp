#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace proxycast::cli {

/// Runs the command line `args` (without the program name). Returns the
/// process exit code: 0 ok, 1 config/usage, 2 data, 3 numeric.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace proxycast::cli
