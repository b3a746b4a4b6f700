#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qalab {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitNumerical = 2,
  kExitCheckFailed = 3,
};

/// Entry point of the `qalab` tool. `args` excludes the program name.
/// CSV goes to --out (or `out` when absent); diagnostics go to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Parses "8", "4,6,8", "4:12" or "8:24:2" (inclusive) into a list of ints.
std::vector<int> parse_int_list(const std::string& text);
/// Parses "10,20,30" or "start:stop:step" (inclusive) into a list of reals.
std::vector<double> parse_real_list(const std::string& text);

}  // namespace qalab
