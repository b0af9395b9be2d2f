#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace ordstat {

/// Exit codes of the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;  // verify: a verdict failed
inline constexpr int kExitUsage = 2;    // bad flags, invalid values, schema violations
inline constexpr int kExitRuntime = 3;  // model or numerical failure while running

/// Runs the `ordstat` command line (arguments exclude the program name).
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ordstat
