#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace specbound {

inline constexpr const char* kToolVersion = "0.1.0";

// Exit codes: 0 success, 2 input error, 3 numeric failure.
enum ExitCode : int { kExitOk = 0, kExitInput = 2, kExitNumeric = 3 };

// Runs the command line `args` (args[0] is the program name). When --out is
// given the JSON report goes to that file and the human summary to `out`;
// otherwise the JSON goes to `out` and the summary to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace specbound
