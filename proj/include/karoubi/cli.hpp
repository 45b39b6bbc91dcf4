#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace karoubi::cli {

// Runs one CLI invocation. Reports go to `out`, diagnostics to `err`.
// Exit codes: 0 all checks pass, 1 a check failed, 2 usage/parse error,
// 3 numerical failure.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

}  // namespace karoubi::cli
