#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace cqcap {

// Parses and runs one CLI invocation; `args` excludes the program name.
// Returns the process exit code: 0 success, 1 usage, 2 validation,
// 3 resource cap, 4 non-convergence. Output and diagnostics go to the two
// streams, so tests can capture them.
int run_command(std::vector<std::string> args, std::ostream& out, std::ostream& err);

} // namespace cqcap
