#pragma once

#include <ostream>

namespace recoil::cli {

enum ExitCode : int { ok = 0, config_failure = 2, numerical_failure_code = 3, partial_results = 4 };

/// Full command-line entry point.  Output goes to `out` unless --out / output.path names a file.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace recoil::cli
