#pragma once

#include <ostream>

namespace gmq::cli {

enum ExitCode : int { kOk = 0, kFalsified = 1, kUsage = 2, kBudget = 3 };

// Runs one command line. Results go to `out`, diagnostics to `err`.
int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace gmq::cli
