#pragma once

#include <string>
#include <vector>

namespace nodalscope::cli {

/// Exit codes shared by every subcommand.
enum ExitCode : int { kOk = 0, kHypothesisFail = 1, kInputError = 2 };

/// Parses argv and dispatches to gen, certify, nodal, doubling or report.
int run(int argc, const char* const* argv);
int run(const std::vector<std::string>& args);

}  // namespace nodalscope::cli
