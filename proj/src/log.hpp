#pragma once

#include <string>

namespace nodalscope::detail {

/// Diagnostic line on stderr, emitted only when NODALSCOPE_LOG is set.
void log_note(const std::string& msg);

}  // namespace nodalscope::detail
