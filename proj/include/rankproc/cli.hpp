#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace rankproc::cli {

/// Exit codes of the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitInternal = 2;

/// Runs the tool with `args` (without the program name). Reports go to
/// `out`, errors to `err` as one JSON object {"code": ..., "message": ...}.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rankproc::cli
