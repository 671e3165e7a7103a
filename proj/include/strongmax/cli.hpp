#pragma once

#include <iosfwd>

namespace strongmax::cli {

/// Exit codes: 0 pass, 1 usage or input error, 2 flagged violation.
inline constexpr int kExitPass = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitViolation = 2;

/// Entry point of the strongmax binary. Output goes to `out`, diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace strongmax::cli
