#pragma once

#include <iosfwd>

namespace taubnut::cli {

// Stable exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitEarlyTermination = 2;
inline constexpr int kExitVerification = 3;

// Subcommands: integrate, analytic, verify, christoffel, curvature.
// Errors go to `err` as one line: error=<Kind> message="<text>".
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace taubnut::cli
