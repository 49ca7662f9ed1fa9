#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace pfaffinc::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitVerificationFailed = 1;
inline constexpr int kExitUsage = 2;

/// Bound constant fitted over the acceptance corpus and frozen; the default
/// C for `verify-bound --theorem pfaffian-curves`.
inline constexpr double kFrozenCurvesConstant = 0.25;

/// Runs one command line (args excludes the program name). Primary output
/// goes to `out` unless redirected with --out; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pfaffinc::cli
