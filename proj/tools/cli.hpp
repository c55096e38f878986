#pragma once

#include <ostream>

namespace lidskii::cli {

// Exit codes.
inline constexpr int kOk = 0;             // certified_global, consistent, success
inline constexpr int kUsage = 1;          // bad arguments, unreadable or malformed input
inline constexpr int kNegative = 2;       // not_local_min, violates_structure
inline constexpr int kInconclusive = 3;

/// Parses argv, runs one subcommand and writes its JSON report to --out
/// (stdout by default). Diagnostics go to `err`.
int run(int argc, const char* const* argv, std::ostream& err);

/// Worker cap from LIDSKII_THREADS, else the hardware concurrency.
unsigned thread_budget();

}  // namespace lidskii::cli
