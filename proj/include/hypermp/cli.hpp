#pragma once

#include <ostream>

namespace hypermp::cli {

/// Exit codes of `run`.
inline constexpr int kOk = 0;
inline constexpr int kDataError = 1;
inline constexpr int kUsageError = 2;

/// Parses argv, runs one subcommand and writes its report to `out` (or to the
/// --out file). Diagnostics go to `err` only.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace hypermp::cli
