#pragma once

#include <iosfwd>

namespace calib::cli {

// Exit codes returned by run().
inline constexpr int kExitOk = 0;
inline constexpr int kExitDataError = 1;
inline constexpr int kExitUsage = 2;

// Parses argv and runs one subcommand. Reports go to `out` unless a command
// is pointed at files; diagnostics go to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace calib::cli
