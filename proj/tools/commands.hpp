#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace latrad::cli {

/// Exit statuses besides the library error codes (which keep their numeric
/// ErrorCode values).
inline constexpr int exit_ok = 0;
inline constexpr int exit_selftest_failed = 1;
inline constexpr int exit_usage = 64;
inline constexpr int exit_internal = 70;

/// Runs the command line; output goes to `out` unless --out names a file.
/// Failures print one line "error: <code>: <message>" on `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace latrad::cli
