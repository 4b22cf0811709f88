#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace nqrw {

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int fails = 1;
inline constexpr int input = 2;
inline constexpr int resource = 3;
}  // namespace exit_code

/// Runs the command line (without the program name) and returns the exit code.
/// Reports go to `out`, diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace nqrw
