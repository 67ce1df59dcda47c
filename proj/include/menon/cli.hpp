#pragma once

// Command-line front end. Exit codes: 0 when every comparison is equal,
// 1 when at least one is not, 2 when input errors prevented comparison.

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace menon {

inline constexpr int kExitEqual = 0;
inline constexpr int kExitMismatch = 1;
inline constexpr int kExitInvalid = 2;

/// Splits on commas that are not inside [...]; trims blanks; drops empties.
std::vector<std::string> split_list(std::string_view text);

/// Entry point shared by the `menon` binary and the tests.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace menon
