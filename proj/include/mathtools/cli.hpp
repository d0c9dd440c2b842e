#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mathtools::cli {

enum ExitCode : int { kSuccess = 0, kDomainError = 1, kUsageError = 2 };

/// Runs `mml <subcommand> [flags] <inputs...>`. `args` excludes the program
/// name. Results go to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

/// Ten significant digits, independent of locale; integral values keep a
/// trailing ".0".
std::string format_number(double value);

}  // namespace mathtools::cli
