#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace minkowski {

/// Exit codes of the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitBudget = 3;

/// Runs one subcommand; `args` excludes the program name. Reports go to
/// `out` (or the --out file), diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace minkowski
