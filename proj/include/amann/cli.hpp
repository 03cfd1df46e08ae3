#pragma once

#include <ostream>
#include <span>
#include <string>

namespace amann {

/// Exit codes of the command-line front end.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;

/// Runs one command line. args[0] is the program name. Results go to `out`
/// (unless --out names a file), diagnostics and progress to `err`.
int run_cli(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace amann
