#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace nlap {

/// Exit codes of the command-line front end.
inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitStudyFailed = 3;

/// Runs one command. `args` excludes the program name. Tables go to `out`
/// (or the --out file), diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace nlap
