#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace evs {

inline constexpr int kExitOk = 0;
inline constexpr int kExitPropertyFails = 1;
inline constexpr int kExitInputError = 2;

/// Runs one command line. `args` excludes the program name. Reports go to `out`,
/// diagnostics to `err`; with --json, errors are also reported on `out` as JSON.
int execute(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace evs
