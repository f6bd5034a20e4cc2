#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace dynasty::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitCheckFailed = 3;

// Entry point shared by the dynasty binary and the CLI tests. `args` excludes
// the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dynasty::cli
