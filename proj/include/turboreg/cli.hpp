#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace turboreg::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 1;
inline constexpr int kExitNoResult = 2;

/// Runs the command line `args` (without the program name). Exit codes:
/// 0 success, 1 usage or input error, 2 registration failure.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace turboreg::cli
