#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace qstep {

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitUsage = 2;

/// Runs the command line `args` (without the program name).
/// Returns 0 on success, 1 when validation checks fail, 2 on usage or IO errors.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace qstep
