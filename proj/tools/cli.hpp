#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace wavesix::cli {

// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitVerifyFailed = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitGuard = 3;
inline constexpr int kExitTimeout = 4;

// Runs the command line `args` (without the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace wavesix::cli
