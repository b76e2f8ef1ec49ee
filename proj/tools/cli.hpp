#pragma once

namespace logevo::cli {

// Exit codes of the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitVerificationFailed = 1;
inline constexpr int kExitUsage = 2;

int run(int argc, char** argv);

}  // namespace logevo::cli
