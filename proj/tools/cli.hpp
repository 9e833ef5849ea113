#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace wiener::cli {

// Exit codes: 0 success, 1 attack exhausted, 2 usage or input error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitExhausted = 1;
inline constexpr int kExitUsage = 2;

/// Runs one invocation. args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace wiener::cli
