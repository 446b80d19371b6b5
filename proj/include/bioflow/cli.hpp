#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace bioflow::cli {

inline constexpr const char* kToolVersion = "0.1.0";

// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 1;
inline constexpr int kExitIo = 2;
inline constexpr int kExitInfeasible = 3;
inline constexpr int kExitUnbounded = 4;
inline constexpr int kExitIterationLimit = 5;

/// Runs one command. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace bioflow::cli
