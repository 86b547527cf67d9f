#pragma once

#include <ostream>

namespace specforge::cli {

// Exit codes: 0 success, 1 usage error, 2 data or schema error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;

// Runs the specforge command line in-process.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace specforge::cli
