#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace fairsc::cli {

// Exit statuses shared by all subcommands.
inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitInvalid = 2;
inline constexpr int kExitIo = 3;
inline constexpr int kExitPrecondition = 4;

// Runs one command line (without the program name), e.g.
// {"generate", "--n", "100", ...}. Returns the exit status.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fairsc::cli
