#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace xtrapulp {

inline constexpr const char* kToolVersion = "0.1.0";

/// Exit codes of the xpulp tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,
  kExitInput = 2,   // unreadable input, bad flags, invalid configuration
  kExitStrict = 3,  // --strict and a balance constraint was exceeded
};

/// Entry point behind the xpulp binary. `args` excludes the program name.
/// Every flag can also be set through an XPULP_<FLAG> environment variable
/// (upper case, dashes as underscores); explicit flags win.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace xtrapulp
