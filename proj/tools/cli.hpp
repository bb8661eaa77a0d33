#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace pmcvol::cli {

/// Exit codes: success, internal failure, usage or input error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInternal = 1;
inline constexpr int kExitInput = 2;

/// Runs one `pmcvol` command. `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pmcvol::cli
