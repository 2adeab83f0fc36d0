#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace rsd {

/// Exit codes of the command-line front end.
enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitNumeric = 2, kExitCapExceeded = 3 };

/// Runs the `rsd` command line; args excludes the program name.
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rsd
