#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace sdlab {

enum ExitCode : int {
    kExitOk = 0,
    kExitFailure = 1,    // internal error or a failed check
    kExitBadInput = 2,   // invalid input or parameters
    kExitNothingToRun = 3,
};

/// Entry point of the sdlab command line; args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace sdlab
