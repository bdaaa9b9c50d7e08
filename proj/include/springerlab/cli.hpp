#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace springerlab {

// Exit codes of the command-line surface.
enum ExitCode : int {
    kExitPass = 0,
    kExitUsage = 1,
    kExitPrecision = 2,
    kExitDomain = 3,
    kExitVerdictFail = 4,
};

// Runs one command; args excludes the program name. Reports go to `out`,
// diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace springerlab
