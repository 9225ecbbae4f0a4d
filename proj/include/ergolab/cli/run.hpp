#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ergolab::cli {

enum ExitCode : int {
    kExitOk = 0,
    kExitViolation = 1,  // a hard invariant (exact inequality, bound) failed
    kExitUsage = 2,      // bad flags or config
    kExitResource = 3,   // budget exceeded
    kExitIo = 4,
};

/// Runs the experiment CLI in-process. args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ergolab::cli
