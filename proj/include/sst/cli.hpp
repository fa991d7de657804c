#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace sst {

enum ExitCode : int {
    kExitOk = 0,
    kExitFailure = 1,
    kExitBadFlags = 2,
    kExitBadInput = 3,
    kExitNoSure = 4,
};

/// Entry point of the `sst` command-line tool. args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sst
