#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace pdm::cli {

enum ExitCode : int {
    ok = 0,
    internal_failure = 1,
    usage_error = 2,
    not_converged = 3,
    io_failure = 4,
};

/// Runs one `pdm` invocation. `args` excludes the program name.
int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

}  // namespace pdm::cli
