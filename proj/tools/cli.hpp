// SPDX-License-Identifier: MIT
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace tucker::cli {

enum ExitCode : int {
    kSuccess = 0,
    kUsage = 1,
    kIo = 2,
    kNumeric = 3,
};

/// Runs one CLI invocation; `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace tucker::cli
