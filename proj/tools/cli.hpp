#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace maxent::cli {

enum ExitCode : int { kOk = 0, kUsageError = 1, kDataError = 2 };

/// Entry point of the command-line tool; argv[0] is the program name.
int run(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err);

} // namespace maxent::cli
