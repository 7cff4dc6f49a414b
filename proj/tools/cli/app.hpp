#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace aerodet::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kInputFormat = 2, kIo = 3 };

// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace aerodet::cli
