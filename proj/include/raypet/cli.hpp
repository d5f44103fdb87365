#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace raypet::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 2,  // configuration or usage error
  kIo = 3,
  kDivergence = 4,
};

// Runs one `raypet` invocation. args excludes the program name. Machine
// logs (JSON lines) go to out, human summaries to err.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace raypet::cli
