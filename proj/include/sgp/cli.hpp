#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace sgp {

enum ExitCode : int {
  kExitOk = 0,
  kExitData = 1,
  kExitUsage = 2,
  kExitIo = 3,
};

// Entry point of the `sgp` tool; args excludes the program name. Errors go to
// `err` as one line each: "error: code=<usage|data|io> [line=N] [frame=ID] message".
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sgp
