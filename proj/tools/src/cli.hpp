#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace capquad::cli {

enum ExitCode : int {
  kOk = 0,
  kInvalidInput = 1,
  kInfeasible = 2,
  kAssertionFailed = 3,
};

/// Runs the command line `args` (without the program name). Files named by
/// --out, --report and --csv are written directly; everything else goes to
/// `out` and `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace capquad::cli
