#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace symcone::cli {

enum ExitCode : int {
  kOk = 0,
  kInputError = 1,
  kIterationLimit = 2,  // solve
  kCheckFailed = 2,     // verify, identify
  kNumericalFailure = 3,
};

/// Runs one invocation; `args` excludes the program name. Results go to
/// `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace symcone::cli
