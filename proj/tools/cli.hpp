#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace semical::cli {

enum ExitCode : int {
  kOk = 0,
  kVerificationFailed = 1,
  kInputError = 2,
  kBaseGapViolation = 3,
};

/// Runs one command line (args excludes the program name). Reports go to
/// out unless -o is given; diagnostics go to err.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace semical::cli
