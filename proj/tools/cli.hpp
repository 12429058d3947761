#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace tcpp::cli {

enum ExitCode : int {
  kOk = 0,
  kRuntimeFailure = 1,
  kInputError = 2,
  kCapabilityError = 3,
  kVerificationFailure = 4,
};

/// Runs `tcpp <command> [flags]`; args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace tcpp::cli
