#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace optauction::cli {

enum ExitCode : int {
  kOk = 0,
  kVerificationFailure = 1,
  kUsageError = 2,  // bad flags, unreadable or schema-invalid files
  kSizeGuard = 3,
};

// Runs one command line; `args` excludes the program name. Instance and
// auction paths may be "-" for `in`.
int run(const std::vector<std::string>& args, std::istream& in,
        std::ostream& out, std::ostream& err);

}  // namespace optauction::cli
