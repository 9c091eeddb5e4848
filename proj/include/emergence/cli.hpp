#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace emergence::cli {

enum ExitCode : int {
  kOk = 0,
  kFailure = 1,
  kVerificationFailed = 2,
  kResourceCap = 3,
  kUsage = 64,
  kMalformedInput = 65,
};

// args excludes the program name. Artifacts go to the --out directory; a
// short human summary goes to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace emergence::cli
