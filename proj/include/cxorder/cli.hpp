#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace cxorder::cli {

enum ExitStatus : int {
  kSuccess = 0,         // success, ordered, or the inequality holds
  kViolation = 1,       // not ordered / violation found
  kInputError = 2,      // malformed files or flags
  kInconsistency = 3,   // numerical inconsistency
};

// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cxorder::cli
