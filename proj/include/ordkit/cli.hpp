#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ordkit::cli {

constexpr int kSchemaVersion = 1;

enum ExitCode : int {
  kOk = 0,
  kNegative = 1,  // a mathematical negative, e.g. an --expect that did not hold
  kUsage = 2,
  kResource = 3,
};

/// Runs the ordkit command line. args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ordkit::cli
