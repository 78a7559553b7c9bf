#pragma once

#include <iosfwd>

namespace edgeflight::cli {

enum ExitCode : int {
  kOk = 0,
  kFailure = 1,
  kConfigError = 2,
  kStuck = 3,
  kScenarioError = 4,
};

/// Entry point shared by the executable and the tests.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace edgeflight::cli
