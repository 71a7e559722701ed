#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace oim {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitInput = 2,
  kExitNumerical = 3,
  kExitVerification = 4,
};

/// Runs the oimctl command line. `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace oim
