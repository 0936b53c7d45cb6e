#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace blockcoh::cli {

enum ExitCode : int {
  kOk = 0,
  kSuiteFailures = 1,
  kInvalidInput = 2,
  kDimensionMismatch = 3,
};

/// Environment variable overriding the default master seed of `gen` and `suite`.
inline constexpr const char* kSeedEnv = "BLOCKCOH_SEED";

/// args excludes the program name. JSON goes to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace blockcoh::cli
