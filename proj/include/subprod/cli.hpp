#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace subprod::cli {

inline constexpr const char* kVersion = "0.1.0";

enum ExitCode : int {
  kSuccess = 0,
  kInternalError = 1,
  kUsage = 2,
  kBudgetExceeded = 3,
  kViolation = 4,
};

/// Runs one subcommand. `args` excludes the program name. Reports go to `out`,
/// diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace subprod::cli
