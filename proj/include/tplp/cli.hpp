#ifndef TPLP_CLI_HPP
#define TPLP_CLI_HPP

#include <string>
#include <vector>

namespace tplp::cli {

/// 0 success, 1 semantic negative (inconsistent, not entailed, failed
/// verification), 2 usage or input error, 3 resource limit.
enum ExitCode : int { kOk = 0, kNegative = 1, kUsage = 2, kResource = 3 };

struct CommandResult {
  int exit_code = kOk;
  std::string payload;      // stdout
  std::string diagnostics;  // stderr
};

/// Runs one command; args excludes the program name.
CommandResult run(const std::vector<std::string>& args);

}  // namespace tplp::cli

#endif
