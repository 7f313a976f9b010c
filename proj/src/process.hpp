#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace gitrank::detail {

struct ProcessResult {
  int exit_code{-1};
  std::string output;  ///< stdout and stderr, interleaved
};

/// Runs argv[0] from PATH without a shell. Never throws on a non-zero exit;
/// throws Error only when the process cannot be started.
ProcessResult run_process(const std::vector<std::string>& argv,
                          const std::filesystem::path& cwd = {});

}  // namespace gitrank::detail
