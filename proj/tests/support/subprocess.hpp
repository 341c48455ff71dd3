#pragma once

#include <string>

namespace testutil {

struct CommandResult {
    int exit_code = -1;
    std::string output;  // stdout + stderr interleaved
};

// Run through the shell, capturing combined output.
CommandResult run_command(const std::string& command);

// Path to the fsibench binary under test (env FSIBENCH_CLI).
std::string cli_path();

}  // namespace testutil
