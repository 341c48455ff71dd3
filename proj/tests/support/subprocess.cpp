#include "support/subprocess.hpp"

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <stdexcept>

namespace testutil {

CommandResult run_command(const std::string& command) {
    const std::string full = command + " 2>&1";
    FILE* pipe = popen(full.c_str(), "r");
    if (!pipe)
        throw std::runtime_error("popen failed for: " + command);

    CommandResult result;
    std::array<char, 4096> buf;
    std::size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0)
        result.output.append(buf.data(), n);

    const int status = pclose(pipe);
    if (status == -1)
        throw std::runtime_error("pclose failed for: " + command);
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return result;
}

std::string cli_path() {
    const char* path = std::getenv("FSIBENCH_CLI");
    if (!path || !*path)
        throw std::runtime_error("FSIBENCH_CLI is not set; run through ctest");
    return path;
}

}  // namespace testutil
