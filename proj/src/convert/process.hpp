#pragma once

#include <chrono>
#include <string>
#include <string_view>
#include <vector>

namespace mathtools::convert::detail {

struct ProcessOutcome {
    enum class Status { exited, signaled, timed_out, not_found };

    Status status = Status::exited;
    int exit_code = 0;
    std::string out;
    std::string err;
};

/// Runs argv[0] (PATH lookup) with `input` on stdin, capturing stdout and
/// stderr. The process is killed once `timeout` elapses.
ProcessOutcome run_process(const std::vector<std::string>& argv, std::string_view input,
                           std::chrono::milliseconds timeout);

/// Whitespace-separated words; '...' and "..." group, no escapes.
std::vector<std::string> split_command(std::string_view command);

}  // namespace mathtools::convert::detail
