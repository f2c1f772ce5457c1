#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace reasontrans {

struct RunResult {
    int exit_code = -1;      // process exit status, or 128+signal when killed
    bool timed_out = false;
    bool spawn_failed = false;  // executable missing or not runnable
    std::string output;         // stdout
    std::string error_output;   // stderr
    bool output_truncated = false;
    double duration_s = 0.0;
};

/// Runs argv in workdir with a hard wall timeout, capturing stdout/stderr up to
/// max_output_bytes each. The child runs in its own process group; on timeout
/// the whole group is killed. Never throws: every failure mode lands in the
/// result.
RunResult run_process(const std::vector<std::string>& argv, const std::string& workdir,
                      double timeout_s, std::size_t max_output_bytes);

/// True if `name` resolves to an executable (absolute path or via PATH).
bool executable_on_path(const std::string& name);

}  // namespace reasontrans
