#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "reasontrans/corpus.hpp"

namespace reasontrans {

/// wall_timeout_s bounds the compile step and, separately, the whole run phase;
/// each case additionally gets at most per_case_timeout_s.
struct ExecLimits {
    double wall_timeout_s = 10.0;
    double per_case_timeout_s = 5.0;
    std::size_t max_output_bytes = 65536;
};

struct ToolchainConfig {
    std::string python_bin = "python3";
    std::string javac_bin = "javac";
    std::string java_bin = "java";
    std::string cxx_bin = "c++";
    std::vector<std::string> cxx_flags = {"-std=c++17", "-O1"};
};

ToolchainConfig toolchain_from_json(const nlohmann::json& j);
ExecLimits limits_from_json(const nlohmann::json& j);

/// Generated files plus the commands that compile and run them. entry_command
/// contains the placeholder "{case}" which run_test_script replaces with the
/// zero-based case index; each case runs as its own process.
struct TestScript {
    Language language = Language::Python;
    std::map<std::string, std::string> files;
    std::vector<std::string> compile_command;  // empty when no compile step
    std::vector<std::string> entry_command;
    std::string workdir;  // fresh temp dir owned by the script
    std::vector<std::string> case_ids;
};

struct SyntaxResult {
    bool ok = false;
    std::string diagnostics;
};

/// Python: byte-compilation; Java/C++: compile-only invocation. Throws
/// EnvironmentError naming the missing tool when the toolchain is absent.
SyntaxResult syntax_check(const std::string& code, Language lang,
                          const ToolchainConfig& toolchain = {}, const ExecLimits& limits = {});

/// Builds the per-language driver that calls suite.entry_function once per case,
/// compares under the suite's equality mode, and prints one verdict line per
/// case: `REASONTRANS CASE <id> PASS|FAIL|ERROR[ detail]`. The candidate code
/// is written verbatim (Java snippets without any class get wrapped in one).
/// A missing entry function surfaces at run time as case errors, not here.
TestScript prepare_test_script(const std::string& code, const TestSuite& suite, Language lang,
                               const ToolchainConfig& toolchain = {});

/// Executes the script inside its workdir and removes the workdir afterwards.
/// Never throws: compile failures, missing toolchains, crashes, and unparseable
/// output all land in the report (compiled=false or per-case error/timeout).
TestReport run_test_script(const TestScript& script, const ExecLimits& limits);

/// prepare + run in one step.
TestReport run_suite(const std::string& code, const TestSuite& suite, Language lang,
                     const ExecLimits& limits = {}, const ToolchainConfig& toolchain = {});

}  // namespace reasontrans
