#include "reasontrans/sandbox.hpp"

#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <optional>

#include <nlohmann/json.hpp>

#include "driver_gen.hpp"
#include "reasontrans/subprocess.hpp"

namespace reasontrans {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kVerdictPrefix = "REASONTRANS CASE ";
constexpr std::size_t kDiagnosticsCap = 4000;

std::string truncated(const std::string& text, std::size_t cap = kDiagnosticsCap) {
    if (text.size() <= cap) {
        return text;
    }
    return text.substr(0, cap) + "\n...[truncated]";
}

std::string make_temp_dir() {
    std::string pattern = (fs::temp_directory_path() / "reasontrans-XXXXXX").string();
    std::vector<char> buf(pattern.begin(), pattern.end());
    buf.push_back('\0');
    if (::mkdtemp(buf.data()) == nullptr) {
        throw Error("mkdtemp failed for " + pattern);
    }
    return std::string(buf.data());
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::trunc | std::ios::binary);
    if (!out) {
        throw Error("cannot write " + path.string());
    }
    out << content;
}

std::vector<std::string> with_case_index(const std::vector<std::string>& argv, std::size_t index) {
    std::vector<std::string> out;
    out.reserve(argv.size());
    const std::string idx = std::to_string(index);
    for (const auto& a : argv) {
        std::string item = a;
        std::size_t at = item.find("{case}");
        if (at != std::string::npos) {
            item.replace(at, 6, idx);
        }
        out.push_back(std::move(item));
    }
    return out;
}

// Last well-formed verdict line wins; candidate output before it is ignored.
std::optional<std::pair<CaseStatus, std::string>> parse_verdict(const std::string& output) {
    std::optional<std::pair<CaseStatus, std::string>> verdict;
    std::size_t start = 0;
    while (start < output.size()) {
        std::size_t end = output.find('\n', start);
        if (end == std::string::npos) {
            end = output.size();
        }
        const std::string line = output.substr(start, end - start);
        start = end + 1;
        if (line.rfind(kVerdictPrefix, 0) != 0) {
            continue;
        }
        std::string rest = line.substr(std::strlen(kVerdictPrefix));
        const std::size_t id_end = rest.find(' ');
        if (id_end == std::string::npos) {
            continue;
        }
        rest = rest.substr(id_end + 1);
        const std::size_t status_end = rest.find(' ');
        const std::string status_word = rest.substr(0, status_end);
        std::string detail = status_end == std::string::npos ? "" : rest.substr(status_end + 1);
        if (status_word == "PASS") {
            verdict = {CaseStatus::pass, std::move(detail)};
        } else if (status_word == "FAIL") {
            verdict = {CaseStatus::fail, std::move(detail)};
        } else if (status_word == "ERROR") {
            verdict = {CaseStatus::error, std::move(detail)};
        }
    }
    return verdict;
}

const std::string& tool_for(const ToolchainConfig& toolchain, Language lang, bool compile_step) {
    switch (lang) {
    case Language::Python: return toolchain.python_bin;
    case Language::Java: return compile_step ? toolchain.javac_bin : toolchain.java_bin;
    case Language::Cpp: return toolchain.cxx_bin;
    }
    return toolchain.python_bin;
}

std::string cpp_syntax_unit(const std::string& code) {
    // Same prelude the run driver uses, so the syntax gate and the functional
    // gate accept the same set of candidates. No main required (-fsyntax-only).
    TestSuite empty;
    empty.entry_function = "rt_unused";
    const std::string driver = driver_gen::cpp_driver(code, empty);
    const std::string marker = "// --- generated cases ---";
    return driver.substr(0, driver.find(marker));
}

}  // namespace

ToolchainConfig toolchain_from_json(const json& j) {
    ToolchainConfig t;
    t.python_bin = j.value("python_bin", t.python_bin);
    t.javac_bin = j.value("javac_bin", t.javac_bin);
    t.java_bin = j.value("java_bin", t.java_bin);
    t.cxx_bin = j.value("cxx_bin", t.cxx_bin);
    if (j.contains("cxx_flags")) {
        t.cxx_flags.clear();
        for (const auto& f : j["cxx_flags"]) {
            t.cxx_flags.push_back(f.get<std::string>());
        }
    }
    return t;
}

ExecLimits limits_from_json(const json& j) {
    ExecLimits l;
    l.wall_timeout_s = j.value("wall_timeout_s", l.wall_timeout_s);
    l.per_case_timeout_s = j.value("per_case_timeout_s", l.per_case_timeout_s);
    l.max_output_bytes = j.value("max_output_bytes", l.max_output_bytes);
    if (l.wall_timeout_s <= 0 || l.per_case_timeout_s <= 0) {
        throw SchemaError("limits: timeouts must be positive");
    }
    if (l.per_case_timeout_s > l.wall_timeout_s) {
        throw SchemaError("limits: per_case_timeout_s must not exceed wall_timeout_s");
    }
    if (l.max_output_bytes == 0) {
        throw SchemaError("limits: max_output_bytes must be positive");
    }
    return l;
}

SyntaxResult syntax_check(const std::string& code, Language lang, const ToolchainConfig& toolchain,
                          const ExecLimits& limits) {
    const std::string& tool = tool_for(toolchain, lang, /*compile_step=*/true);
    if (!executable_on_path(tool)) {
        throw EnvironmentError("toolchain not found: " + tool);
    }
    const std::string dir = make_temp_dir();
    struct Cleanup {
        std::string dir;
        ~Cleanup() {
            std::error_code ec;
            fs::remove_all(dir, ec);
        }
    } cleanup{dir};

    std::vector<std::string> argv;
    switch (lang) {
    case Language::Python:
        write_file(fs::path(dir) / "candidate.py", code);
        argv = {toolchain.python_bin, "-m", "py_compile", "candidate.py"};
        break;
    case Language::Java: {
        auto candidate = driver_gen::java_candidate_file(code);
        write_file(fs::path(dir) / candidate.filename, candidate.content);
        argv = {toolchain.javac_bin, "-encoding", "UTF-8", "-d", ".", candidate.filename};
        break;
    }
    case Language::Cpp:
        write_file(fs::path(dir) / "candidate_unit.cpp", cpp_syntax_unit(code));
        argv = {toolchain.cxx_bin};
        for (const auto& f : toolchain.cxx_flags) {
            argv.push_back(f);
        }
        argv.push_back("-fsyntax-only");
        argv.push_back("candidate_unit.cpp");
        break;
    }

    RunResult run = run_process(argv, dir, limits.wall_timeout_s, limits.max_output_bytes);
    if (run.spawn_failed) {
        throw EnvironmentError("toolchain not found: " + tool);
    }
    SyntaxResult result;
    result.ok = !run.timed_out && run.exit_code == 0;
    if (!result.ok) {
        result.diagnostics = run.timed_out ? "syntax check timed out"
                                           : truncated(run.error_output + run.output);
    }
    return result;
}

TestScript prepare_test_script(const std::string& code, const TestSuite& suite, Language lang,
                               const ToolchainConfig& toolchain) {
    if (code.empty()) {
        throw Error("prepare_test_script: code must be non-empty");
    }
    if (suite.cases.empty()) {
        throw Error("prepare_test_script: suite must be non-empty");
    }
    TestScript script;
    script.language = lang;
    script.workdir = make_temp_dir();
    for (const auto& c : suite.cases) {
        script.case_ids.push_back(c.case_id);
    }
    switch (lang) {
    case Language::Python:
        script.files["candidate.py"] = code;
        script.files["cases.json"] = driver_gen::python_cases_json(suite);
        script.files["driver.py"] = driver_gen::python_driver();
        script.compile_command = {toolchain.python_bin, "-m", "py_compile", "candidate.py"};
        script.entry_command = {toolchain.python_bin, "driver.py", "{case}"};
        break;
    case Language::Java: {
        auto candidate = driver_gen::java_candidate_file(code);
        script.files[candidate.filename] = candidate.content;
        script.files["ReasontransDriver.java"] = driver_gen::java_driver(suite);
        script.compile_command = {toolchain.javac_bin, "-encoding", "UTF-8", "-d", ".",
                                  "ReasontransDriver.java", candidate.filename};
        script.entry_command = {toolchain.java_bin, "-cp", ".", "ReasontransDriver", "{case}"};
        break;
    }
    case Language::Cpp:
        script.files["driver.cpp"] = driver_gen::cpp_driver(code, suite);
        script.compile_command = {toolchain.cxx_bin};
        for (const auto& f : toolchain.cxx_flags) {
            script.compile_command.push_back(f);
        }
        script.compile_command.push_back("driver.cpp");
        script.compile_command.push_back("-o");
        script.compile_command.push_back("prog");
        script.entry_command = {"./prog", "{case}"};
        break;
    }
    return script;
}

TestReport run_test_script(const TestScript& script, const ExecLimits& limits) {
    TestReport report;
    report.total = script.case_ids.size();

    struct Cleanup {
        std::string dir;
        ~Cleanup() {
            if (!dir.empty()) {
                std::error_code ec;
                fs::remove_all(dir, ec);
            }
        }
    } cleanup{script.workdir};

    try {
        std::error_code ec;
        fs::create_directories(script.workdir, ec);
        for (const auto& [name, content] : script.files) {
            write_file(fs::path(script.workdir) / name, content);
        }
    } catch (const std::exception& e) {
        report.compiled = false;
        report.diagnostics = std::string("harness failure: ") + e.what();
        return report;
    }

    const double per_case = std::min(limits.per_case_timeout_s, limits.wall_timeout_s);

    if (!script.compile_command.empty()) {
        const std::string& tool = script.compile_command.front();
        if (tool.find('/') == std::string::npos && !executable_on_path(tool)) {
            report.compiled = false;
            report.diagnostics = "toolchain not found: " + tool;
            return report;
        }
        RunResult compile = run_process(script.compile_command, script.workdir,
                                        limits.wall_timeout_s, limits.max_output_bytes);
        if (compile.spawn_failed) {
            report.compiled = false;
            report.diagnostics = "toolchain not found: " + tool;
            return report;
        }
        if (compile.timed_out || compile.exit_code != 0) {
            report.compiled = false;
            report.diagnostics = compile.timed_out
                                     ? "compile step timed out"
                                     : truncated(compile.error_output + compile.output);
            return report;
        }
        report.diagnostics = truncated(compile.error_output);  // warnings, if any
    }
    report.compiled = true;

    double run_budget = limits.wall_timeout_s;
    for (std::size_t i = 0; i < script.case_ids.size(); ++i) {
        CaseResult result;
        result.case_id = script.case_ids[i];
        if (run_budget <= 0.0) {
            result.status = CaseStatus::timeout;
            result.detail = "wall-budget-exhausted";
            report.case_results.push_back(std::move(result));
            continue;
        }
        const double timeout = std::min(per_case, run_budget);
        RunResult run = run_process(with_case_index(script.entry_command, i), script.workdir,
                                    timeout, limits.max_output_bytes);
        run_budget -= run.duration_s;
        if (run.timed_out) {
            result.status = CaseStatus::timeout;
            result.detail = "exceeded " + std::to_string(timeout) + "s";
        } else if (auto verdict = parse_verdict(run.output)) {
            result.status = verdict->first;
            result.detail = std::move(verdict->second);
        } else {
            result.status = CaseStatus::error;
            result.detail = "no-verdict exit-code " + std::to_string(run.exit_code);
            if (!run.error_output.empty()) {
                result.detail += ": " + truncated(run.error_output, 300);
            }
        }
        if (result.status == CaseStatus::pass) {
            ++report.passed;
        }
        report.case_results.push_back(std::move(result));
    }
    return report;
}

TestReport run_suite(const std::string& code, const TestSuite& suite, Language lang,
                     const ExecLimits& limits, const ToolchainConfig& toolchain) {
    TestScript script;
    try {
        script = prepare_test_script(code, suite, lang, toolchain);
    } catch (const std::exception& e) {
        TestReport report;
        report.total = suite.cases.size();
        report.compiled = false;
        report.diagnostics = std::string("prepare failure: ") + e.what();
        return report;
    }
    return run_test_script(script, limits);
}

}  // namespace reasontrans
