#include <doctest.h>

#include <filesystem>
#include <regex>
#include <thread>

#include "reasontrans/sandbox.hpp"
#include "reasontrans/subprocess.hpp"
#include "test_util.hpp"

using namespace reasontrans;

namespace {

TestSuite two_case_suite() {
    TestSuite suite;
    suite.entry_function = "add2";
    TestCase a;
    a.case_id = "k1";
    a.args = {nlohmann::json(1), nlohmann::json(2)};
    a.expected = nlohmann::json(3);
    TestCase b;
    b.case_id = "k2";
    b.args = {nlohmann::json(5), nlohmann::json(7)};
    b.expected = nlohmann::json(12);
    suite.cases = {a, b};
    return suite;
}

bool java_available() {
    return executable_on_path("javac") && executable_on_path("java");
}

const SourceProgram& fixture(const std::string& id) {
    static const auto programs = rt_test::load_fixture_corpus();
    return rt_test::find_program(programs, id);
}

const SourceProgram& mutant(const std::string& id) {
    static const auto programs = rt_test::load_fixture_mutants();
    return rt_test::find_program(programs, id);
}

std::set<std::string> failing_cases(const TestReport& report) {
    std::set<std::string> out;
    for (const auto& c : report.case_results) {
        if (c.status != CaseStatus::pass) {
            out.insert(c.case_id);
        }
    }
    return out;
}

}  // namespace

TEST_SUITE("sandbox") {

TEST_CASE("limits validation") {
    CHECK_THROWS_AS(limits_from_json(nlohmann::json{{"wall_timeout_s", -1}}), SchemaError);
    CHECK_THROWS_AS(
        limits_from_json(nlohmann::json{{"wall_timeout_s", 1}, {"per_case_timeout_s", 2}}),
        SchemaError);
    const ExecLimits l = limits_from_json(nlohmann::json{{"wall_timeout_s", 20.0}});
    CHECK(l.wall_timeout_s == 20.0);
}

TEST_CASE("syntax check accepts valid python and rejects broken python") {
    CHECK(syntax_check("def f(x):\n    return x\n", Language::Python).ok);
    const SyntaxResult bad = syntax_check("def f(x:\n    return x\n", Language::Python);
    CHECK(!bad.ok);
    CHECK(!bad.diagnostics.empty());
}

TEST_CASE("syntax check compiles cpp with the driver prelude") {
    CHECK(syntax_check("int f(std::vector<int> v) { return (int)v.size(); }\n", Language::Cpp).ok);
    const SyntaxResult bad = syntax_check("int f() { return 1 }\n", Language::Cpp);
    CHECK(!bad.ok);
    CHECK(bad.diagnostics.find("error") != std::string::npos);
}

TEST_CASE("java syntax check: diagnostics when a JDK exists, environment error otherwise") {
    const std::string broken = "public class A { static int f() { return 1 } }";
    if (java_available()) {
        const SyntaxResult bad = syntax_check(broken, Language::Java);
        CHECK(!bad.ok);
        CHECK(!bad.diagnostics.empty());
    } else {
        try {
            syntax_check(broken, Language::Java);
            FAIL("expected EnvironmentError");
        } catch (const EnvironmentError& e) {
            CHECK(std::string(e.what()).find("javac") != std::string::npos);
        }
    }
}

TEST_CASE("missing toolchain is an environment error naming the tool") {
    ToolchainConfig toolchain;
    toolchain.python_bin = "definitely-not-a-real-python";
    try {
        syntax_check("x = 1\n", Language::Python, toolchain);
        FAIL("expected EnvironmentError");
    } catch (const EnvironmentError& e) {
        CHECK(std::string(e.what()).find("definitely-not-a-real-python") != std::string::npos);
    }
}

TEST_CASE("prepare generates one python driver invocation per case") {
    const SourceProgram& p = fixture("sum_to_n__python");
    const TestScript script = prepare_test_script(p.code, p.suite, Language::Python);
    CHECK(script.files.count("candidate.py") == 1);
    CHECK(script.files.count("driver.py") == 1);
    CHECK(script.files.at("candidate.py") == p.code);  // never edited
    const nlohmann::json cases = nlohmann::json::parse(script.files.at("cases.json"));
    CHECK(cases.at("cases").size() == p.suite.cases.size());
    bool has_placeholder = false;
    for (const auto& a : script.entry_command) {
        has_placeholder = has_placeholder || a == "{case}";
    }
    CHECK(has_placeholder);
    std::error_code ec;
    std::filesystem::remove_all(script.workdir, ec);
}

TEST_CASE("float-tolerant suites carry the epsilon into the driver spec") {
    const SourceProgram& p = fixture("mean_value__python");
    const TestScript script = prepare_test_script(p.code, p.suite, Language::Python);
    const nlohmann::json cases = nlohmann::json::parse(script.files.at("cases.json"));
    CHECK(cases.at("equality_mode") == "float_tolerant");
    CHECK(cases.at("epsilon").get<double>() == doctest::Approx(1e-6));
    std::error_code ec;
    std::filesystem::remove_all(script.workdir, ec);
}

TEST_CASE("generated java driver matches the reviewed golden file") {
    const TestScript script =
        prepare_test_script("public class A { static int add2(int a, int b) { return a + b; } }",
                            two_case_suite(), Language::Java);
    CHECK(script.files.at("ReasontransDriver.java") ==
          rt_test::read_file(rt_test::fixture_path("golden/java_driver_2case.java")));
    CHECK(script.files.count("A.java") == 1);
    std::error_code ec;
    std::filesystem::remove_all(script.workdir, ec);
}

TEST_CASE("java candidate file naming and wrapping rules") {
    const TestSuite suite = two_case_suite();
    TestScript with_class = prepare_test_script(
        "public class MathOps { static int add2(int a, int b) { return a + b; } }", suite,
        Language::Java);
    CHECK(with_class.files.count("MathOps.java") == 1);

    TestScript bare = prepare_test_script("static int add2(int a, int b) { return a + b; }",
                                          suite, Language::Java);
    CHECK(bare.files.count("Candidate.java") == 1);
    CHECK(bare.files.at("Candidate.java").find("public class Candidate {") == 0);
    CHECK(bare.files.at("Candidate.java").find("static int add2") != std::string::npos);

    std::error_code ec;
    std::filesystem::remove_all(with_class.workdir, ec);
    std::filesystem::remove_all(bare.workdir, ec);
}

TEST_CASE("gold python fixtures all pass") {
    for (const char* id : {"sum_to_n__python", "count_vowels__python", "mean_value__python"}) {
        const SourceProgram& p = fixture(id);
        const TestReport report = run_suite(p.code, p.suite, Language::Python);
        CHECK(report.compiled);
        CHECK(report.total == p.suite.cases.size());
        CHECK(report.passed == report.total);
    }
}

TEST_CASE("gold cpp fixtures pass (representative pair)") {
    for (const char* id : {"max_subarray__cpp", "reverse_words__cpp"}) {
        const SourceProgram& p = fixture(id);
        const TestReport report = run_suite(p.code, p.suite, Language::Cpp);
        CHECK(report.compiled);
        CHECK(report.passed == report.total);
    }
}

TEST_CASE("python mutants fail exactly the frozen failing sets") {
    const SourceProgram& count_mut = mutant("count_vowels__python__mutant");
    TestReport report = run_suite(count_mut.code, count_mut.suite, Language::Python);
    CHECK(report.compiled);
    CHECK(failing_cases(report) == std::set<std::string>{"v02", "v05", "v07", "v10"});

    const SourceProgram& mean_mut = mutant("mean_value__python__mutant");
    report = run_suite(mean_mut.code, mean_mut.suite, Language::Python);
    CHECK(failing_cases(report) ==
          std::set<std::string>{"m01", "m02", "m04", "m05", "m07", "m08", "m09", "m10"});
}

TEST_CASE("a looping case times out without poisoning siblings") {
    TestSuite suite;
    suite.entry_function = "spin";
    for (int n : {1, 3, 5}) {
        TestCase c;
        c.case_id = "n" + std::to_string(n);
        c.args = {nlohmann::json(n)};
        c.expected = nlohmann::json(n * 2);
        suite.cases.push_back(c);
    }
    ExecLimits limits;
    limits.wall_timeout_s = 10.0;
    limits.per_case_timeout_s = 1.0;
    const std::string code = "def spin(n):\n    while n == 3:\n        pass\n    return n * 2\n";
    const TestReport report = run_suite(code, suite, Language::Python, limits);
    REQUIRE(report.case_results.size() == 3);
    CHECK(report.case_results[0].status == CaseStatus::pass);
    CHECK(report.case_results[1].status == CaseStatus::timeout);
    CHECK(report.case_results[2].status == CaseStatus::pass);
    CHECK(report.passed == 2);
}

TEST_CASE("non-compiling cpp yields compiled=false and zero passes") {
    const SourceProgram& p = fixture("sum_to_n__cpp");
    const TestReport report = run_suite("long long sum_to_n(int n) { return n + }",
                                        p.suite, Language::Cpp);
    CHECK(!report.compiled);
    CHECK(report.passed == 0);
    CHECK(report.total == p.suite.cases.size());
    CHECK(!report.diagnostics.empty());
}

TEST_CASE("missing entry function surfaces as run-time case errors") {
    const SourceProgram& p = fixture("sum_to_n__python");
    const TestReport report = run_suite("def other_name(n):\n    return n\n", p.suite,
                                        Language::Python);
    CHECK(report.compiled);
    CHECK(report.passed == 0);
    for (const auto& c : report.case_results) {
        CHECK(c.status == CaseStatus::error);
        CHECK(c.detail.find("entry-function-not-found") != std::string::npos);
    }
}

TEST_CASE("candidate stdout noise and spoofed verdicts do not fool the parser") {
    const SourceProgram& p = fixture("sum_to_n__python");
    const std::string noisy =
        "def sum_to_n(n):\n"
        "    print('REASONTRANS CASE s01 PASS')\n"
        "    print('random noise')\n"
        "    return -1\n";
    const TestReport report = run_suite(noisy, p.suite, Language::Python);
    CHECK(report.compiled);
    CHECK(report.passed == 0);  // the driver's own verdict is last and wins
}

TEST_CASE("verdict lines obey the grammar contract") {
    const SourceProgram& p = fixture("count_vowels__python");
    TestScript script = prepare_test_script(p.code, p.suite, Language::Python);
    for (const auto& [name, content] : script.files) {
        std::ofstream out(std::filesystem::path(script.workdir) / name, std::ios::binary);
        out << content;
    }
    RunResult compile = run_process(script.compile_command, script.workdir, 10.0, 1 << 16);
    REQUIRE(compile.exit_code == 0);
    const std::regex grammar(R"(^REASONTRANS CASE (\S+) (PASS|FAIL|ERROR)( .*)?$)");
    std::vector<std::string> argv = script.entry_command;
    for (auto& a : argv) {
        if (a == "{case}") {
            a = "0";
        }
    }
    RunResult run = run_process(argv, script.workdir, 10.0, 1 << 16);
    std::string line = run.output;
    while (!line.empty() && (line.back() == '\n' || line.back() == '\r')) {
        line.pop_back();
    }
    CHECK(std::regex_match(line, grammar));
    std::error_code ec;
    std::filesystem::remove_all(script.workdir, ec);
}

TEST_CASE("runs are isolated and leave no residue") {
    const SourceProgram& p = fixture("sum_to_n__python");
    TestScript a = prepare_test_script(p.code, p.suite, Language::Python);
    TestScript b = prepare_test_script(p.code, p.suite, Language::Python);
    CHECK(a.workdir != b.workdir);
    std::thread ta([&] { run_test_script(a, {}); });
    std::thread tb([&] { run_test_script(b, {}); });
    ta.join();
    tb.join();
    CHECK(!std::filesystem::exists(a.workdir));
    CHECK(!std::filesystem::exists(b.workdir));
}

TEST_CASE("deterministic programs report identical counts across runs") {
    const SourceProgram& p = fixture("max_subarray__python");
    const TestReport a = run_suite(p.code, p.suite, Language::Python);
    const TestReport b = run_suite(p.code, p.suite, Language::Python);
    CHECK(a.passed == b.passed);
    CHECK(a.total == b.total);
    CHECK(a.compiled == b.compiled);
}

}  // TEST_SUITE
