#include "reasontrans/agent.hpp"

#include <nlohmann/json.hpp>

namespace reasontrans {

using nlohmann::json;

namespace {

// Best-effort JSON array recovery from a completion: the whole text, then the
// bracketed region between the first '[' and the last ']'.
json extract_json_array(const std::string& text) {
    try {
        json j = json::parse(text);
        if (j.is_array()) {
            return j;
        }
    } catch (const json::parse_error&) {
    }
    const std::size_t open = text.find('[');
    const std::size_t close = text.rfind(']');
    if (open != std::string::npos && close != std::string::npos && close > open) {
        try {
            json j = json::parse(text.substr(open, close - open + 1));
            if (j.is_array()) {
                return j;
            }
        } catch (const json::parse_error&) {
        }
    }
    return json();
}

}  // namespace

json to_json(const AgentTrace& trace) {
    json rounds = json::array();
    for (const auto& r : trace.rounds) {
        rounds.push_back({{"prompt_kind", to_string(r.prompt_kind)},
                          {"completion", r.completion},
                          {"report", to_json(r.report)},
                          {"tokens", r.tokens},
                          {"latency_s", r.latency_s}});
    }
    return json{{"sample_id", trace.sample_id},
                {"rounds", std::move(rounds)},
                {"final_code", trace.final_code},
                {"final_report", to_json(trace.final_report)},
                {"total_tokens", trace.total_tokens},
                {"total_latency_s", trace.total_latency_s},
                {"status", trace.status}};
}

std::vector<TestCase> generate_test_cases(const ChatClient& client, const SourceProgram& program,
                                          std::size_t n, const ExecLimits& limits,
                                          const ToolchainConfig& toolchain,
                                          bool validate_against_gold) {
    if (n == 0) {
        throw Error("generate_test_cases: n must be >= 1");
    }
    const RenderedPrompt prompt =
        render_testgen_prompt(program.code, program.language, program.suite.entry_function, n);
    const GenerationResult gen = client.generate(prompt);

    const json arr = extract_json_array(gen.text);
    std::vector<TestCase> cases;
    if (arr.is_array()) {
        std::size_t index = 0;
        for (const auto& item : arr) {
            ++index;
            if (!item.is_object() || !item.contains("args") || !item.contains("expected") ||
                !item["args"].is_array()) {
                continue;  // malformed entries are dropped
            }
            TestCase c;
            c.case_id = item.value("case_id", "gen-" + std::to_string(index));
            for (const auto& a : item["args"]) {
                c.args.push_back(a);
            }
            c.expected = item["expected"];
            cases.push_back(std::move(c));
        }
    }
    if (cases.empty()) {
        throw Error("generate_test_cases: no parseable test cases in the completion");
    }

    if (validate_against_gold) {
        TestSuite probe;
        probe.entry_function = program.suite.entry_function;
        probe.equality_mode = program.suite.equality_mode;
        probe.epsilon = program.suite.epsilon;
        probe.cases = cases;
        const TestReport gold = run_suite(program.code, probe, program.language, limits, toolchain);
        std::vector<TestCase> surviving;
        for (std::size_t i = 0; i < cases.size(); ++i) {
            if (i < gold.case_results.size() && gold.case_results[i].status == CaseStatus::pass) {
                surviving.push_back(cases[i]);
            }
        }
        cases = std::move(surviving);
        if (cases.empty()) {
            throw Error("generate_test_cases: every generated case contradicts the gold source");
        }
    }
    return cases;
}

AgentTrace run_agent(const SourceProgram& program, Language target, const AgentConfig& config,
                     const ChatClient& client) {
    AgentTrace trace;
    trace.sample_id = program.id;

    std::vector<TestCase> tests;
    try {
        tests = generate_test_cases(client, program, config.n_generated_tests, config.limits,
                                    config.toolchain, config.filter_generated_tests);
    } catch (const std::exception& e) {
        trace.status = std::string("testgen-failed: ") + e.what();
        return trace;
    }

    auto evaluate = [&](const std::string& code) {
        return run_suite(code, program.suite, target, config.limits, config.toolchain);
    };
    auto record_round = [&](TemplateId kind, const GenerationResult& gen, const TestReport& report) {
        trace.rounds.push_back({kind, gen.text, report, gen.generated_tokens, gen.latency_s});
        trace.total_tokens += gen.generated_tokens;
        trace.total_latency_s += gen.latency_s;
        trace.final_report = report;
    };

    GenerationResult gen;
    try {
        gen = client.generate(render_agent_translate_prompt(program.code, program.language, target,
                                                            program.suite.entry_function, tests));
    } catch (const std::exception& e) {
        trace.status = std::string("endpoint-error: ") + e.what();
        return trace;
    }
    trace.final_code = parse_completion(gen.text, target).code;
    record_round(TemplateId::agent_translate, gen, evaluate(trace.final_code));

    std::size_t repairs = 0;
    while (!trace.final_report.all_pass() && repairs < config.max_rounds) {
        GenerationResult repair_gen;
        try {
            repair_gen = client.generate(render_agent_repair_prompt(
                program.code, program.language, target, trace.final_code, trace.final_report));
        } catch (const std::exception& e) {
            trace.status = std::string("endpoint-error: ") + e.what();
            return trace;
        }
        trace.final_code = parse_completion(repair_gen.text, target).code;
        record_round(TemplateId::agent_repair, repair_gen, evaluate(trace.final_code));
        ++repairs;
    }
    return trace;
}

}  // namespace reasontrans
