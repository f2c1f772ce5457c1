#pragma once

#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "reasontrans/corpus.hpp"
#include "reasontrans/model_gateway.hpp"
#include "reasontrans/prompt_kit.hpp"
#include "reasontrans/sandbox.hpp"

namespace reasontrans {

struct AgentConfig {
    std::size_t n_generated_tests = 3;
    std::size_t max_rounds = 2;  // repair rounds; the initial translation is round 0
    ExecLimits limits;
    EndpointConfig endpoint;
    ToolchainConfig toolchain;
    bool filter_generated_tests = true;  // validate generated cases against the gold source
};

struct AgentRound {
    TemplateId prompt_kind = TemplateId::agent_translate;
    std::string completion;
    TestReport report;
    std::size_t tokens = 0;
    double latency_s = 0.0;
};

struct AgentTrace {
    std::string sample_id;
    std::vector<AgentRound> rounds;  // at most max_rounds + 1 entries
    std::string final_code;
    TestReport final_report;  // the last round's report
    std::size_t total_tokens = 0;
    double total_latency_s = 0.0;
    std::string status = "ok";  // or "testgen-failed: ..." / "endpoint-error: ..."
};

nlohmann::json to_json(const AgentTrace& trace);

/// Prompts the endpoint for n structured test cases, drops entries that fail to
/// parse, and (unless disabled) executes the gold source against the survivors,
/// dropping any case the gold code does not pass. Throws when nothing survives.
std::vector<TestCase> generate_test_cases(const ChatClient& client, const SourceProgram& program,
                                          std::size_t n, const ExecLimits& limits,
                                          const ToolchainConfig& toolchain = {},
                                          bool validate_against_gold = true);

/// Round 0 translates with the generated tests embedded in the prompt and is
/// scored against the FULL ground-truth suite; while failures remain and fewer
/// than max_rounds repairs have run, a repair prompt with diagnostics drives
/// the next attempt. Endpoint failures end the trace at the last completed
/// round with the cause in `status`.
AgentTrace run_agent(const SourceProgram& program, Language target, const AgentConfig& config,
                     const ChatClient& client);

}  // namespace reasontrans
