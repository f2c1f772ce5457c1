#include <doctest.h>

#include <nlohmann/json.hpp>

#include "reasontrans/agent.hpp"
#include "test_util.hpp"

using namespace reasontrans;
using nlohmann::json;
using rt_test::TempDir;

namespace {

const SourceProgram& cpp_sum() {
    static const auto programs = rt_test::load_fixture_corpus();
    return rt_test::find_program(programs, "sum_to_n__cpp");
}

std::string python_sum_gold() {
    static const auto programs = rt_test::load_fixture_corpus();
    return rt_test::find_program(programs, "sum_to_n__python").code;
}

const char* kWrongPython = "def sum_to_n(n):\n    return 0\n";

const char* kGoodCases =
    "```json\n[{\"args\": [2], \"expected\": 3}, {\"args\": [4], \"expected\": 10}, "
    "{\"args\": [5], \"expected\": 15}]\n```";

// Matchers keyed to phrases unique to each prompt kind.
constexpr const char* kTestgenMatch = "Reply with a JSON array";
constexpr const char* kTranslateMatch = "must pass the following test cases";
constexpr const char* kRepairMatch = "Execution feedback:";

std::string write_mock(const TempDir& dir, const std::vector<json>& entries) {
    std::string lines;
    for (const auto& e : entries) {
        lines += e.dump() + "\n";
    }
    return dir.file("mock.jsonl", lines);
}

AgentConfig agent_config(const std::string& mock_path) {
    AgentConfig config;
    config.endpoint.base_url = "mock://" + mock_path;
    config.limits.wall_timeout_s = 20.0;
    return config;
}

}  // namespace

TEST_SUITE("agent") {

TEST_CASE("generate_test_cases parses and keeps gold-consistent cases") {
    TempDir dir;
    const std::string mock = write_mock(dir, {json{{"match", "*"}, {"response", kGoodCases}}});
    ChatClient client(agent_config(mock).endpoint);
    const auto cases = generate_test_cases(client, cpp_sum(), 3, {});
    REQUIRE(cases.size() == 3);
    CHECK(cases[0].case_id == "gen-1");
    CHECK(cases[1].args[0] == json(4));
    CHECK(cases[1].expected == json(10));
}

TEST_CASE("cases contradicting the gold source are dropped") {
    TempDir dir;
    const std::string contradicting =
        "```json\n[{\"args\": [2], \"expected\": 3}, {\"args\": [3], \"expected\": 99}, "
        "{\"args\": [5], \"expected\": 15}]\n```";
    const std::string mock = write_mock(dir, {json{{"match", "*"}, {"response", contradicting}}});
    ChatClient client(agent_config(mock).endpoint);
    const auto cases = generate_test_cases(client, cpp_sum(), 3, {});
    REQUIRE(cases.size() == 2);
    CHECK(cases[0].args[0] == json(2));
    CHECK(cases[1].args[0] == json(5));

    // bypassing the gold filter keeps all three
    const auto unfiltered = generate_test_cases(client, cpp_sum(), 3, {}, {}, false);
    CHECK(unfiltered.size() == 3);
}

TEST_CASE("prose output means zero usable cases") {
    TempDir dir;
    const std::string mock =
        write_mock(dir, {json{{"match", "*"}, {"response", "tests are hard, sorry"}}});
    ChatClient client(agent_config(mock).endpoint);
    CHECK_THROWS_AS(generate_test_cases(client, cpp_sum(), 3, {}), Error);
}

TEST_CASE("correct round 0 exits early with one round") {
    TempDir dir;
    const std::string mock = write_mock(
        dir, {json{{"match", kTestgenMatch}, {"response", kGoodCases}, {"tokens", 30}},
              json{{"match", kTranslateMatch},
                   {"response", rt_test::fenced(python_sum_gold(), "python")},
                   {"tokens", 120}}});
    const AgentConfig config = agent_config(mock);
    ChatClient client(config.endpoint);
    const AgentTrace trace = run_agent(cpp_sum(), Language::Python, config, client);
    CHECK(trace.status == "ok");
    REQUIRE(trace.rounds.size() == 1);
    CHECK(trace.rounds[0].prompt_kind == TemplateId::agent_translate);
    CHECK(trace.final_report.all_pass());
    CHECK(trace.total_tokens == 120);
}

TEST_CASE("wrong then right converges in the first repair round") {
    TempDir dir;
    const std::string mock = write_mock(
        dir,
        {json{{"match", kTestgenMatch}, {"response", kGoodCases}, {"tokens", 30}},
         json{{"match", kTranslateMatch},
              {"response", rt_test::fenced(kWrongPython, "python")},
              {"tokens", 100},
              {"max_uses", 1}},
         json{{"match", kRepairMatch},
              {"response", rt_test::fenced(python_sum_gold(), "python")},
              {"tokens", 140}}});
    const AgentConfig config = agent_config(mock);
    ChatClient client(config.endpoint);
    const AgentTrace trace = run_agent(cpp_sum(), Language::Python, config, client);
    CHECK(trace.status == "ok");
    REQUIRE(trace.rounds.size() == 2);
    CHECK(trace.rounds[0].prompt_kind == TemplateId::agent_translate);
    CHECK(!trace.rounds[0].report.all_pass());
    CHECK(trace.rounds[1].prompt_kind == TemplateId::agent_repair);
    CHECK(trace.final_report.all_pass());
    CHECK(trace.total_tokens == 240);
}

TEST_CASE("always-wrong mock halts after max_rounds repairs") {
    TempDir dir;
    const std::string mock = write_mock(
        dir, {json{{"match", kTestgenMatch}, {"response", kGoodCases}, {"tokens", 10}},
              json{{"match", kTranslateMatch},
                   {"response", rt_test::fenced(kWrongPython, "python")},
                   {"tokens", 50}},
              json{{"match", kRepairMatch},
                   {"response", rt_test::fenced(kWrongPython, "python")},
                   {"tokens", 60}}});
    AgentConfig config = agent_config(mock);
    config.max_rounds = 2;
    ChatClient client(config.endpoint);
    const AgentTrace trace = run_agent(cpp_sum(), Language::Python, config, client);
    REQUIRE(trace.rounds.size() == 3);  // initial translation + two repairs
    CHECK(!trace.final_report.all_pass());
    CHECK(trace.status == "ok");

    // bookkeeping: totals equal the per-round sums exactly
    std::size_t tokens = 0;
    double latency = 0.0;
    for (const auto& r : trace.rounds) {
        tokens += r.tokens;
        latency += r.latency_s;
    }
    CHECK(trace.total_tokens == tokens);
    CHECK(trace.total_latency_s == doctest::Approx(latency).epsilon(1e-12));
    CHECK(trace.total_tokens == 170);
}

TEST_CASE("endpoint failure mid-loop ends the trace with a status") {
    TempDir dir;
    const std::string mock = write_mock(
        dir, {json{{"match", kTestgenMatch}, {"response", kGoodCases}},
              json{{"match", kTranslateMatch},
                   {"response", rt_test::fenced(kWrongPython, "python")}},
              json{{"match", kRepairMatch}, {"error", "transport"}}});
    AgentConfig config = agent_config(mock);
    config.endpoint.retries = 0;
    ChatClient client(config.endpoint);
    const AgentTrace trace = run_agent(cpp_sum(), Language::Python, config, client);
    REQUIRE(trace.rounds.size() == 1);
    CHECK(trace.status.find("endpoint-error") == 0);
}

TEST_CASE("testgen failure is recorded without any rounds") {
    TempDir dir;
    const std::string mock =
        write_mock(dir, {json{{"match", "*"}, {"response", "no json here"}}});
    const AgentConfig config = agent_config(mock);
    ChatClient client(config.endpoint);
    const AgentTrace trace = run_agent(cpp_sum(), Language::Python, config, client);
    CHECK(trace.rounds.empty());
    CHECK(trace.status.find("testgen-failed") == 0);
}

TEST_CASE("trace serialization carries rounds and totals") {
    AgentTrace trace;
    trace.sample_id = "s";
    trace.rounds.push_back({TemplateId::agent_translate, "text", TestReport{}, 10, 0.5});
    trace.total_tokens = 10;
    trace.total_latency_s = 0.5;
    const json j = to_json(trace);
    CHECK(j["rounds"].size() == 1);
    CHECK(j["rounds"][0]["prompt_kind"] == "agent_translate");
    CHECK(j["total_tokens"] == 10);
}

}  // TEST_SUITE
