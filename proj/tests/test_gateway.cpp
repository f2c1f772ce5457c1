#include <doctest.h>

#include <atomic>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "reasontrans/model_gateway.hpp"
#include "test_util.hpp"

using namespace reasontrans;
using nlohmann::json;
using rt_test::TempDir;

TEST_SUITE("model_gateway") {

TEST_CASE("count_tokens definitions") {
    CHECK(count_tokens("a b c", TokenizerSpec::whitespace) == 3);
    CHECK(count_tokens("", TokenizerSpec::whitespace) == 0);
    CHECK(count_tokens("  leading   and\ttabs\nnewlines ", TokenizerSpec::whitespace) == 4);
    CHECK(count_tokens("12345678", TokenizerSpec::byte_len_div4) == 2);
    CHECK(count_tokens("", TokenizerSpec::byte_len_div4) == 0);
    CHECK_THROWS_AS(count_tokens("abc", TokenizerSpec::provider_reported), Error);
}

TEST_CASE("endpoint config validation") {
    CHECK_THROWS_AS(endpoint_config_from_json(json{{"retries", 11}}), SchemaError);
    CHECK_THROWS_AS(endpoint_config_from_json(json{{"timeout_s", 0}}), SchemaError);
    CHECK_THROWS_AS(endpoint_config_from_json(json{{"temperature", -1.0}}), SchemaError);
    const EndpointConfig c = endpoint_config_from_json(json{{"base_url", "mock://x"},
                                                            {"retries", 3}});
    CHECK(c.base_url == "mock://x");
    CHECK(c.retries == 3);
}

TEST_CASE("mock backend returns the scripted response with its delay") {
    TempDir dir;
    const std::string script = dir.file(
        "mock.jsonl", json{{"match", "*"}, {"response", "ok"}, {"delay_ms", 50}}.dump() + "\n");
    EndpointConfig config;
    config.base_url = "mock://" + script;
    const GenerationResult result = ChatClient(config).generate(std::string("hello"));
    CHECK(result.text == "ok");
    CHECK(result.latency_s >= 0.05);
    CHECK(result.finish_reason == FinishReason::stop);
    CHECK(result.attempts == 1);
}

TEST_CASE("mock tokens field is provider-reported; absent means estimated") {
    TempDir dir;
    const std::string script = dir.file(
        "mock.jsonl",
        json{{"match", "with-tokens"}, {"response", "a b c d"}, {"tokens", 99}}.dump() + "\n" +
            json{{"match", "*"}, {"response", "a b c d"}}.dump() + "\n");
    EndpointConfig config;
    config.base_url = "mock://" + script;
    ChatClient client(config);
    const GenerationResult reported = client.generate(std::string("with-tokens please"));
    CHECK(reported.generated_tokens == 99);
    CHECK(!reported.tokens_estimated);
    const GenerationResult estimated = client.generate(std::string("other"));
    CHECK(estimated.generated_tokens == 4);  // whitespace fallback
    CHECK(estimated.tokens_estimated);
}

TEST_CASE("transport failures retry with attempt accounting") {
    TempDir dir;
    const std::string script = dir.file(
        "mock.jsonl",
        json{{"match", "*"}, {"error", "transport"}, {"max_uses", 2}}.dump() + "\n" +
            json{{"match", "*"}, {"response", "recovered"}}.dump() + "\n");
    EndpointConfig config;
    config.base_url = "mock://" + script;
    config.retries = 3;
    const GenerationResult result = ChatClient(config).generate(std::string("go"));
    CHECK(result.text == "recovered");
    CHECK(result.attempts == 3);  // two drops, then success
}

TEST_CASE("retry exhaustion raises a transport error") {
    TempDir dir;
    const std::string script =
        dir.file("mock.jsonl", json{{"match", "*"}, {"error", "transport"}}.dump() + "\n");
    EndpointConfig config;
    config.base_url = "mock://" + script;
    config.retries = 1;
    CHECK_THROWS_AS(ChatClient(config).generate(std::string("go")), TransportError);
}

TEST_CASE("http 401 from the mock is a non-retryable auth error") {
    TempDir dir;
    const std::string script = dir.file(
        "mock.jsonl",
        json{{"match", "*"}, {"error", {{"status", 401}, {"body", "bad key"}}}}.dump() + "\n");
    EndpointConfig config;
    config.base_url = "mock://" + script;
    try {
        ChatClient(config).generate(std::string("go"));
        FAIL("expected ApiError");
    } catch (const ApiError& e) {
        CHECK(e.status() == 401);
        CHECK(std::string(e.what()).find("401") != std::string::npos);
    }
}

TEST_CASE("sequenced mock entries exhaust in order") {
    TempDir dir;
    const std::string script = dir.file(
        "mock.jsonl",
        json{{"match", "*"}, {"response", "first"}, {"max_uses", 1}}.dump() + "\n" +
            json{{"match", "*"}, {"response", "second"}}.dump() + "\n");
    EndpointConfig config;
    config.base_url = "mock://" + script;
    ChatClient client(config);
    CHECK(client.generate(std::string("a")).text == "first");
    CHECK(client.generate(std::string("b")).text == "second");
    CHECK(client.generate(std::string("c")).text == "second");
}

TEST_CASE("http backend parses chat completions and usage") {
    httplib::Server server;
    std::atomic<int> hits{0};
    server.Post("/v1/chat/completions", [&](const httplib::Request& req, httplib::Response& res) {
        const int n = ++hits;
        const json body = json::parse(req.body);
        CHECK(body.at("messages").at(0).at("role") == "user");
        CHECK(body.at("seed") == 7);
        if (n <= 2) {
            res.status = 503;
            res.set_content("busy", "text/plain");
            return;
        }
        const json reply{{"choices",
                          json::array({{{"message", {{"role", "assistant"}, {"content", "int x;"}}},
                                        {"finish_reason", "stop"}}})},
                         {"usage", {{"completion_tokens", 12}}}};
        res.set_content(reply.dump(), "application/json");
    });
    const int port = server.bind_to_any_port("127.0.0.1");
    std::thread thread([&] { server.listen_after_bind(); });
    server.wait_until_ready();

    EndpointConfig config;
    config.base_url = "http://127.0.0.1:" + std::to_string(port);
    config.retries = 3;
    config.seed = 7;
    const GenerationResult result = ChatClient(config).generate(std::string("translate this"));
    CHECK(result.text == "int x;");
    CHECK(result.generated_tokens == 12);
    CHECK(!result.tokens_estimated);
    CHECK(result.attempts == 3);

    server.stop();
    thread.join();
}

TEST_CASE("http 4xx is non-retryable") {
    httplib::Server server;
    std::atomic<int> hits{0};
    server.Post("/v1/chat/completions", [&](const httplib::Request&, httplib::Response& res) {
        ++hits;
        res.status = 401;
        res.set_content("{\"error\": \"unauthorized\"}", "application/json");
    });
    const int port = server.bind_to_any_port("127.0.0.1");
    std::thread thread([&] { server.listen_after_bind(); });
    server.wait_until_ready();

    EndpointConfig config;
    config.base_url = "http://127.0.0.1:" + std::to_string(port);
    config.retries = 3;
    CHECK_THROWS_AS(ChatClient(config).generate(std::string("x")), ApiError);
    CHECK(hits.load() == 1);

    server.stop();
    thread.join();
}

}  // TEST_SUITE
