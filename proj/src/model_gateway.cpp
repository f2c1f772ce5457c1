#include "reasontrans/model_gateway.hpp"

#include <cctype>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <mutex>
#include <thread>
#include <vector>

#include <httplib.h>
#include <nlohmann/json.hpp>

namespace reasontrans {

using nlohmann::json;

namespace {

constexpr const char* kMockScheme = "mock://";
constexpr const char* kChatPath = "/v1/chat/completions";

double elapsed_s(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

void backoff_sleep(int attempt) {
    const double delay = std::min(0.1 * static_cast<double>(1 << attempt), 2.0);
    std::this_thread::sleep_for(std::chrono::duration<double>(delay));
}

std::string excerpt(const std::string& body, std::size_t limit = 200) {
    return body.size() <= limit ? body : body.substr(0, limit) + "...";
}

}  // namespace

struct ChatClient::MockScript {
    struct Entry {
        std::string match;       // "*" matches everything, otherwise substring
        std::string response;
        int delay_ms = 0;
        std::size_t tokens = 0;
        bool has_tokens = false;
        std::size_t max_uses = 0;  // 0 = unlimited
        std::size_t uses = 0;
        bool transport_error = false;
        int http_status = 0;
        std::string error_body;
    };

    std::vector<Entry> entries;
    std::mutex mutex;

    static std::shared_ptr<MockScript> load(const std::string& path) {
        auto script = std::make_shared<MockScript>();
        if (path.empty()) {
            return script;  // empty script: every generate fails with no-match
        }
        std::ifstream in(path);
        if (!in) {
            throw Error("cannot open mock script: " + path);
        }
        std::string line;
        std::size_t line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            if (line.find_first_not_of(" \t\r") == std::string::npos) {
                continue;
            }
            json j;
            try {
                j = json::parse(line);
            } catch (const json::parse_error& e) {
                throw SchemaError(path + ":" + std::to_string(line_no) + ": " + e.what());
            }
            Entry entry;
            entry.match = j.value("match", "*");
            entry.response = j.value("response", "");
            entry.delay_ms = j.value("delay_ms", 0);
            if (j.contains("tokens")) {
                entry.tokens = j["tokens"].get<std::size_t>();
                entry.has_tokens = true;
            }
            entry.max_uses = j.value("max_uses", 0);
            if (j.contains("error")) {
                const auto& err = j["error"];
                if (err.is_string() && err.get<std::string>() == "transport") {
                    entry.transport_error = true;
                } else if (err.is_object()) {
                    entry.http_status = err.value("status", 500);
                    entry.error_body = err.value("body", "");
                } else {
                    throw SchemaError(path + ":" + std::to_string(line_no) + ": bad `error` field");
                }
            }
            script->entries.push_back(std::move(entry));
        }
        return script;
    }

    // Claims the first live matching entry, bumping its use-count.
    Entry* claim(const std::string& prompt) {
        std::lock_guard<std::mutex> lock(mutex);
        for (auto& entry : entries) {
            if (entry.max_uses != 0 && entry.uses >= entry.max_uses) {
                continue;
            }
            if (entry.match == "*" || prompt.find(entry.match) != std::string::npos) {
                ++entry.uses;
                return &entry;
            }
        }
        return nullptr;
    }
};

EndpointConfig endpoint_config_from_json(const json& j) {
    EndpointConfig config;
    config.base_url = j.value("base_url", config.base_url);
    config.model_name = j.value("model_name", config.model_name);
    config.api_key = j.value("api_key", config.api_key);
    config.timeout_s = j.value("timeout_s", config.timeout_s);
    config.max_new_tokens = j.value("max_new_tokens", config.max_new_tokens);
    config.temperature = j.value("temperature", config.temperature);
    config.retries = j.value("retries", config.retries);
    config.seed = j.value("seed", config.seed);
    if (config.timeout_s <= 0) {
        throw SchemaError("endpoint: timeout_s must be positive");
    }
    if (config.retries < 0 || config.retries > 10) {
        throw SchemaError("endpoint: retries must be in [0, 10]");
    }
    if (config.temperature < 0) {
        throw SchemaError("endpoint: temperature must be non-negative");
    }
    return config;
}

void apply_endpoint_env(EndpointConfig& config) {
    if (const char* url = std::getenv("REASONTRANS_BASE_URL")) {
        config.base_url = url;
    }
    if (const char* key = std::getenv("REASONTRANS_API_KEY")) {
        config.api_key = key;
    }
}

TokenizerSpec parse_tokenizer_spec(const std::string& text) {
    if (text == "whitespace") return TokenizerSpec::whitespace;
    if (text == "byte_len_div4") return TokenizerSpec::byte_len_div4;
    if (text == "provider_reported") return TokenizerSpec::provider_reported;
    throw Error("unknown tokenizer spec `" + text + "`");
}

std::size_t count_tokens(const std::string& text, TokenizerSpec spec) {
    switch (spec) {
    case TokenizerSpec::whitespace: {
        std::size_t count = 0;
        bool in_token = false;
        for (char c : text) {
            const bool space = std::isspace(static_cast<unsigned char>(c)) != 0;
            if (!space && !in_token) {
                ++count;
            }
            in_token = !space;
        }
        return count;
    }
    case TokenizerSpec::byte_len_div4:
        return text.size() / 4;
    case TokenizerSpec::provider_reported:
        throw Error("count_tokens: provider_reported requires provider usage metadata");
    }
    return 0;
}

ChatClient::ChatClient(EndpointConfig config) : config_(std::move(config)) {
    if (config_.base_url.rfind(kMockScheme, 0) == 0) {
        mock_ = MockScript::load(config_.base_url.substr(std::string(kMockScheme).size()));
    }
}

GenerationResult ChatClient::generate(const std::string& prompt) const {
    const auto start = std::chrono::steady_clock::now();
    const int max_attempts = config_.retries + 1;
    std::string last_transport_error;

    for (int attempt = 0; attempt < max_attempts; ++attempt) {
        if (attempt > 0) {
            backoff_sleep(attempt - 1);
        }
        if (mock_) {
            auto* entry = mock_->claim(prompt);
            if (entry == nullptr) {
                throw TransportError("mock endpoint: no script entry matches the prompt");
            }
            if (entry->delay_ms > 0) {
                std::this_thread::sleep_for(std::chrono::milliseconds(entry->delay_ms));
            }
            if (entry->transport_error) {
                last_transport_error = "mock transport failure";
                continue;
            }
            if (entry->http_status >= 500) {
                last_transport_error = "mock HTTP " + std::to_string(entry->http_status);
                continue;
            }
            if (entry->http_status >= 400) {
                throw ApiError(entry->http_status,
                               "endpoint returned HTTP " + std::to_string(entry->http_status) + ": " +
                                   excerpt(entry->error_body));
            }
            GenerationResult result;
            result.text = entry->response;
            result.tokens_estimated = !entry->has_tokens;
            result.generated_tokens =
                entry->has_tokens ? entry->tokens : count_tokens(entry->response, TokenizerSpec::whitespace);
            result.finish_reason = FinishReason::stop;
            result.attempts = attempt + 1;
            result.latency_s = elapsed_s(start);
            return result;
        }

        httplib::Client cli(config_.base_url);
        cli.set_connection_timeout(std::chrono::duration<double>(config_.timeout_s));
        cli.set_read_timeout(std::chrono::duration<double>(config_.timeout_s));
        cli.set_write_timeout(std::chrono::duration<double>(config_.timeout_s));
        httplib::Headers headers;
        if (!config_.api_key.empty()) {
            headers.emplace("Authorization", "Bearer " + config_.api_key);
        }
        json body{{"model", config_.model_name},
                  {"messages", json::array({{{"role", "user"}, {"content", prompt}}})},
                  {"max_tokens", config_.max_new_tokens},
                  {"temperature", config_.temperature}};
        if (config_.seed >= 0) {
            body["seed"] = config_.seed;
        }
        auto res = cli.Post(kChatPath, headers, body.dump(), "application/json");
        if (!res) {
            last_transport_error = httplib::to_string(res.error());
            continue;
        }
        if (res->status >= 500) {
            last_transport_error = "HTTP " + std::to_string(res->status);
            continue;
        }
        if (res->status >= 400) {
            throw ApiError(res->status, "endpoint returned HTTP " + std::to_string(res->status) +
                                            ": " + excerpt(res->body));
        }
        json payload;
        try {
            payload = json::parse(res->body);
        } catch (const json::parse_error& e) {
            last_transport_error = std::string("bad response JSON: ") + e.what();
            continue;
        }
        GenerationResult result;
        const auto& choices = payload.at("choices");
        if (choices.empty()) {
            last_transport_error = "response has no choices";
            continue;
        }
        const auto& choice = choices.at(0);
        if (choice.contains("message")) {
            result.text = choice.at("message").value("content", "");
        } else {
            result.text = choice.value("text", "");
        }
        const std::string finish = choice.value("finish_reason", "stop");
        result.finish_reason = finish == "length" ? FinishReason::length : FinishReason::stop;
        if (payload.contains("usage") && payload["usage"].contains("completion_tokens")) {
            result.generated_tokens = payload["usage"]["completion_tokens"].get<std::size_t>();
            result.tokens_estimated = false;
        } else {
            result.generated_tokens = count_tokens(result.text, TokenizerSpec::whitespace);
            result.tokens_estimated = true;
        }
        result.attempts = attempt + 1;
        result.latency_s = elapsed_s(start);
        return result;
    }
    throw TransportError("generation failed after " + std::to_string(max_attempts) +
                         " attempts: " + last_transport_error);
}

GenerationResult generate(const EndpointConfig& config, const RenderedPrompt& prompt) {
    return ChatClient(config).generate(prompt);
}

}  // namespace reasontrans
