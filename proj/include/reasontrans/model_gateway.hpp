#pragma once

#include <cstddef>
#include <memory>
#include <string>

#include "reasontrans/error.hpp"
#include "reasontrans/prompt_kit.hpp"

#include <nlohmann/json_fwd.hpp>

namespace reasontrans {

/// Endpoint description. base_url accepts http(s)://host:port for a live
/// chat-completion server or mock://path/to/script.jsonl for the scripted
/// offline backend. REASONTRANS_BASE_URL / REASONTRANS_API_KEY override the
/// corresponding fields when set.
struct EndpointConfig {
    std::string base_url = "mock://";
    std::string model_name = "default";
    std::string api_key;
    double timeout_s = 30.0;
    std::size_t max_new_tokens = 2048;
    double temperature = 0.2;
    int retries = 2;
    long seed = -1;  // forwarded to the endpoint when >= 0
};

EndpointConfig endpoint_config_from_json(const nlohmann::json& j);
/// Applies REASONTRANS_BASE_URL and REASONTRANS_API_KEY if present.
void apply_endpoint_env(EndpointConfig& config);

enum class FinishReason { stop, length, error };

struct GenerationResult {
    std::string text;
    std::size_t generated_tokens = 0;  // T_i
    double latency_s = 0.0;            // t_i, end-to-end wall clock around generate()
    FinishReason finish_reason = FinishReason::stop;
    bool tokens_estimated = false;     // true when no provider usage was available
    int attempts = 1;
};

enum class TokenizerSpec { whitespace, byte_len_div4, provider_reported };

TokenizerSpec parse_tokenizer_spec(const std::string& text);

/// Deterministic token count for a fixed spec. provider_reported is only valid
/// where usage metadata exists (inside the gateway) and throws here.
std::size_t count_tokens(const std::string& text, TokenizerSpec spec);

/// Shareable client. Transient transport failures (connection loss, HTTP 5xx)
/// are retried up to config.retries with exponential backoff; HTTP 4xx raises
/// ApiError immediately. The mock backend replays a JSONL script of records
/// {"match": "*"|substring, "response": text, "delay_ms"?, "tokens"?,
///  "max_uses"?, "error"?: "transport"|{"status": n, "body": s}} where the
/// first non-exhausted matching record wins; its use-count state is shared
/// across copies of the client.
class ChatClient {
public:
    explicit ChatClient(EndpointConfig config);

    GenerationResult generate(const RenderedPrompt& prompt) const { return generate(prompt.text); }
    GenerationResult generate(const std::string& prompt) const;

    const EndpointConfig& config() const { return config_; }

private:
    EndpointConfig config_;
    struct MockScript;
    std::shared_ptr<MockScript> mock_;  // null for http backends
};

/// One-shot convenience wrapper; mock scripts get fresh use-counts per call.
GenerationResult generate(const EndpointConfig& config, const RenderedPrompt& prompt);

}  // namespace reasontrans
