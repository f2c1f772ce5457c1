#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "reasontrans/corpus.hpp"
#include "reasontrans/model_gateway.hpp"
#include "reasontrans/sandbox.hpp"

namespace reasontrans {

enum class LengthUnit { tokens, characters };
enum class LengthScope { full_completion, code_only };

struct LengthRewardConfig {
    std::size_t max_length = 4096;  // M
    double tolerance = 0.2;         // tau
    LengthUnit length_unit = LengthUnit::tokens;
    LengthScope scope = LengthScope::full_completion;
};

LengthRewardConfig length_config_from_json(const nlohmann::json& j);

struct RewardWeights {
    double execution = 1.0;
    double length = 1.0;
};

RewardWeights weights_from_json(const nlohmann::json& j);

struct RewardBreakdown {
    double execution = 0.0;  // in [0,1]
    double length = 0.0;     // in [0,1]
    double combined = 0.0;   // w_exec * execution + w_len * length
    RewardWeights weights;
};

nlohmann::json to_json(const RewardBreakdown& breakdown);

/// Length as seen by the length reward: whitespace tokens or bytes.
std::size_t reward_length(const std::string& text, LengthUnit unit);

/// The piecewise kernel, exposed for property tests:
///   l_c < l_g or l_c > M          -> 0
///   (l_c - l_g) / l_g <= tau      -> 1 - (l_c - l_g) / (tau * l_g)
///   otherwise                     -> 0.1
/// Throws when l_g == 0 (an empty reference is a data bug).
double length_reward_value(std::size_t l_c, std::size_t l_g, std::size_t max_length, double tolerance);

/// Per completion: extract code, prepare and run the aligned suite, reward =
/// passed/total; any failure path (compile error, missing toolchain, harness
/// fault) yields 0. Never throws for per-item causes; batch items are
/// independent and input order is preserved.
std::vector<double> execution_reward(const std::vector<std::string>& completions, Language language,
                                     const std::vector<TestSuite>& suites, const ExecLimits& limits,
                                     const ToolchainConfig& toolchain = {}, std::size_t concurrency = 0);

/// Pure length reward over the given strings (the caller applies scope).
std::vector<double> length_reward(const std::vector<std::string>& completions,
                                  const std::vector<std::string>& references,
                                  const LengthRewardConfig& config);

/// Weighted combination of both signals. config.scope == code_only measures the
/// extracted code of each completion instead of the full text.
std::vector<RewardBreakdown> combined_reward(const std::vector<std::string>& completions,
                                             const std::vector<std::string>& references,
                                             Language language, const std::vector<TestSuite>& suites,
                                             const LengthRewardConfig& config,
                                             const RewardWeights& weights, const ExecLimits& limits,
                                             const ToolchainConfig& toolchain = {},
                                             std::size_t concurrency = 0);

}  // namespace reasontrans
