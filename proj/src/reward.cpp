#include "reasontrans/reward.hpp"

#include <nlohmann/json.hpp>

#include "reasontrans/parallel.hpp"
#include "reasontrans/prompt_kit.hpp"

namespace reasontrans {

using nlohmann::json;

LengthRewardConfig length_config_from_json(const json& j) {
    LengthRewardConfig c;
    c.max_length = j.value("max_length", c.max_length);
    c.tolerance = j.value("tolerance", c.tolerance);
    if (j.contains("length_unit")) {
        const std::string unit = j["length_unit"].get<std::string>();
        if (unit == "tokens") {
            c.length_unit = LengthUnit::tokens;
        } else if (unit == "characters") {
            c.length_unit = LengthUnit::characters;
        } else {
            throw SchemaError("config: bad `length_unit` value `" + unit + "`");
        }
    }
    if (j.contains("scope")) {
        const std::string scope = j["scope"].get<std::string>();
        if (scope == "full_completion") {
            c.scope = LengthScope::full_completion;
        } else if (scope == "code_only") {
            c.scope = LengthScope::code_only;
        } else {
            throw SchemaError("config: bad `scope` value `" + scope + "`");
        }
    }
    if (c.max_length < 1) {
        throw SchemaError("config: max_length must be >= 1");
    }
    if (c.tolerance <= 0) {
        throw SchemaError("config: tolerance must be positive");
    }
    return c;
}

RewardWeights weights_from_json(const json& j) {
    RewardWeights w;
    if (j.is_array()) {
        if (j.size() != 2) {
            throw SchemaError("weights: expected [w_exec, w_len]");
        }
        w.execution = j[0].get<double>();
        w.length = j[1].get<double>();
    } else if (j.is_object()) {
        w.execution = j.value("execution", w.execution);
        w.length = j.value("length", w.length);
    } else {
        throw SchemaError("weights: expected an array or object");
    }
    return w;
}

json to_json(const RewardBreakdown& breakdown) {
    return json{{"execution", breakdown.execution},
                {"length", breakdown.length},
                {"combined", breakdown.combined},
                {"weights", {breakdown.weights.execution, breakdown.weights.length}}};
}

std::size_t reward_length(const std::string& text, LengthUnit unit) {
    return unit == LengthUnit::tokens ? count_tokens(text, TokenizerSpec::whitespace) : text.size();
}

double length_reward_value(std::size_t l_c, std::size_t l_g, std::size_t max_length,
                           double tolerance) {
    if (l_g == 0) {
        throw Error("length reward: reference length must be >= 1");
    }
    if (l_c < l_g || l_c > max_length) {
        return 0.0;
    }
    const double excess_ratio = static_cast<double>(l_c - l_g) / static_cast<double>(l_g);
    if (excess_ratio <= tolerance) {
        return 1.0 - excess_ratio / tolerance;
    }
    return 0.1;
}

std::vector<double> execution_reward(const std::vector<std::string>& completions, Language language,
                                     const std::vector<TestSuite>& suites, const ExecLimits& limits,
                                     const ToolchainConfig& toolchain, std::size_t concurrency) {
    if (completions.size() != suites.size()) {
        throw Error("execution_reward: completions and suites are misaligned");
    }
    std::vector<double> rewards(completions.size(), 0.0);
    parallel_for(
        completions.size(),
        [&](std::size_t i) {
            try {
                const std::string code = parse_completion(completions[i], language).code;
                const TestReport report = run_suite(code, suites[i], language, limits, toolchain);
                if (report.compiled && report.total > 0) {
                    rewards[i] = static_cast<double>(report.passed) / static_cast<double>(report.total);
                } else {
                    rewards[i] = 0.0;
                }
            } catch (...) {
                rewards[i] = 0.0;  // the catch branch: any failure is a zero reward
            }
        },
        concurrency);
    return rewards;
}

std::vector<double> length_reward(const std::vector<std::string>& completions,
                                  const std::vector<std::string>& references,
                                  const LengthRewardConfig& config) {
    if (completions.size() != references.size()) {
        throw Error("length_reward: completions and references are misaligned");
    }
    std::vector<double> rewards(completions.size(), 0.0);
    for (std::size_t i = 0; i < completions.size(); ++i) {
        const std::size_t l_c = reward_length(completions[i], config.length_unit);
        const std::size_t l_g = reward_length(references[i], config.length_unit);
        rewards[i] = length_reward_value(l_c, l_g, config.max_length, config.tolerance);
    }
    return rewards;
}

std::vector<RewardBreakdown> combined_reward(const std::vector<std::string>& completions,
                                             const std::vector<std::string>& references,
                                             Language language, const std::vector<TestSuite>& suites,
                                             const LengthRewardConfig& config,
                                             const RewardWeights& weights, const ExecLimits& limits,
                                             const ToolchainConfig& toolchain, std::size_t concurrency) {
    std::vector<double> exec = execution_reward(completions, language, suites, limits, toolchain,
                                                concurrency);
    std::vector<std::string> measured = completions;
    if (config.scope == LengthScope::code_only) {
        for (auto& text : measured) {
            text = parse_completion(text, language).code;
        }
    }
    std::vector<double> len = length_reward(measured, references, config);

    std::vector<RewardBreakdown> out(completions.size());
    for (std::size_t i = 0; i < completions.size(); ++i) {
        out[i].execution = exec[i];
        out[i].length = len[i];
        out[i].weights = weights;
        out[i].combined = weights.execution * exec[i] + weights.length * len[i];
    }
    return out;
}

}  // namespace reasontrans
