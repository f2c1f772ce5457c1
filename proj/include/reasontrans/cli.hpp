#pragma once

#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "reasontrans/agent.hpp"
#include "reasontrans/evaluate.hpp"
#include "reasontrans/reward_service.hpp"
#include "reasontrans/synthesis.hpp"

namespace reasontrans {

/// The single declarative config document shared by all subcommands; every
/// section is optional and falls back to defaults.
struct HarnessConfig {
    EndpointConfig endpoint;
    ExecLimits limits;
    ToolchainConfig toolchain;
    LengthRewardConfig length;
    RewardWeights weights;
    std::vector<LanguagePair> pairs;
    TemplateId prompt_kind = TemplateId::sft_style;
    long seed = 0;
    std::size_t min_cases = 10;
    int attempts_per_sample = 1;
    std::size_t concurrency = 0;
    std::size_t agent_tests = 3;
    std::size_t agent_max_rounds = 2;
    bool agent_filter_tests = true;
};

HarnessConfig harness_config_from_json(const nlohmann::json& j);
HarnessConfig load_harness_config(const std::string& path);

/// Entry point behind the `reasontrans` binary. Subcommands: validate-corpus,
/// synthesize, evaluate, agent, reward-serve, metrics. Returns 0 on success,
/// 1 on runtime errors, 2 on usage errors.
int cli_main(int argc, const char* const* argv);
int cli_main(const std::vector<std::string>& args);

}  // namespace reasontrans
