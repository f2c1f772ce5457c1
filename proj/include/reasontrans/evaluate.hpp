#pragma once

#include <string>
#include <vector>

#include "reasontrans/metrics.hpp"
#include "reasontrans/model_gateway.hpp"
#include "reasontrans/prompt_kit.hpp"
#include "reasontrans/sandbox.hpp"

namespace reasontrans {

struct EvalConfig {
    std::string dataset_path;
    std::vector<LanguagePair> pairs;
    EndpointConfig endpoint;
    TemplateId prompt_kind = TemplateId::sft_style;  // sft_style or synthesis
    ExecLimits limits;
    ToolchainConfig toolchain;
    long seed = 0;  // forwarded to the endpoint; no determinism claim
    std::string out_dir;
    std::size_t concurrency = 0;
};

struct PairEvaluation {
    MetricsReport report;
    std::vector<EvalRecord> records;
    std::vector<CodeBleuScore> codebleu_scores;
};

/// Parallel functions are paired by `origin`: the sample's source program is
/// the pair-source-language variant and the reference translation is the
/// target-language variant with the same origin. Each sample runs
/// prompt -> generate -> parse -> execute (target-side suite) -> CodeBLEU.
/// Per-sample failures degrade that sample to a zero-reward-style record;
/// they never abort the pair.
PairEvaluation evaluate_pair(const EvalConfig& config, const LanguagePair& pair,
                             const ChatClient& client);

/// Same, over preloaded programs (saves re-reading the dataset per pair).
PairEvaluation evaluate_pair(const EvalConfig& config, const LanguagePair& pair,
                             const ChatClient& client, const std::vector<SourceProgram>& programs);

}  // namespace reasontrans
