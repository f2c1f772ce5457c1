#pragma once

#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "reasontrans/corpus.hpp"
#include "reasontrans/model_gateway.hpp"
#include "reasontrans/sandbox.hpp"

namespace reasontrans {

struct SynthesisConfig {
    std::vector<LanguagePair> pairs;
    int attempts_per_sample = 1;
    ExecLimits limits;
    EndpointConfig endpoint;
    ToolchainConfig toolchain;
    std::string output_path;
};

enum class RejectionStage { generation_failed, parse_failed, syntax_failed, tests_failed };

std::string to_string(RejectionStage stage);
RejectionStage parse_rejection_stage(const std::string& text);

struct RejectionRecord {
    std::string source_id;
    LanguagePair pair{Language::Java, Language::Python};
    RejectionStage stage = RejectionStage::generation_failed;
    std::string detail;
};

nlohmann::json to_json(const RejectionRecord& record);

struct SynthesisResult {
    std::vector<ReasoningTriplet> triplets;
    std::vector<RejectionRecord> rejections;
};

/// Stable fingerprint of the settings that shape a run; resume refuses a
/// checkpoint written under a different hash.
std::string synthesis_config_hash(const SynthesisConfig& config);

/// Runs the full gate chain per (program, pair) where the program's language
/// matches the pair source: render synthesis prompt -> generate -> parse ->
/// syntax check -> run the full suite in the target language. A triplet is
/// accepted iff every case passes; each non-acceptance yields exactly one
/// RejectionRecord whose stage names the first failing gate. When
/// checkpoint_path is non-empty, progress is journalled there (config hash
/// first, then one line per completed key) and already-journalled keys are
/// replayed instead of re-run. Missing toolchains abort with EnvironmentError;
/// endpoint failures degrade to generation_failed rejections.
SynthesisResult synthesize_dataset(const std::vector<SourceProgram>& programs,
                                   const SynthesisConfig& config,
                                   const std::string& checkpoint_path = "");

/// Continues a prior run. The checkpoint must exist and carry the same config
/// hash; resuming a complete checkpoint re-emits its outputs without model calls.
SynthesisResult resume(const std::string& checkpoint_path,
                       const std::vector<SourceProgram>& programs, const SynthesisConfig& config);

}  // namespace reasontrans
