#include "reasontrans/synthesis.hpp"

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include <nlohmann/json.hpp>

#include "reasontrans/prompt_kit.hpp"

namespace reasontrans {

using nlohmann::json;

namespace {

std::string fnv1a_hex(const std::string& data) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string key_of(const std::string& source_id, const LanguagePair& pair, int attempt) {
    return source_id + "|" + pair_flag(pair) + "|" + std::to_string(attempt);
}

bool blank(const std::string& text) {
    return text.find_first_not_of(" \t\r\n") == std::string::npos;
}

struct Journal {
    std::ofstream out;

    void append(const json& line) {
        if (out.is_open()) {
            out << line.dump() << '\n';
            out.flush();
        }
    }
};

}  // namespace

std::string to_string(RejectionStage stage) {
    switch (stage) {
    case RejectionStage::generation_failed: return "generation_failed";
    case RejectionStage::parse_failed: return "parse_failed";
    case RejectionStage::syntax_failed: return "syntax_failed";
    case RejectionStage::tests_failed: return "tests_failed";
    }
    return "?";
}

RejectionStage parse_rejection_stage(const std::string& text) {
    if (text == "generation_failed") return RejectionStage::generation_failed;
    if (text == "parse_failed") return RejectionStage::parse_failed;
    if (text == "syntax_failed") return RejectionStage::syntax_failed;
    if (text == "tests_failed") return RejectionStage::tests_failed;
    throw SchemaError("unknown rejection stage `" + text + "`");
}

json to_json(const RejectionRecord& record) {
    return json{{"source_id", record.source_id},
                {"pair", pair_flag(record.pair)},
                {"stage", to_string(record.stage)},
                {"detail", record.detail}};
}

std::string synthesis_config_hash(const SynthesisConfig& config) {
    json pairs = json::array();
    for (const auto& p : config.pairs) {
        pairs.push_back(pair_flag(p));
    }
    const json fingerprint{{"pairs", pairs},
                           {"attempts_per_sample", config.attempts_per_sample},
                           {"base_url", config.endpoint.base_url},
                           {"model_name", config.endpoint.model_name},
                           {"wall_timeout_s", config.limits.wall_timeout_s},
                           {"per_case_timeout_s", config.limits.per_case_timeout_s}};
    return fnv1a_hex(fingerprint.dump());
}

SynthesisResult synthesize_dataset(const std::vector<SourceProgram>& programs,
                                   const SynthesisConfig& config,
                                   const std::string& checkpoint_path) {
    if (config.pairs.empty()) {
        throw Error("synthesis: pairs must be non-empty");
    }
    for (const auto& p : config.pairs) {
        if (p.first == p.second) {
            throw Error("synthesis: pair source and target must differ");
        }
    }
    if (config.attempts_per_sample < 1) {
        throw Error("synthesis: attempts_per_sample must be >= 1");
    }

    const std::string config_hash = synthesis_config_hash(config);
    SynthesisResult result;
    std::map<std::string, json> replayed;  // key -> journal record

    if (!checkpoint_path.empty() && std::filesystem::exists(checkpoint_path)) {
        std::ifstream in(checkpoint_path);
        std::string line;
        bool first = true;
        while (std::getline(in, line)) {
            if (blank(line)) {
                continue;
            }
            json j = json::parse(line);
            if (first) {
                first = false;
                const std::string seen = j.value("config_hash", "");
                if (seen != config_hash) {
                    throw Error("checkpoint config mismatch: expected " + config_hash + ", found " +
                                seen);
                }
                continue;
            }
            const std::string key = j.at("key").get<std::string>();
            replayed[key] = std::move(j);
        }
    }

    Journal journal;
    if (!checkpoint_path.empty()) {
        const bool fresh = replayed.empty();
        journal.out.open(checkpoint_path, fresh ? std::ios::trunc : std::ios::app);
        if (!journal.out) {
            throw Error("cannot open checkpoint for writing: " + checkpoint_path);
        }
        if (fresh) {
            journal.append(json{{"config_hash", config_hash}});
        }
    }

    ChatClient client(config.endpoint);

    auto accept = [&](const ReasoningTriplet& triplet, const std::string& key) {
        result.triplets.push_back(triplet);
        journal.append(json{{"key", key}, {"triplet", to_json(triplet)}});
    };
    auto reject = [&](const std::string& source_id, const LanguagePair& pair, RejectionStage stage,
                      const std::string& detail, const std::string& key) {
        RejectionRecord record{source_id, pair, stage, detail};
        result.rejections.push_back(record);
        journal.append(json{{"key", key}, {"rejection", to_json(record)}});
    };

    for (const auto& program : programs) {
        for (const auto& pair : config.pairs) {
            if (program.language != pair.first) {
                continue;
            }
            for (int attempt = 1; attempt <= config.attempts_per_sample; ++attempt) {
                const std::string key = key_of(program.id, pair, attempt);
                if (auto it = replayed.find(key); it != replayed.end()) {
                    const json& j = it->second;
                    if (j.contains("triplet")) {
                        result.triplets.push_back(triplet_from_json(j["triplet"]));
                    } else {
                        const json& r = j.at("rejection");
                        result.rejections.push_back(
                            {r.at("source_id").get<std::string>(),
                             parse_pair_flag(r.at("pair").get<std::string>()),
                             parse_rejection_stage(r.at("stage").get<std::string>()),
                             r.value("detail", "")});
                    }
                    if (j.contains("triplet")) {
                        break;  // the sample already succeeded; later attempts never ran
                    }
                    continue;
                }

                const RenderedPrompt prompt =
                    render_synthesis_prompt(program.code, pair.first, pair.second);
                GenerationResult gen;
                try {
                    gen = client.generate(prompt);
                } catch (const std::exception& e) {
                    reject(program.id, pair, RejectionStage::generation_failed, e.what(), key);
                    continue;
                }

                const ParsedCompletion parsed = parse_completion(gen.text, pair.second);
                if (blank(parsed.code)) {
                    reject(program.id, pair, RejectionStage::parse_failed, "no code extracted", key);
                    continue;
                }

                const SyntaxResult syn =
                    syntax_check(parsed.code, pair.second, config.toolchain, config.limits);
                if (!syn.ok) {
                    reject(program.id, pair, RejectionStage::syntax_failed, syn.diagnostics, key);
                    continue;
                }

                const TestReport report = run_suite(parsed.code, program.suite, pair.second,
                                                    config.limits, config.toolchain);
                if (!report.all_pass()) {
                    reject(program.id, pair, RejectionStage::tests_failed,
                           "passed " + std::to_string(report.passed) + "/" +
                               std::to_string(report.total),
                           key);
                    continue;
                }

                ReasoningTriplet triplet;
                triplet.source_id = program.id;
                triplet.source_language = pair.first;
                triplet.target_language = pair.second;
                triplet.source_code = program.code;
                triplet.reasoning = parsed.reasoning;
                triplet.target_code = parsed.code;
                triplet.validation = report;
                triplet.token_count = gen.generated_tokens;
                accept(triplet, key);
                break;  // sample accepted; stop retrying
            }
        }
    }
    return result;
}

SynthesisResult resume(const std::string& checkpoint_path,
                       const std::vector<SourceProgram>& programs, const SynthesisConfig& config) {
    if (!std::filesystem::exists(checkpoint_path)) {
        throw Error("checkpoint not found: " + checkpoint_path);
    }
    return synthesize_dataset(programs, config, checkpoint_path);
}

}  // namespace reasontrans
