#include "reasontrans/evaluate.hpp"

#include <map>

#include "reasontrans/parallel.hpp"

namespace reasontrans {

namespace {

struct Sample {
    const SourceProgram* source;
    const SourceProgram* reference;
};

std::vector<Sample> pair_samples(const std::vector<SourceProgram>& programs,
                                 const LanguagePair& pair) {
    std::map<std::string, std::map<Language, const SourceProgram*>> by_origin;
    std::vector<std::string> origin_order;
    for (const auto& p : programs) {
        const std::string key = p.origin.empty() ? p.id : p.origin;
        if (by_origin.find(key) == by_origin.end()) {
            origin_order.push_back(key);
        }
        by_origin[key].emplace(p.language, &p);
    }
    std::vector<Sample> samples;
    for (const auto& key : origin_order) {
        const auto& variants = by_origin[key];
        auto src = variants.find(pair.first);
        auto tgt = variants.find(pair.second);
        if (src != variants.end() && tgt != variants.end()) {
            samples.push_back({src->second, tgt->second});
        }
    }
    return samples;
}

}  // namespace

PairEvaluation evaluate_pair(const EvalConfig& config, const LanguagePair& pair,
                             const ChatClient& client) {
    return evaluate_pair(config, pair, client, load_source_programs(config.dataset_path));
}

PairEvaluation evaluate_pair(const EvalConfig& config, const LanguagePair& pair,
                             const ChatClient& client,
                             const std::vector<SourceProgram>& programs) {
    const auto samples = pair_samples(programs, pair);
    if (samples.empty()) {
        throw Error("evaluate_pair: no parallel samples for " + pair_label(pair));
    }

    std::vector<EvalRecord> records(samples.size());
    std::vector<CodeBleuScore> scores(samples.size());

    parallel_for(
        samples.size(),
        [&](std::size_t i) {
            const Sample& sample = samples[i];
            EvalRecord record;
            record.sample_id = sample.source->origin.empty() ? sample.source->id
                                                             : sample.source->origin;
            record.pair = pair;
            record.reference_code = sample.reference->code;

            RenderedPrompt prompt =
                config.prompt_kind == TemplateId::synthesis
                    ? render_synthesis_prompt(sample.source->code, pair.first, pair.second)
                    : render_sft_style_prompt(sample.source->code, pair.first, pair.second);

            bool generated = false;
            GenerationResult gen;
            try {
                gen = client.generate(prompt);
                generated = true;
            } catch (const std::exception&) {
                // degraded sample: zero-reward-style record
            }

            if (generated) {
                record.generated_tokens = gen.generated_tokens;
                record.latency_s = gen.latency_s;
                record.hypothesis_code = parse_completion(gen.text, pair.second).code;
                record.report = run_suite(record.hypothesis_code, sample.reference->suite,
                                          pair.second, config.limits, config.toolchain);
            } else {
                record.report.compiled = false;
                record.report.total = sample.reference->suite.cases.size();
            }

            CodeBleuScore score;
            if (!record.hypothesis_code.empty()) {
                try {
                    score = codebleu(record.hypothesis_code, record.reference_code, pair.second);
                } catch (const Error&) {
                    score = CodeBleuScore{};
                }
            }
            records[i] = std::move(record);
            scores[i] = score;
        },
        config.concurrency);

    PairEvaluation out;
    out.records = std::move(records);
    out.codebleu_scores = std::move(scores);
    out.report = aggregate_report(out.records, out.codebleu_scores);
    return out;
}

}  // namespace reasontrans
