#pragma once

#include <string>
#include <vector>

#include "reasontrans/corpus.hpp"

namespace reasontrans {

enum class TemplateId { synthesis, sft_style, agent_translate, agent_repair, testgen };

std::string to_string(TemplateId id);

struct RenderedPrompt {
    std::string text;
    TemplateId template_id = TemplateId::synthesis;
    Language source_language = Language::Python;
    Language target_language = Language::Java;
};

enum class ExtractionMethod { fenced_block, answer_marker, whole_text };

std::string to_string(ExtractionMethod method);

/// A completion split into its reasoning and code parts. `code` is always a
/// contiguous substring of `raw`; reasoning precedes it when both are present.
struct ParsedCompletion {
    std::string reasoning;
    std::string code;
    std::string raw;
    ExtractionMethod extraction_method = ExtractionMethod::whole_text;
};

/// Answer cue used by the sft-style template and by extraction rule (3).
inline constexpr const char* kAnswerMarker = "Final Answer:";

RenderedPrompt render_synthesis_prompt(const std::string& code, Language src, Language tgt);

/// Code block first, then the directional instruction, an analysis cue, and the
/// literal answer cue, in that order.
RenderedPrompt render_sft_style_prompt(const std::string& code, Language src, Language tgt);

RenderedPrompt render_agent_translate_prompt(const std::string& code, Language src, Language tgt,
                                             const std::string& entry_function,
                                             const std::vector<TestCase>& tests);

/// Repair prompt with the prior attempt, failing case ids, and diagnostics.
/// Throws if the report is all-pass (nothing to repair).
RenderedPrompt render_agent_repair_prompt(const std::string& source_code, Language src, Language tgt,
                                          const std::string& prev_code, const TestReport& report);

RenderedPrompt render_testgen_prompt(const std::string& code, Language src,
                                     const std::string& entry_function, std::size_t n_cases);

/// Extraction precedence: (1) last fenced block labeled with the target language,
/// (2) last unlabeled fenced block, (3) text after the final "Final Answer:"
/// marker, (4) the whole text. Never fails.
ParsedCompletion parse_completion(const std::string& raw, Language target);

}  // namespace reasontrans
