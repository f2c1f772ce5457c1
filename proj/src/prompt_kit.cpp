#include "reasontrans/prompt_kit.hpp"

#include <algorithm>
#include <cctype>

#include <nlohmann/json.hpp>

#include "embedded_assets.hpp"

namespace reasontrans {

namespace {

std::string fence_tag(Language lang) {
    return wire_name(lang);
}

std::string replace_all(std::string text, const std::string& from, const std::string& to) {
    std::size_t at = 0;
    while ((at = text.find(from, at)) != std::string::npos) {
        text.replace(at, from.size(), to);
        at += to.size();
    }
    return text;
}

std::string render_template(const char* tpl,
                            std::initializer_list<std::pair<const char*, std::string>> subs) {
    std::string text = tpl;
    for (const auto& [name, value] : subs) {
        text = replace_all(std::move(text), std::string("{{") + name + "}}", value);
    }
    return text;
}

void require_translation_inputs(const std::string& code, Language src, Language tgt) {
    if (src == tgt) {
        throw Error("prompt: source and target language must differ");
    }
    if (code.empty()) {
        throw Error("prompt: source code must be non-empty");
    }
}

std::string render_test_lines(const std::string& entry_function, const std::vector<TestCase>& tests) {
    std::string out;
    for (const auto& t : tests) {
        std::string args;
        for (std::size_t i = 0; i < t.args.size(); ++i) {
            if (i > 0) args += ", ";
            args += t.args[i].dump();
        }
        out += "- case " + t.case_id + ": " + entry_function + "(" + args +
               ") == " + t.expected.dump() + "\n";
    }
    if (!out.empty()) {
        out.pop_back();
    }
    return out;
}

std::string trim_right(std::string s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
        s.pop_back();
    }
    return s;
}

struct FencedBlock {
    std::string label;        // lowercased first word of the info string
    std::size_t code_begin;   // offsets into raw
    std::size_t code_end;
    std::size_t fence_begin;  // start of the opening fence line
};

std::vector<FencedBlock> find_fenced_blocks(const std::string& raw) {
    std::vector<FencedBlock> blocks;
    std::size_t line_start = 0;
    bool in_block = false;
    FencedBlock current{};
    while (line_start <= raw.size()) {
        std::size_t line_end = raw.find('\n', line_start);
        const bool last_line = line_end == std::string::npos;
        if (last_line) {
            line_end = raw.size();
        }
        std::size_t first = raw.find_first_not_of(" \t", line_start);
        const bool is_fence = first != std::string::npos && first < line_end &&
                              raw.compare(first, 3, "```") == 0;
        if (is_fence && !in_block) {
            std::string info = raw.substr(first + 3, line_end - (first + 3));
            info = trim_right(info);
            std::size_t word_end = info.find_first_of(" \t");
            std::string label = info.substr(0, word_end);
            std::transform(label.begin(), label.end(), label.begin(),
                           [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
            current = FencedBlock{label, std::min(line_end + 1, raw.size()), raw.size(), line_start};
            in_block = true;
        } else if (is_fence && in_block) {
            current.code_end = line_start;
            // drop the newline that terminates the last code line
            if (current.code_end > current.code_begin && raw[current.code_end - 1] == '\n') {
                --current.code_end;
            }
            blocks.push_back(current);
            in_block = false;
        }
        if (last_line) {
            break;
        }
        line_start = line_end + 1;
    }
    if (in_block) {
        // unterminated block runs to end of text
        current.code_end = raw.size();
        if (current.code_end > current.code_begin && raw[current.code_end - 1] == '\n') {
            --current.code_end;
        }
        blocks.push_back(current);
    }
    return blocks;
}

bool label_matches(const std::string& label, Language target) {
    switch (target) {
    case Language::Python: return label == "python" || label == "py" || label == "python3";
    case Language::Java: return label == "java";
    case Language::Cpp: return label == "cpp" || label == "c++" || label == "cxx" || label == "cc";
    }
    return false;
}

ParsedCompletion from_block(const std::string& raw, const FencedBlock& block) {
    ParsedCompletion out;
    out.raw = raw;
    out.extraction_method = ExtractionMethod::fenced_block;
    out.code = raw.substr(block.code_begin, block.code_end - block.code_begin);
    out.reasoning = trim_right(raw.substr(0, block.fence_begin));
    return out;
}

}  // namespace

std::string to_string(TemplateId id) {
    switch (id) {
    case TemplateId::synthesis: return "synthesis";
    case TemplateId::sft_style: return "sft_style";
    case TemplateId::agent_translate: return "agent_translate";
    case TemplateId::agent_repair: return "agent_repair";
    case TemplateId::testgen: return "testgen";
    }
    return "?";
}

std::string to_string(ExtractionMethod method) {
    switch (method) {
    case ExtractionMethod::fenced_block: return "fenced_block";
    case ExtractionMethod::answer_marker: return "answer_marker";
    case ExtractionMethod::whole_text: return "whole_text";
    }
    return "?";
}

RenderedPrompt render_synthesis_prompt(const std::string& code, Language src, Language tgt) {
    require_translation_inputs(code, src, tgt);
    RenderedPrompt prompt;
    prompt.template_id = TemplateId::synthesis;
    prompt.source_language = src;
    prompt.target_language = tgt;
    prompt.text = render_template(assets::kTemplateSynthesis,
                                  {{"src_lang", display_name(src)},
                                   {"tgt_lang", display_name(tgt)},
                                   {"src_fence", fence_tag(src)},
                                   {"tgt_fence", fence_tag(tgt)},
                                   {"source_code", code}});
    return prompt;
}

RenderedPrompt render_sft_style_prompt(const std::string& code, Language src, Language tgt) {
    require_translation_inputs(code, src, tgt);
    RenderedPrompt prompt;
    prompt.template_id = TemplateId::sft_style;
    prompt.source_language = src;
    prompt.target_language = tgt;
    prompt.text = render_template(assets::kTemplateSftStyle,
                                  {{"src_lang", display_name(src)},
                                   {"tgt_lang", display_name(tgt)},
                                   {"src_fence", fence_tag(src)},
                                   {"source_code", code}});
    return prompt;
}

RenderedPrompt render_agent_translate_prompt(const std::string& code, Language src, Language tgt,
                                             const std::string& entry_function,
                                             const std::vector<TestCase>& tests) {
    require_translation_inputs(code, src, tgt);
    if (tests.empty()) {
        throw Error("agent translate prompt: tests must be non-empty");
    }
    RenderedPrompt prompt;
    prompt.template_id = TemplateId::agent_translate;
    prompt.source_language = src;
    prompt.target_language = tgt;
    prompt.text = render_template(assets::kTemplateAgentTranslate,
                                  {{"src_lang", display_name(src)},
                                   {"tgt_lang", display_name(tgt)},
                                   {"src_fence", fence_tag(src)},
                                   {"tgt_fence", fence_tag(tgt)},
                                   {"entry_function", entry_function},
                                   {"tests", render_test_lines(entry_function, tests)},
                                   {"source_code", code}});
    return prompt;
}

RenderedPrompt render_agent_repair_prompt(const std::string& source_code, Language src, Language tgt,
                                          const std::string& prev_code, const TestReport& report) {
    require_translation_inputs(source_code, src, tgt);
    if (report.all_pass()) {
        throw Error("agent repair prompt: report is all-pass, nothing to repair");
    }
    std::string feedback;
    if (!report.compiled) {
        feedback += "The code failed to compile.\n";
    }
    for (const auto& c : report.case_results) {
        if (c.status == CaseStatus::pass) {
            continue;
        }
        feedback += "- case " + c.case_id + " " + to_string(c.status);
        if (!c.detail.empty()) {
            feedback += ": " + c.detail;
        }
        feedback += "\n";
    }
    if (!report.diagnostics.empty()) {
        feedback += report.diagnostics + "\n";
    }
    feedback = trim_right(std::move(feedback));

    RenderedPrompt prompt;
    prompt.template_id = TemplateId::agent_repair;
    prompt.source_language = src;
    prompt.target_language = tgt;
    prompt.text = render_template(assets::kTemplateAgentRepair,
                                  {{"src_lang", display_name(src)},
                                   {"tgt_lang", display_name(tgt)},
                                   {"src_fence", fence_tag(src)},
                                   {"tgt_fence", fence_tag(tgt)},
                                   {"prev_code", prev_code},
                                   {"feedback", feedback},
                                   {"source_code", source_code}});
    return prompt;
}

RenderedPrompt render_testgen_prompt(const std::string& code, Language src,
                                     const std::string& entry_function, std::size_t n_cases) {
    if (code.empty()) {
        throw Error("prompt: source code must be non-empty");
    }
    if (n_cases == 0) {
        throw Error("testgen prompt: n_cases must be positive");
    }
    RenderedPrompt prompt;
    prompt.template_id = TemplateId::testgen;
    prompt.source_language = src;
    prompt.target_language = src;
    prompt.text = render_template(assets::kTemplateTestgen,
                                  {{"src_lang", display_name(src)},
                                   {"src_fence", fence_tag(src)},
                                   {"entry_function", entry_function},
                                   {"n_cases", std::to_string(n_cases)},
                                   {"source_code", code}});
    return prompt;
}

ParsedCompletion parse_completion(const std::string& raw, Language target) {
    auto blocks = find_fenced_blocks(raw);

    // (1) last fenced block labeled with the target language
    for (auto it = blocks.rbegin(); it != blocks.rend(); ++it) {
        if (label_matches(it->label, target)) {
            return from_block(raw, *it);
        }
    }
    // (2) last unlabeled fenced block
    for (auto it = blocks.rbegin(); it != blocks.rend(); ++it) {
        if (it->label.empty()) {
            return from_block(raw, *it);
        }
    }
    // (3) text after the final answer marker
    std::size_t marker = raw.rfind(kAnswerMarker);
    if (marker != std::string::npos) {
        std::size_t code_begin = marker + std::string(kAnswerMarker).size();
        while (code_begin < raw.size() &&
               std::isspace(static_cast<unsigned char>(raw[code_begin]))) {
            ++code_begin;
        }
        std::size_t code_end = raw.size();
        while (code_end > code_begin &&
               std::isspace(static_cast<unsigned char>(raw[code_end - 1]))) {
            --code_end;
        }
        ParsedCompletion out;
        out.raw = raw;
        out.extraction_method = ExtractionMethod::answer_marker;
        out.code = raw.substr(code_begin, code_end - code_begin);
        out.reasoning = trim_right(raw.substr(0, marker));
        return out;
    }
    // (4) whole text
    ParsedCompletion out;
    out.raw = raw;
    out.extraction_method = ExtractionMethod::whole_text;
    out.code = raw;
    out.reasoning.clear();
    return out;
}

}  // namespace reasontrans
