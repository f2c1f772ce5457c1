#include "reasontrans/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace reasontrans {

using nlohmann::json;

namespace {

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

const json& require_field(const json& j, const char* name, const std::string& where) {
    auto it = j.find(name);
    if (it == j.end()) {
        throw SchemaError(where + ": missing field `" + name + "`");
    }
    return *it;
}

}  // namespace

std::string display_name(Language lang) {
    switch (lang) {
    case Language::Python: return "Python";
    case Language::Java: return "Java";
    case Language::Cpp: return "C++";
    }
    return "?";
}

std::string wire_name(Language lang) {
    switch (lang) {
    case Language::Python: return "python";
    case Language::Java: return "java";
    case Language::Cpp: return "cpp";
    }
    return "?";
}

Language parse_language(const std::string& text) {
    const std::string t = lower(text);
    if (t == "python" || t == "py") return Language::Python;
    if (t == "java") return Language::Java;
    if (t == "cpp" || t == "c++" || t == "cxx" || t == "cc") return Language::Cpp;
    throw SchemaError("unsupported-language: `" + text + "` (expected python, java, or cpp)");
}

std::string pair_flag(const LanguagePair& pair) {
    return wire_name(pair.first) + ":" + wire_name(pair.second);
}

LanguagePair parse_pair_flag(const std::string& text) {
    auto colon = text.find(':');
    if (colon == std::string::npos) {
        throw SchemaError("bad pair `" + text + "` (expected SRC:TGT, e.g. java:python)");
    }
    LanguagePair pair{parse_language(text.substr(0, colon)), parse_language(text.substr(colon + 1))};
    if (pair.first == pair.second) {
        throw SchemaError("bad pair `" + text + "`: source and target must differ");
    }
    return pair;
}

std::string pair_label(const LanguagePair& pair) {
    return display_name(pair.first) + " -> " + display_name(pair.second);
}

std::string to_string(CaseStatus status) {
    switch (status) {
    case CaseStatus::pass: return "pass";
    case CaseStatus::fail: return "fail";
    case CaseStatus::error: return "error";
    case CaseStatus::timeout: return "timeout";
    }
    return "?";
}

CaseStatus parse_case_status(const std::string& text) {
    if (text == "pass") return CaseStatus::pass;
    if (text == "fail") return CaseStatus::fail;
    if (text == "error") return CaseStatus::error;
    if (text == "timeout") return CaseStatus::timeout;
    throw SchemaError("unknown case status `" + text + "`");
}

json to_json(const TestSuite& suite) {
    json cases = json::array();
    for (const auto& c : suite.cases) {
        cases.push_back({{"case_id", c.case_id}, {"args", c.args}, {"expected", c.expected}});
    }
    json j{{"entry_function", suite.entry_function},
           {"equality_mode", suite.equality_mode == EqualityMode::exact ? "exact" : "float_tolerant"},
           {"cases", std::move(cases)}};
    if (suite.equality_mode == EqualityMode::float_tolerant) {
        j["epsilon"] = suite.epsilon;
    }
    return j;
}

TestSuite suite_from_json(const json& j) {
    TestSuite suite;
    suite.entry_function = require_field(j, "entry_function", "suite").get<std::string>();
    const std::string mode = require_field(j, "equality_mode", "suite").get<std::string>();
    if (mode == "exact") {
        suite.equality_mode = EqualityMode::exact;
    } else if (mode == "float_tolerant") {
        suite.equality_mode = EqualityMode::float_tolerant;
    } else {
        throw SchemaError("suite: bad `equality_mode` value `" + mode + "`");
    }
    suite.epsilon = j.value("epsilon", 1e-6);
    std::set<std::string> seen;
    for (const auto& cj : require_field(j, "cases", "suite")) {
        TestCase c;
        c.case_id = require_field(cj, "case_id", "case").get<std::string>();
        if (!seen.insert(c.case_id).second) {
            throw SchemaError("suite: duplicate case_id `" + c.case_id + "`");
        }
        for (const auto& a : require_field(cj, "args", "case")) {
            c.args.push_back(a);
        }
        c.expected = require_field(cj, "expected", "case");
        suite.cases.push_back(std::move(c));
    }
    if (suite.cases.empty()) {
        throw SchemaError("suite: `cases` must be non-empty");
    }
    return suite;
}

json to_json(const SourceProgram& program) {
    return json{{"id", program.id},
                {"language", wire_name(program.language)},
                {"code", program.code},
                {"suite", to_json(program.suite)},
                {"origin", program.origin}};
}

SourceProgram program_from_json(const json& j) {
    SourceProgram p;
    p.id = require_field(j, "id", "program").get<std::string>();
    if (p.id.empty()) {
        throw SchemaError("program: `id` must be non-empty");
    }
    p.language = parse_language(require_field(j, "language", "program").get<std::string>());
    p.code = require_field(j, "code", "program").get<std::string>();
    if (p.code.empty()) {
        throw SchemaError("program `" + p.id + "`: `code` must be non-empty");
    }
    p.suite = suite_from_json(require_field(j, "suite", "program"));
    p.origin = j.value("origin", "");
    return p;
}

json to_json(const TestReport& report) {
    json cases = json::array();
    for (const auto& c : report.case_results) {
        cases.push_back({{"case_id", c.case_id}, {"status", to_string(c.status)}, {"detail", c.detail}});
    }
    return json{{"compiled", report.compiled},
                {"total", report.total},
                {"passed", report.passed},
                {"case_results", std::move(cases)},
                {"diagnostics", report.diagnostics}};
}

TestReport report_from_json(const json& j) {
    TestReport r;
    r.compiled = require_field(j, "compiled", "report").get<bool>();
    r.total = require_field(j, "total", "report").get<std::size_t>();
    r.passed = require_field(j, "passed", "report").get<std::size_t>();
    for (const auto& cj : j.value("case_results", json::array())) {
        CaseResult c;
        c.case_id = require_field(cj, "case_id", "case_result").get<std::string>();
        c.status = parse_case_status(require_field(cj, "status", "case_result").get<std::string>());
        c.detail = cj.value("detail", "");
        r.case_results.push_back(std::move(c));
    }
    r.diagnostics = j.value("diagnostics", "");
    if (r.passed > r.total) {
        throw SchemaError("report: passed > total");
    }
    return r;
}

json to_json(const ReasoningTriplet& triplet) {
    return json{{"source_id", triplet.source_id},
                {"source_language", wire_name(triplet.source_language)},
                {"target_language", wire_name(triplet.target_language)},
                {"source_code", triplet.source_code},
                {"reasoning", triplet.reasoning},
                {"target_code", triplet.target_code},
                {"validation", to_json(triplet.validation)},
                {"token_count", triplet.token_count}};
}

ReasoningTriplet triplet_from_json(const json& j) {
    ReasoningTriplet t;
    t.source_id = require_field(j, "source_id", "triplet").get<std::string>();
    t.source_language = parse_language(require_field(j, "source_language", "triplet").get<std::string>());
    t.target_language = parse_language(require_field(j, "target_language", "triplet").get<std::string>());
    t.source_code = require_field(j, "source_code", "triplet").get<std::string>();
    t.reasoning = require_field(j, "reasoning", "triplet").get<std::string>();
    t.target_code = require_field(j, "target_code", "triplet").get<std::string>();
    t.validation = report_from_json(require_field(j, "validation", "triplet"));
    t.token_count = require_field(j, "token_count", "triplet").get<std::size_t>();
    if (t.source_language == t.target_language) {
        throw SchemaError("triplet `" + t.source_id + "`: source and target language must differ");
    }
    return t;
}

json to_json(const DatasetStats& stats) {
    json rows = json::array();
    for (const auto& [pair, ps] : stats.pairs) {
        rows.push_back({{"pair", wire_name(pair.first) + "->" + wire_name(pair.second)},
                        {"samples", ps.count},
                        {"avg_tokens", ps.mean_tokens}});
    }
    return json{{"pairs", std::move(rows)},
                {"overall", {{"samples", stats.overall_count}, {"avg_tokens", stats.overall_mean_tokens}}}};
}

std::vector<SourceProgram> load_source_programs(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error("cannot open programs file: " + path);
    }
    std::vector<SourceProgram> programs;
    std::map<std::string, std::size_t> first_line_of_id;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) {
            continue;
        }
        json j;
        try {
            j = json::parse(line);
        } catch (const json::parse_error& e) {
            throw SchemaError(path + ":" + std::to_string(line_no) + ": malformed JSON: " + e.what());
        }
        SourceProgram p;
        try {
            p = program_from_json(j);
        } catch (const SchemaError& e) {
            throw SchemaError(path + ":" + std::to_string(line_no) + ": " + e.what());
        }
        auto [it, inserted] = first_line_of_id.emplace(p.id, line_no);
        if (!inserted) {
            throw SchemaError(path + ": duplicate id `" + p.id + "` on lines " +
                              std::to_string(it->second) + " and " + std::to_string(line_no));
        }
        programs.push_back(std::move(p));
    }
    return programs;
}

std::set<std::string> load_exclusions(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error("cannot open exclusions file: " + path);
    }
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw SchemaError(path + ": malformed JSON: " + e.what());
    }
    if (!j.is_array()) {
        throw SchemaError(path + ": expected a JSON array of ids");
    }
    std::set<std::string> ids;
    for (const auto& v : j) {
        ids.insert(v.get<std::string>());
    }
    return ids;
}

FilterResult filter_corpus(const std::vector<SourceProgram>& programs,
                           const std::map<std::string, TestReport>& gold_reports,
                           const std::set<std::string>& exclusion_ids,
                           const FilterOptions& options) {
    FilterResult result;
    for (const auto& program : programs) {
        auto it = gold_reports.find(program.id);
        if (it == gold_reports.end()) {
            throw Error("missing gold report for program id `" + program.id + "`");
        }
        if (!it->second.all_pass()) {
            result.rejected.push_back({program.id, "gold-test-failure"});
        } else if (exclusion_ids.count(program.id) > 0) {
            result.rejected.push_back({program.id, "test-set-leakage"});
        } else if (program.suite.cases.size() < options.min_cases) {
            result.rejected.push_back({program.id, "insufficient-test-cases"});
        } else {
            result.kept.push_back(program);
        }
    }
    return result;
}

void write_triplets(const std::string& path, const std::vector<ReasoningTriplet>& triplets) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) {
        throw Error("cannot open for writing: " + path);
    }
    for (const auto& t : triplets) {
        out << to_json(t).dump() << '\n';
    }
    if (!out) {
        throw Error("write failure: " + path);
    }
}

std::vector<ReasoningTriplet> load_triplets(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error("cannot open triplets file: " + path);
    }
    std::vector<ReasoningTriplet> triplets;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) {
            continue;
        }
        try {
            triplets.push_back(triplet_from_json(json::parse(line)));
        } catch (const json::parse_error& e) {
            throw SchemaError(path + ":" + std::to_string(line_no) + ": malformed JSON: " + e.what());
        } catch (const SchemaError& e) {
            throw SchemaError(path + ":" + std::to_string(line_no) + ": " + e.what());
        }
    }
    return triplets;
}

DatasetStats corpus_stats(const std::vector<ReasoningTriplet>& triplets) {
    struct Acc {
        std::size_t count = 0;
        double token_sum = 0.0;
    };
    std::map<std::pair<std::string, std::string>, std::pair<LanguagePair, Acc>> acc;
    std::size_t overall = 0;
    double overall_sum = 0.0;
    for (const auto& t : triplets) {
        LanguagePair pair{t.source_language, t.target_language};
        auto key = std::make_pair(wire_name(pair.first), wire_name(pair.second));
        auto& entry = acc.try_emplace(key, pair, Acc{}).first->second;
        entry.second.count += 1;
        entry.second.token_sum += static_cast<double>(t.token_count);
        overall += 1;
        overall_sum += static_cast<double>(t.token_count);
    }
    DatasetStats stats;
    for (const auto& [key, entry] : acc) {
        PairStats ps;
        ps.count = entry.second.count;
        ps.mean_tokens = entry.second.token_sum / static_cast<double>(entry.second.count);
        stats.pairs.emplace_back(entry.first, ps);
    }
    stats.overall_count = overall;
    stats.overall_mean_tokens = overall == 0 ? 0.0 : overall_sum / static_cast<double>(overall);
    return stats;
}

}  // namespace reasontrans
