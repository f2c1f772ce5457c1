#pragma once

#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "reasontrans/error.hpp"

namespace reasontrans {

enum class Language { Python, Java, Cpp };

/// Display name as it appears in prompts: "Python", "Java", "C++".
std::string display_name(Language lang);
/// Stable lowercase name used in JSON and on the command line: "python", "java", "cpp".
std::string wire_name(Language lang);
/// Accepts wire names plus common spellings ("Python", "C++", "cxx"), case-insensitive.
Language parse_language(const std::string& text);

constexpr Language kAllLanguages[] = {Language::Python, Language::Java, Language::Cpp};

using LanguagePair = std::pair<Language, Language>;

/// "src:tgt" as used by --pair flags, e.g. "java:python".
std::string pair_flag(const LanguagePair& pair);
LanguagePair parse_pair_flag(const std::string& text);
/// "Java -> Python" as used in report rows.
std::string pair_label(const LanguagePair& pair);

enum class EqualityMode { exact, float_tolerant };

struct TestCase {
    std::string case_id;
    std::vector<nlohmann::json> args;  // canonical JSON values
    nlohmann::json expected;
};

struct TestSuite {
    std::string entry_function;
    std::vector<TestCase> cases;
    EqualityMode equality_mode = EqualityMode::exact;
    double epsilon = 1e-6;  // used when equality_mode == float_tolerant
};

struct SourceProgram {
    std::string id;
    Language language = Language::Python;
    std::string code;
    TestSuite suite;
    std::string origin;  // provenance; parallel variants across languages share it
};

enum class CaseStatus { pass, fail, error, timeout };

std::string to_string(CaseStatus status);
CaseStatus parse_case_status(const std::string& text);

struct CaseResult {
    std::string case_id;
    CaseStatus status = CaseStatus::error;
    std::string detail;
};

/// Outcome of running one candidate against one suite.
/// compiled == false implies passed == 0; total always equals the suite size.
struct TestReport {
    bool compiled = false;
    std::size_t total = 0;
    std::size_t passed = 0;
    std::vector<CaseResult> case_results;
    std::string diagnostics;

    bool all_pass() const { return compiled && total > 0 && passed == total; }
};

struct ReasoningTriplet {
    std::string source_id;
    Language source_language = Language::Python;
    Language target_language = Language::Java;
    std::string source_code;
    std::string reasoning;
    std::string target_code;
    TestReport validation;
    std::size_t token_count = 0;
};

struct PairStats {
    std::size_t count = 0;
    double mean_tokens = 0.0;
};

struct DatasetStats {
    std::vector<std::pair<LanguagePair, PairStats>> pairs;  // sorted by wire names
    std::size_t overall_count = 0;
    double overall_mean_tokens = 0.0;
};

// --- JSON (de)serialization; field names are part of the file contracts ---

nlohmann::json to_json(const TestSuite& suite);
nlohmann::json to_json(const SourceProgram& program);
nlohmann::json to_json(const TestReport& report);
nlohmann::json to_json(const ReasoningTriplet& triplet);
nlohmann::json to_json(const DatasetStats& stats);

TestSuite suite_from_json(const nlohmann::json& j);
SourceProgram program_from_json(const nlohmann::json& j);
TestReport report_from_json(const nlohmann::json& j);
ReasoningTriplet triplet_from_json(const nlohmann::json& j);

// --- Operations ---

/// Reads programs.jsonl (one JSON object per line), preserving file order.
/// Throws SchemaError with the line number on malformed lines and on duplicate ids.
std::vector<SourceProgram> load_source_programs(const std::string& path);

/// Reads exclusions.json (a JSON array of ids).
std::set<std::string> load_exclusions(const std::string& path);

struct FilterOptions {
    std::size_t min_cases = 10;
};

struct CorpusRejection {
    std::string id;
    std::string reason;  // "gold-test-failure" | "test-set-leakage" | "insufficient-test-cases"
};

struct FilterResult {
    std::vector<SourceProgram> kept;
    std::vector<CorpusRejection> rejected;
};

/// Partitions programs into kept/rejected. A program is kept iff its gold report
/// is all-pass, its id is not excluded, and its suite has at least min_cases cases.
/// Gate order when several apply: gold-test-failure, test-set-leakage,
/// insufficient-test-cases. Throws Error if a program id has no gold report.
FilterResult filter_corpus(const std::vector<SourceProgram>& programs,
                           const std::map<std::string, TestReport>& gold_reports,
                           const std::set<std::string>& exclusion_ids,
                           const FilterOptions& options = {});

void write_triplets(const std::string& path, const std::vector<ReasoningTriplet>& triplets);
std::vector<ReasoningTriplet> load_triplets(const std::string& path);

/// Per-pair sample counts and mean token counts plus the overall row.
/// Empty input yields zero rows, not an error.
DatasetStats corpus_stats(const std::vector<ReasoningTriplet>& triplets);

}  // namespace reasontrans
