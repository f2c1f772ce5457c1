#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "reasontrans/codebleu.hpp"
#include "reasontrans/corpus.hpp"

namespace reasontrans {

/// One evaluated translation sample.
struct EvalRecord {
    std::string sample_id;
    LanguagePair pair{Language::Java, Language::Python};
    std::size_t generated_tokens = 0;  // T_i
    double latency_s = 0.0;            // t_i
    TestReport report;
    std::string hypothesis_code;
    std::string reference_code;
};

struct MetricsReport {
    LanguagePair pair{Language::Java, Language::Python};
    std::string method = "treated";
    std::size_t n_samples = 0;
    double ca_pct = 0.0;
    double apr_pct = 0.0;
    double codebleu_pct = 0.0;
    double avg_tokens = 0.0;
    double avg_latency_s = 0.0;
};

nlohmann::json to_json(const EvalRecord& record);
EvalRecord eval_record_from_json(const nlohmann::json& j);
nlohmann::json to_json(const MetricsReport& report);
MetricsReport metrics_report_from_json(const nlohmann::json& j);

void write_eval_records(const std::string& path, const std::vector<EvalRecord>& records);
std::vector<EvalRecord> load_eval_records(const std::string& path);

/// 100 x fraction of records whose report compiled and passed every case.
double computational_accuracy(const std::vector<EvalRecord>& records);

/// 100 x mean over records of passed/total. Throws on empty input or a
/// zero-total report.
double average_pass_rate(const std::vector<EvalRecord>& records);

double avg_tokens(const std::vector<EvalRecord>& records);
double avg_latency(const std::vector<EvalRecord>& records);

/// Assembles the five metrics for one translation pair. Records and scores are
/// aligned by index; mixed pairs or misaligned lengths are errors.
MetricsReport aggregate_report(const std::vector<EvalRecord>& records,
                               const std::vector<CodeBleuScore>& codebleu_scores);

/// Recomputes CodeBLEU from the stored hypothesis/reference code and aggregates.
/// Used by offline re-scoring; deterministic, so it reproduces the original report.
std::vector<MetricsReport> rescore_records(const std::vector<EvalRecord>& records);

enum class ReportFormat { csv, md, json };

ReportFormat parse_report_format(const std::string& text);

/// Renders reports. Column names follow the fixed header contract
/// "Translation Pair, Method, CA (%), APR (%), CodeBLEU (%), # Tokens, Latency (s)".
/// When a baseline is given, each report row matching a baseline pair carries
/// signed relative-change annotations and the baseline rows are emitted first.
std::string render_report(const std::vector<MetricsReport>& reports, ReportFormat format,
                          const std::vector<MetricsReport>& baseline = {});

}  // namespace reasontrans
