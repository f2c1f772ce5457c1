#include "reasontrans/metrics.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>

#include <nlohmann/json.hpp>

namespace reasontrans {

using nlohmann::json;

namespace {

constexpr const char* kHeaderColumns =
    "Translation Pair, Method, CA (%), APR (%), CodeBLEU (%), # Tokens, Latency (s)";

std::string fixed(double value, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", decimals, value);
    return buf;
}

// Relative change vs. baseline, e.g. "(↑27.4%)", "(↓3.2%)"; ties render as "(±0.0%)".
std::string pretty_delta(double treated, double base) {
    if (base == 0.0) {
        return treated == 0.0 ? "(±0.0%)" : "(n/a)";
    }
    const double rel = (treated - base) / base * 100.0;
    const std::string magnitude = fixed(std::fabs(rel), 1);
    if (magnitude == "0.0") {
        return "(±0.0%)";
    }
    return std::string("(") + (rel > 0 ? "↑" : "↓") + magnitude + "%)";
}

const MetricsReport* find_baseline(const std::vector<MetricsReport>& baseline, const LanguagePair& pair) {
    for (const auto& b : baseline) {
        if (b.pair == pair) {
            return &b;
        }
    }
    return nullptr;
}

std::string cell(double value, int decimals, const MetricsReport* base, double base_value) {
    std::string text = fixed(value, decimals);
    if (base != nullptr) {
        text += " " + pretty_delta(value, base_value);
    }
    return text;
}

std::vector<std::string> report_cells(const MetricsReport& r, const MetricsReport* base) {
    return {pair_label(r.pair),
            r.method,
            cell(r.ca_pct, 2, base, base ? base->ca_pct : 0),
            cell(r.apr_pct, 2, base, base ? base->apr_pct : 0),
            cell(r.codebleu_pct, 2, base, base ? base->codebleu_pct : 0),
            cell(r.avg_tokens, 2, base, base ? base->avg_tokens : 0),
            cell(r.avg_latency_s, 2, base, base ? base->avg_latency_s : 0)};
}

std::string render_csv(const std::vector<MetricsReport>& reports,
                       const std::vector<MetricsReport>& baseline) {
    std::string out = std::string(kHeaderColumns) + "\n";
    auto emit = [&](const MetricsReport& r, const MetricsReport* base) {
        auto cells = report_cells(r, base);
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i > 0) out += ", ";
            out += cells[i];
        }
        out += "\n";
    };
    for (const auto& b : baseline) {
        emit(b, nullptr);
    }
    for (const auto& r : reports) {
        emit(r, find_baseline(baseline, r.pair));
    }
    return out;
}

std::string render_md(const std::vector<MetricsReport>& reports,
                      const std::vector<MetricsReport>& baseline) {
    std::string out = "| Translation Pair | Method | CA (%) | APR (%) | CodeBLEU (%) | # Tokens | Latency (s) |\n";
    out += "|---|---|---|---|---|---|---|\n";
    auto emit = [&](const MetricsReport& r, const MetricsReport* base) {
        auto cells = report_cells(r, base);
        out += "|";
        for (const auto& c : cells) {
            out += " " + c + " |";
        }
        out += "\n";
    };
    for (const auto& b : baseline) {
        emit(b, nullptr);
    }
    for (const auto& r : reports) {
        emit(r, find_baseline(baseline, r.pair));
    }
    return out;
}

std::string render_json(const std::vector<MetricsReport>& reports,
                        const std::vector<MetricsReport>& baseline) {
    json arr = json::array();
    for (const auto& b : baseline) {
        json j = to_json(b);
        j["role"] = "baseline";
        arr.push_back(std::move(j));
    }
    for (const auto& r : reports) {
        json j = to_json(r);
        j["role"] = "treated";
        const MetricsReport* base = find_baseline(baseline, r.pair);
        if (base != nullptr) {
            auto rel = [](double t, double b) {
                return b == 0.0 ? json() : json((t - b) / b * 100.0);
            };
            j["relative_change_pct"] = {{"ca", rel(r.ca_pct, base->ca_pct)},
                                        {"apr", rel(r.apr_pct, base->apr_pct)},
                                        {"codebleu", rel(r.codebleu_pct, base->codebleu_pct)},
                                        {"tokens", rel(r.avg_tokens, base->avg_tokens)},
                                        {"latency", rel(r.avg_latency_s, base->avg_latency_s)}};
        }
        arr.push_back(std::move(j));
    }
    return arr.dump(2) + "\n";
}

}  // namespace

json to_json(const EvalRecord& record) {
    return json{{"sample_id", record.sample_id},
                {"pair", {{"source", wire_name(record.pair.first)}, {"target", wire_name(record.pair.second)}}},
                {"generated_tokens", record.generated_tokens},
                {"latency_s", record.latency_s},
                {"report", to_json(record.report)},
                {"hypothesis_code", record.hypothesis_code},
                {"reference_code", record.reference_code}};
}

EvalRecord eval_record_from_json(const json& j) {
    EvalRecord r;
    r.sample_id = j.at("sample_id").get<std::string>();
    r.pair = {parse_language(j.at("pair").at("source").get<std::string>()),
              parse_language(j.at("pair").at("target").get<std::string>())};
    r.generated_tokens = j.at("generated_tokens").get<std::size_t>();
    r.latency_s = j.at("latency_s").get<double>();
    r.report = report_from_json(j.at("report"));
    r.hypothesis_code = j.at("hypothesis_code").get<std::string>();
    r.reference_code = j.at("reference_code").get<std::string>();
    return r;
}

json to_json(const MetricsReport& report) {
    return json{{"pair", {{"source", wire_name(report.pair.first)}, {"target", wire_name(report.pair.second)}}},
                {"method", report.method},
                {"n_samples", report.n_samples},
                {"ca_pct", report.ca_pct},
                {"apr_pct", report.apr_pct},
                {"codebleu_pct", report.codebleu_pct},
                {"avg_tokens", report.avg_tokens},
                {"avg_latency_s", report.avg_latency_s}};
}

MetricsReport metrics_report_from_json(const json& j) {
    MetricsReport r;
    r.pair = {parse_language(j.at("pair").at("source").get<std::string>()),
              parse_language(j.at("pair").at("target").get<std::string>())};
    r.method = j.value("method", "treated");
    r.n_samples = j.at("n_samples").get<std::size_t>();
    r.ca_pct = j.at("ca_pct").get<double>();
    r.apr_pct = j.at("apr_pct").get<double>();
    r.codebleu_pct = j.at("codebleu_pct").get<double>();
    r.avg_tokens = j.at("avg_tokens").get<double>();
    r.avg_latency_s = j.at("avg_latency_s").get<double>();
    return r;
}

void write_eval_records(const std::string& path, const std::vector<EvalRecord>& records) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) {
        throw Error("cannot open for writing: " + path);
    }
    for (const auto& r : records) {
        out << to_json(r).dump() << '\n';
    }
}

std::vector<EvalRecord> load_eval_records(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error("cannot open records file: " + path);
    }
    std::vector<EvalRecord> records;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) {
            continue;
        }
        try {
            records.push_back(eval_record_from_json(json::parse(line)));
        } catch (const json::exception& e) {
            throw SchemaError(path + ":" + std::to_string(line_no) + ": " + e.what());
        }
    }
    return records;
}

double computational_accuracy(const std::vector<EvalRecord>& records) {
    if (records.empty()) {
        throw Error("computational_accuracy: empty input");
    }
    std::size_t passed = 0;
    for (const auto& r : records) {
        if (r.report.all_pass()) {
            ++passed;
        }
    }
    return 100.0 * static_cast<double>(passed) / static_cast<double>(records.size());
}

double average_pass_rate(const std::vector<EvalRecord>& records) {
    if (records.empty()) {
        throw Error("average_pass_rate: empty input");
    }
    double sum = 0.0;
    for (const auto& r : records) {
        if (r.report.total == 0) {
            throw Error("average_pass_rate: record `" + r.sample_id + "` has a zero-total report");
        }
        sum += static_cast<double>(r.report.passed) / static_cast<double>(r.report.total);
    }
    return 100.0 * sum / static_cast<double>(records.size());
}

double avg_tokens(const std::vector<EvalRecord>& records) {
    if (records.empty()) {
        throw Error("avg_tokens: empty input");
    }
    double sum = 0.0;
    for (const auto& r : records) {
        sum += static_cast<double>(r.generated_tokens);
    }
    return sum / static_cast<double>(records.size());
}

double avg_latency(const std::vector<EvalRecord>& records) {
    if (records.empty()) {
        throw Error("avg_latency: empty input");
    }
    double sum = 0.0;
    for (const auto& r : records) {
        sum += r.latency_s;
    }
    return sum / static_cast<double>(records.size());
}

MetricsReport aggregate_report(const std::vector<EvalRecord>& records,
                               const std::vector<CodeBleuScore>& codebleu_scores) {
    if (records.empty()) {
        throw Error("aggregate_report: empty input");
    }
    if (records.size() != codebleu_scores.size()) {
        throw Error("aggregate_report: records and codebleu scores are misaligned");
    }
    MetricsReport report;
    report.pair = records.front().pair;
    for (const auto& r : records) {
        if (r.pair != report.pair) {
            throw Error("aggregate_report: records span multiple pairs; aggregate per pair");
        }
    }
    report.n_samples = records.size();
    report.ca_pct = computational_accuracy(records);
    report.apr_pct = average_pass_rate(records);
    double cb = 0.0;
    for (const auto& s : codebleu_scores) {
        cb += s.total;
    }
    report.codebleu_pct = 100.0 * cb / static_cast<double>(codebleu_scores.size());
    report.avg_tokens = avg_tokens(records);
    report.avg_latency_s = avg_latency(records);
    return report;
}

std::vector<MetricsReport> rescore_records(const std::vector<EvalRecord>& records) {
    std::map<std::pair<std::string, std::string>, std::vector<std::size_t>> by_pair;
    for (std::size_t i = 0; i < records.size(); ++i) {
        by_pair[{wire_name(records[i].pair.first), wire_name(records[i].pair.second)}].push_back(i);
    }
    std::vector<MetricsReport> reports;
    for (const auto& [key, indices] : by_pair) {
        std::vector<EvalRecord> group;
        std::vector<CodeBleuScore> scores;
        for (std::size_t i : indices) {
            const auto& r = records[i];
            group.push_back(r);
            CodeBleuScore score;
            if (!r.hypothesis_code.empty() && !r.reference_code.empty()) {
                try {
                    score = codebleu(r.hypothesis_code, r.reference_code, r.pair.second);
                } catch (const Error&) {
                    score = CodeBleuScore{};  // degraded sample keeps a zero score
                }
            }
            scores.push_back(score);
        }
        reports.push_back(aggregate_report(group, scores));
    }
    return reports;
}

ReportFormat parse_report_format(const std::string& text) {
    if (text == "csv") return ReportFormat::csv;
    if (text == "md" || text == "markdown") return ReportFormat::md;
    if (text == "json") return ReportFormat::json;
    throw Error("unknown report format `" + text + "` (expected csv, md, or json)");
}

std::string render_report(const std::vector<MetricsReport>& reports, ReportFormat format,
                          const std::vector<MetricsReport>& baseline) {
    if (reports.empty()) {
        throw Error("render_report: no reports to render");
    }
    switch (format) {
    case ReportFormat::csv: return render_csv(reports, baseline);
    case ReportFormat::md: return render_md(reports, baseline);
    case ReportFormat::json: return render_json(reports, baseline);
    }
    throw Error("render_report: bad format");
}

}  // namespace reasontrans
