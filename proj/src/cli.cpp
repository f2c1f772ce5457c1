#include "reasontrans/cli.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "reasontrans/parallel.hpp"

namespace reasontrans {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

bool g_log_json = false;

void log_info(const std::string& msg, json extra = json::object()) {
    if (g_log_json) {
        extra["level"] = "info";
        extra["msg"] = msg;
        extra["ts"] = std::chrono::duration<double>(
                          std::chrono::system_clock::now().time_since_epoch())
                          .count();
        std::cerr << extra.dump() << "\n";
    } else {
        std::cerr << msg << "\n";
    }
}

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error("cannot open file: " + path);
    }
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw SchemaError(path + ": malformed JSON: " + e.what());
    }
    return j;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::trunc | std::ios::binary);
    if (!out) {
        throw Error("cannot open for writing: " + path);
    }
    out << content;
}

std::vector<MetricsReport> load_reports(const std::string& path) {
    const json j = load_json_file(path);
    std::vector<MetricsReport> reports;
    if (!j.is_array()) {
        throw SchemaError(path + ": expected a JSON array of reports");
    }
    for (const auto& r : j) {
        reports.push_back(metrics_report_from_json(r));
    }
    return reports;
}

void sort_reports(std::vector<MetricsReport>& reports) {
    std::sort(reports.begin(), reports.end(), [](const MetricsReport& a, const MetricsReport& b) {
        return std::make_pair(wire_name(a.pair.first), wire_name(a.pair.second)) <
               std::make_pair(wire_name(b.pair.first), wire_name(b.pair.second));
    });
}

void write_report_files(const std::string& out_dir, std::vector<MetricsReport> reports,
                        const std::vector<MetricsReport>& baseline) {
    sort_reports(reports);
    write_text_file(out_dir + "/report.csv", render_report(reports, ReportFormat::csv, baseline));
    write_text_file(out_dir + "/report.md", render_report(reports, ReportFormat::md, baseline));
    write_text_file(out_dir + "/report.json", render_report(reports, ReportFormat::json, baseline));
}

int run_validate_corpus(const std::string& programs_path, const std::string& exclusions_path,
                        const std::string& out_dir, const HarnessConfig& config) {
    const auto programs = load_source_programs(programs_path);
    std::set<std::string> exclusions;
    if (!exclusions_path.empty()) {
        exclusions = load_exclusions(exclusions_path);
    }
    log_info("validating " + std::to_string(programs.size()) + " programs",
             {{"programs", programs.size()}});

    std::vector<TestReport> reports(programs.size());
    parallel_for(
        programs.size(),
        [&](std::size_t i) {
            reports[i] = run_suite(programs[i].code, programs[i].suite, programs[i].language,
                                   config.limits, config.toolchain);
        },
        config.concurrency);

    std::map<std::string, TestReport> gold_reports;
    for (std::size_t i = 0; i < programs.size(); ++i) {
        gold_reports[programs[i].id] = reports[i];
    }
    FilterOptions options;
    options.min_cases = config.min_cases;
    const FilterResult filtered = filter_corpus(programs, gold_reports, exclusions, options);

    fs::create_directories(out_dir);
    json gold = json::object();
    for (const auto& [id, report] : gold_reports) {
        gold[id] = to_json(report);
    }
    write_text_file(out_dir + "/gold_reports.json", gold.dump(2) + "\n");
    {
        std::ofstream kept(out_dir + "/kept.jsonl", std::ios::trunc);
        for (const auto& p : filtered.kept) {
            kept << to_json(p).dump() << "\n";
        }
        std::ofstream rejected(out_dir + "/rejected.jsonl", std::ios::trunc);
        for (const auto& r : filtered.rejected) {
            rejected << json{{"id", r.id}, {"reason", r.reason}}.dump() << "\n";
        }
    }
    log_info("kept " + std::to_string(filtered.kept.size()) + ", rejected " +
                 std::to_string(filtered.rejected.size()),
             {{"kept", filtered.kept.size()}, {"rejected", filtered.rejected.size()}});
    return 0;
}

int run_synthesize(const std::string& programs_path, const std::string& out_dir,
                   const std::string& checkpoint, bool do_resume, const HarnessConfig& config) {
    const auto programs = load_source_programs(programs_path);
    SynthesisConfig synthesis;
    synthesis.pairs = config.pairs;
    synthesis.attempts_per_sample = config.attempts_per_sample;
    synthesis.limits = config.limits;
    synthesis.endpoint = config.endpoint;
    synthesis.toolchain = config.toolchain;
    synthesis.output_path = out_dir;

    fs::create_directories(out_dir);
    const std::string checkpoint_path =
        checkpoint.empty() ? out_dir + "/checkpoint.jsonl" : checkpoint;
    const SynthesisResult result = do_resume
                                       ? resume(checkpoint_path, programs, synthesis)
                                       : synthesize_dataset(programs, synthesis, checkpoint_path);

    write_triplets(out_dir + "/triplets.jsonl", result.triplets);
    {
        std::ofstream rej(out_dir + "/rejections.jsonl", std::ios::trunc);
        for (const auto& r : result.rejections) {
            rej << to_json(r).dump() << "\n";
        }
    }
    write_text_file(out_dir + "/stats.json", to_json(corpus_stats(result.triplets)).dump(2) + "\n");
    log_info("synthesized " + std::to_string(result.triplets.size()) + " triplets, " +
                 std::to_string(result.rejections.size()) + " rejections",
             {{"triplets", result.triplets.size()}, {"rejections", result.rejections.size()}});
    return 0;
}

int run_evaluate(const std::string& programs_path, const std::vector<std::string>& pair_flags,
                 const std::string& out_dir, const std::string& baseline_path,
                 const HarnessConfig& config) {
    EvalConfig eval;
    eval.dataset_path = programs_path;
    eval.endpoint = config.endpoint;
    eval.endpoint.seed = config.seed >= 0 ? config.seed : eval.endpoint.seed;
    eval.prompt_kind = config.prompt_kind;
    eval.limits = config.limits;
    eval.toolchain = config.toolchain;
    eval.seed = config.seed;
    eval.out_dir = out_dir;
    eval.concurrency = config.concurrency;
    for (const auto& f : pair_flags) {
        eval.pairs.push_back(parse_pair_flag(f));
    }
    if (eval.pairs.empty()) {
        eval.pairs = config.pairs;
    }
    if (eval.pairs.empty()) {
        throw Error("evaluate: no pairs given (use --pair SRC:TGT or the config file)");
    }

    const auto programs = load_source_programs(programs_path);
    ChatClient client(eval.endpoint);

    fs::create_directories(out_dir);
    std::vector<MetricsReport> reports;
    std::ofstream records_out(out_dir + "/records.jsonl", std::ios::trunc);
    for (const auto& pair : eval.pairs) {
        log_info("evaluating " + pair_label(pair));
        PairEvaluation evaluation = evaluate_pair(eval, pair, client, programs);
        for (const auto& r : evaluation.records) {
            records_out << to_json(r).dump() << "\n";
        }
        reports.push_back(evaluation.report);
    }
    records_out.close();

    std::vector<MetricsReport> baseline;
    if (!baseline_path.empty()) {
        baseline = load_reports(baseline_path);
    }
    write_report_files(out_dir, reports, baseline);
    log_info("wrote reports to " + out_dir);
    return 0;
}

int run_agent_cmd(const std::string& programs_path, const std::string& pair_flag_text,
                  const std::string& out_dir, const HarnessConfig& config) {
    const LanguagePair pair = parse_pair_flag(pair_flag_text);
    const auto programs = load_source_programs(programs_path);

    AgentConfig agent;
    agent.n_generated_tests = config.agent_tests;
    agent.max_rounds = config.agent_max_rounds;
    agent.filter_generated_tests = config.agent_filter_tests;
    agent.limits = config.limits;
    agent.endpoint = config.endpoint;
    agent.toolchain = config.toolchain;

    ChatClient client(agent.endpoint);

    // Reference translations (same origin, target language) for CodeBLEU.
    std::map<std::string, const SourceProgram*> references;
    for (const auto& p : programs) {
        if (p.language == pair.second) {
            references[p.origin.empty() ? p.id : p.origin] = &p;
        }
    }

    fs::create_directories(out_dir);
    std::ofstream traces_out(out_dir + "/traces.jsonl", std::ios::trunc);
    std::vector<EvalRecord> records;
    std::vector<CodeBleuScore> scores;
    for (const auto& program : programs) {
        if (program.language != pair.first) {
            continue;
        }
        const AgentTrace trace = run_agent(program, pair.second, agent, client);
        traces_out << to_json(trace).dump() << "\n";

        EvalRecord record;
        record.sample_id = program.id;
        record.pair = pair;
        record.generated_tokens = trace.total_tokens;
        record.latency_s = trace.total_latency_s;
        record.report = trace.final_report;
        if (record.report.total == 0) {
            record.report.total = program.suite.cases.size();
        }
        record.hypothesis_code = trace.final_code;
        const std::string key = program.origin.empty() ? program.id : program.origin;
        CodeBleuScore score;
        if (auto it = references.find(key); it != references.end()) {
            record.reference_code = it->second->code;
            if (!record.hypothesis_code.empty()) {
                try {
                    score = codebleu(record.hypothesis_code, record.reference_code, pair.second);
                } catch (const Error&) {
                }
            }
        }
        records.push_back(std::move(record));
        scores.push_back(score);
    }
    traces_out.close();
    if (records.empty()) {
        throw Error("agent: no programs in the dataset match the pair source language");
    }
    write_eval_records(out_dir + "/records.jsonl", records);
    write_report_files(out_dir, {aggregate_report(records, scores)}, {});
    log_info("agent run complete: " + std::to_string(records.size()) + " samples");
    return 0;
}

int run_reward_serve(const std::string& bind, const HarnessConfig& config) {
    RewardServiceDefaults defaults;
    defaults.limits = config.limits;
    defaults.toolchain = config.toolchain;
    defaults.length = config.length;
    defaults.weights = config.weights;
    defaults.concurrency = config.concurrency;
    log_info("serving rewards on " + bind);
    serve_rewards(bind, defaults);
    return 0;
}

int run_metrics(const std::string& records_path, const std::string& format,
                const std::string& out_dir, const std::string& baseline_path) {
    const auto records = load_eval_records(records_path);
    if (records.empty()) {
        throw Error("metrics: no records in " + records_path);
    }
    std::vector<MetricsReport> reports = rescore_records(records);
    std::vector<MetricsReport> baseline;
    if (!baseline_path.empty()) {
        baseline = load_reports(baseline_path);
    }
    if (!out_dir.empty()) {
        fs::create_directories(out_dir);
        write_report_files(out_dir, reports, baseline);
        log_info("wrote reports to " + out_dir);
    } else {
        sort_reports(reports);
        std::cout << render_report(reports, parse_report_format(format), baseline);
    }
    return 0;
}

}  // namespace

HarnessConfig harness_config_from_json(const json& j) {
    HarnessConfig config;
    if (j.contains("endpoint")) {
        config.endpoint = endpoint_config_from_json(j["endpoint"]);
    }
    apply_endpoint_env(config.endpoint);
    if (j.contains("limits")) {
        config.limits = limits_from_json(j["limits"]);
    }
    if (j.contains("toolchain")) {
        config.toolchain = toolchain_from_json(j["toolchain"]);
    }
    if (j.contains("length")) {
        config.length = length_config_from_json(j["length"]);
    }
    if (j.contains("weights")) {
        config.weights = weights_from_json(j["weights"]);
    }
    for (const auto& p : j.value("pairs", json::array())) {
        config.pairs.push_back(parse_pair_flag(p.get<std::string>()));
    }
    if (j.contains("prompt_kind")) {
        const std::string kind = j["prompt_kind"].get<std::string>();
        if (kind == "sft_style") {
            config.prompt_kind = TemplateId::sft_style;
        } else if (kind == "synthesis") {
            config.prompt_kind = TemplateId::synthesis;
        } else {
            throw SchemaError("config: bad `prompt_kind` value `" + kind + "`");
        }
    }
    config.seed = j.value("seed", config.seed);
    config.min_cases = j.value("min_cases", config.min_cases);
    config.attempts_per_sample = j.value("attempts_per_sample", config.attempts_per_sample);
    config.concurrency = j.value("concurrency", config.concurrency);
    if (j.contains("agent")) {
        const auto& a = j["agent"];
        config.agent_tests = a.value("n_generated_tests", config.agent_tests);
        config.agent_max_rounds = a.value("max_rounds", config.agent_max_rounds);
        config.agent_filter_tests = a.value("filter_generated_tests", config.agent_filter_tests);
    }
    return config;
}

HarnessConfig load_harness_config(const std::string& path) {
    if (path.empty()) {
        HarnessConfig config;
        apply_endpoint_env(config.endpoint);
        return config;
    }
    return harness_config_from_json(load_json_file(path));
}

int cli_main(int argc, const char* const* argv) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) {
        args.emplace_back(argv[i]);
    }
    return cli_main(args);
}

int cli_main(const std::vector<std::string>& args) {
    CLI::App app{"reasontrans: code-translation data synthesis, rewards, and evaluation"};
    app.require_subcommand(1);
    g_log_json = false;
    app.add_flag("--log-json", g_log_json, "emit structured JSON log lines on stderr");

    std::string config_path;
    app.add_option("--config", config_path, "harness config JSON (shared across subcommands)");

    auto* validate = app.add_subcommand("validate-corpus",
                                        "run gold suites and apply corpus filtering");
    std::string v_programs, v_exclusions, v_out = "out";
    validate->add_option("--programs", v_programs, "programs.jsonl")->required();
    validate->add_option("--exclusions", v_exclusions, "exclusions.json (leakage id list)");
    validate->add_option("--out", v_out, "output directory");

    auto* synthesize = app.add_subcommand("synthesize",
                                          "build reasoning triplets through the gate chain");
    std::string s_programs, s_out = "out", s_checkpoint;
    bool s_resume = false;
    synthesize->add_option("--programs", s_programs, "programs.jsonl (corpus-filtered)")->required();
    synthesize->add_option("--out", s_out, "output directory");
    synthesize->add_option("--checkpoint", s_checkpoint, "checkpoint path (default OUT/checkpoint.jsonl)");
    synthesize->add_flag("--resume", s_resume, "resume from the checkpoint");

    auto* evaluate = app.add_subcommand("evaluate", "translate and score a parallel dataset");
    std::string e_programs, e_out = "out", e_baseline;
    std::vector<std::string> e_pairs;
    evaluate->add_option("--programs", e_programs, "parallel dataset programs.jsonl")->required();
    evaluate->add_option("--pair", e_pairs, "translation pair SRC:TGT (repeatable)");
    evaluate->add_option("--out", e_out, "output directory");
    evaluate->add_option("--baseline", e_baseline, "baseline report.json for delta annotations");

    auto* agent = app.add_subcommand("agent", "test-guided translation with bounded repair rounds");
    std::string a_programs, a_pair, a_out = "out";
    agent->add_option("--programs", a_programs, "programs.jsonl")->required();
    agent->add_option("--pair", a_pair, "translation pair SRC:TGT")->required();
    agent->add_option("--out", a_out, "output directory");

    auto* serve = app.add_subcommand("reward-serve", "serve execution/length rewards over HTTP");
    std::string r_bind = "127.0.0.1:8790";
    serve->add_option("--bind", r_bind, "bind address HOST:PORT");

    auto* metrics = app.add_subcommand("metrics", "re-score stored evaluation records offline");
    std::string m_records, m_format = "csv", m_out, m_baseline;
    metrics->add_option("--records", m_records, "records.jsonl")->required();
    metrics->add_option("--format", m_format, "csv|md|json (stdout mode)");
    metrics->add_option("--out", m_out, "write report files to this directory instead");
    metrics->add_option("--baseline", m_baseline, "baseline report.json for delta annotations");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());  // CLI11 convention
        app.parse(std::move(reversed));
    } catch (const CLI::CallForHelp& e) {
        std::cout << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n" << app.help() << "\n";
        return 2;
    }

    try {
        const HarnessConfig config = load_harness_config(config_path);
        if (validate->parsed()) {
            return run_validate_corpus(v_programs, v_exclusions, v_out, config);
        }
        if (synthesize->parsed()) {
            return run_synthesize(s_programs, s_out, s_checkpoint, s_resume, config);
        }
        if (evaluate->parsed()) {
            return run_evaluate(e_programs, e_pairs, e_out, e_baseline, config);
        }
        if (agent->parsed()) {
            return run_agent_cmd(a_programs, a_pair, a_out, config);
        }
        if (serve->parsed()) {
            return run_reward_serve(r_bind, config);
        }
        if (metrics->parsed()) {
            return run_metrics(m_records, m_format, m_out, m_baseline);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}

}  // namespace reasontrans
