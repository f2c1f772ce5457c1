#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <nlohmann/json.hpp>

#include "reasontrans/codebleu.hpp"
#include "reasontrans/metrics.hpp"
#include "reasontrans/prompt_kit.hpp"
#include "reasontrans/reward.hpp"

namespace py = pybind11;
using namespace reasontrans;
using nlohmann::json;

namespace {

TestSuite suite_from_json_text(const std::string& text) {
    return suite_from_json(json::parse(text));
}

std::vector<TestSuite> suites_from_json_text(const std::vector<std::string>& texts) {
    std::vector<TestSuite> suites;
    suites.reserve(texts.size());
    for (const auto& t : texts) {
        suites.push_back(suite_from_json_text(t));
    }
    return suites;
}

LengthRewardConfig make_length_config(std::size_t max_length, double tolerance,
                                      const std::string& unit, const std::string& scope) {
    json j{{"max_length", max_length}, {"tolerance", tolerance}, {"length_unit", unit},
           {"scope", scope}};
    return length_config_from_json(j);
}

py::dict report_to_dict(const TestReport& report) {
    py::dict out;
    out["compiled"] = report.compiled;
    out["total"] = report.total;
    out["passed"] = report.passed;
    py::list cases;
    for (const auto& c : report.case_results) {
        py::dict cd;
        cd["case_id"] = c.case_id;
        cd["status"] = to_string(c.status);
        cd["detail"] = c.detail;
        cases.append(cd);
    }
    out["case_results"] = cases;
    out["diagnostics"] = report.diagnostics;
    return out;
}

}  // namespace

PYBIND11_MODULE(_reasontrans, m) {
    m.doc() = "Execution-based rewards, CodeBLEU, and completion parsing for code translation";

    m.def("count_tokens",
          [](const std::string& text, const std::string& spec) {
              return count_tokens(text, parse_tokenizer_spec(spec));
          },
          py::arg("text"), py::arg("spec") = "whitespace");

    m.def("length_reward_value", &length_reward_value, py::arg("l_c"), py::arg("l_g"),
          py::arg("max_length"), py::arg("tolerance") = 0.2,
          "Piecewise length reward for one (completion length, reference length) pair");

    m.def("length_reward",
          [](const std::vector<std::string>& completions, const std::vector<std::string>& references,
             std::size_t max_length, double tolerance, const std::string& unit) {
              return length_reward(completions, references,
                                   make_length_config(max_length, tolerance, unit, "full_completion"));
          },
          py::arg("completions"), py::arg("references"), py::arg("max_length") = 4096,
          py::arg("tolerance") = 0.2, py::arg("unit") = "tokens");

    m.def("execution_reward",
          [](const std::vector<std::string>& completions, const std::string& language,
             const std::vector<std::string>& suites_json, double wall_timeout_s,
             double per_case_timeout_s) {
              ExecLimits limits;
              limits.wall_timeout_s = wall_timeout_s;
              limits.per_case_timeout_s = std::min(per_case_timeout_s, wall_timeout_s);
              py::gil_scoped_release release;
              return execution_reward(completions, parse_language(language),
                                      suites_from_json_text(suites_json), limits);
          },
          py::arg("completions"), py::arg("language"), py::arg("suites_json"),
          py::arg("wall_timeout_s") = 10.0, py::arg("per_case_timeout_s") = 5.0,
          "Per-completion passed/total reward; 0 on any compile or harness failure");

    m.def("combined_reward",
          [](const std::vector<std::string>& completions, const std::vector<std::string>& references,
             const std::string& language, const std::vector<std::string>& suites_json,
             std::size_t max_length, double tolerance, const std::string& unit,
             const std::string& scope, double w_exec, double w_len, double wall_timeout_s,
             double per_case_timeout_s) {
              ExecLimits limits;
              limits.wall_timeout_s = wall_timeout_s;
              limits.per_case_timeout_s = std::min(per_case_timeout_s, wall_timeout_s);
              RewardWeights weights{w_exec, w_len};
              std::vector<RewardBreakdown> breakdowns;
              {
                  py::gil_scoped_release release;
                  breakdowns = combined_reward(completions, references, parse_language(language),
                                               suites_from_json_text(suites_json),
                                               make_length_config(max_length, tolerance, unit, scope),
                                               weights, limits);
              }
              py::list out;
              for (const auto& b : breakdowns) {
                  py::dict d;
                  d["execution"] = b.execution;
                  d["length"] = b.length;
                  d["combined"] = b.combined;
                  d["weights"] = py::make_tuple(b.weights.execution, b.weights.length);
                  out.append(d);
              }
              return out;
          },
          py::arg("completions"), py::arg("references"), py::arg("language"), py::arg("suites_json"),
          py::arg("max_length") = 4096, py::arg("tolerance") = 0.2, py::arg("unit") = "tokens",
          py::arg("scope") = "full_completion", py::arg("w_exec") = 1.0, py::arg("w_len") = 1.0,
          py::arg("wall_timeout_s") = 10.0, py::arg("per_case_timeout_s") = 5.0);

    m.def("run_suite",
          [](const std::string& code, const std::string& suite_json, const std::string& language,
             double wall_timeout_s, double per_case_timeout_s) {
              ExecLimits limits;
              limits.wall_timeout_s = wall_timeout_s;
              limits.per_case_timeout_s = std::min(per_case_timeout_s, wall_timeout_s);
              TestReport report;
              {
                  py::gil_scoped_release release;
                  report = run_suite(code, suite_from_json_text(suite_json),
                                     parse_language(language), limits);
              }
              return report_to_dict(report);
          },
          py::arg("code"), py::arg("suite_json"), py::arg("language"),
          py::arg("wall_timeout_s") = 10.0, py::arg("per_case_timeout_s") = 5.0);

    m.def("parse_completion",
          [](const std::string& raw, const std::string& language) {
              const ParsedCompletion parsed = parse_completion(raw, parse_language(language));
              py::dict out;
              out["reasoning"] = parsed.reasoning;
              out["code"] = parsed.code;
              out["extraction_method"] = to_string(parsed.extraction_method);
              return out;
          },
          py::arg("raw"), py::arg("language"));

    m.def("render_synthesis_prompt",
          [](const std::string& code, const std::string& src, const std::string& tgt) {
              return render_synthesis_prompt(code, parse_language(src), parse_language(tgt)).text;
          },
          py::arg("code"), py::arg("src"), py::arg("tgt"));

    m.def("render_sft_style_prompt",
          [](const std::string& code, const std::string& src, const std::string& tgt) {
              return render_sft_style_prompt(code, parse_language(src), parse_language(tgt)).text;
          },
          py::arg("code"), py::arg("src"), py::arg("tgt"));

    m.def("codebleu",
          [](const std::string& hypothesis, const std::string& reference, const std::string& language,
             std::tuple<double, double, double, double> weights) {
              CodeBleuWeights w{std::get<0>(weights), std::get<1>(weights), std::get<2>(weights),
                                std::get<3>(weights)};
              const CodeBleuScore score =
                  codebleu(hypothesis, reference, parse_language(language), w);
              py::dict out;
              out["ngram"] = score.ngram;
              out["weighted_ngram"] = score.weighted_ngram;
              out["ast_match"] = score.ast_match;
              out["dataflow_match"] = score.dataflow_match;
              out["total"] = score.total;
              out["hypothesis_parse_failed"] = score.hypothesis_parse_failed;
              return out;
          },
          py::arg("hypothesis"), py::arg("reference"), py::arg("language"),
          py::arg("weights") = std::make_tuple(0.25, 0.25, 0.25, 0.25));

    m.attr("__version__") = "0.1.0";
}
