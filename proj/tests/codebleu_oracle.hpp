#pragma once

// Brute-force conformance oracle for the CodeBLEU components, implemented
// independently of the library path: its own tokenizer, its own n-gram
// counting, its own subtree enumeration, and its own def-use scan following
// the documented extraction rules. Fixture pairs restrict themselves to the
// token alphabet both tokenizers handle identically (identifiers, integers,
// the two-char operators below, single-char symbols).

#include <cctype>
#include <cmath>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "reasontrans/codebleu.hpp"

namespace rt_oracle {

struct OtherToken {
    std::string text;
    bool identifier = false;
    bool keyword = false;
};

inline const std::set<std::string>& oracle_keywords(reasontrans::Language lang) {
    using reasontrans::Language;
    static const std::set<std::string> python = {"def", "return", "for", "in",    "if",  "else",
                                                 "while", "and",   "or",  "not", "pass", "True",
                                                 "False", "None"};
    static const std::set<std::string> java = {"public", "static", "class", "int",   "long",
                                               "double", "return", "for",   "if",    "else",
                                               "while",  "new",    "void",  "final", "boolean"};
    static const std::set<std::string> cpp = {"int",   "long",  "double", "void",  "const",
                                              "return", "for",  "if",     "else",  "while",
                                              "auto",  "bool",  "true",   "false", "struct"};
    switch (lang) {
    case Language::Python: return python;
    case Language::Java: return java;
    case Language::Cpp: return cpp;
    }
    return python;
}

inline std::vector<OtherToken> oracle_tokenize(reasontrans::Language lang, const std::string& text) {
    static const std::vector<std::string> two_char = {"==", "!=", "<=", ">=", "+=", "-=",
                                                      "*=", "/=", "&&", "||", "++", "--"};
    std::vector<OtherToken> out;
    std::size_t i = 0;
    while (i < text.size()) {
        const char c = text[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t j = i;
            while (j < text.size() &&
                   (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_')) {
                ++j;
            }
            OtherToken tok;
            tok.text = text.substr(i, j - i);
            tok.identifier = true;
            tok.keyword = oracle_keywords(lang).count(tok.text) > 0;
            if (tok.keyword) {
                tok.identifier = false;
            }
            out.push_back(tok);
            i = j;
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t j = i;
            while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) {
                ++j;
            }
            out.push_back({text.substr(i, j - i), false, false});
            i = j;
            continue;
        }
        bool matched = false;
        for (const auto& op : two_char) {
            if (text.compare(i, 2, op) == 0) {
                out.push_back({op, false, false});
                i += 2;
                matched = true;
                break;
            }
        }
        if (!matched) {
            out.push_back({std::string(1, c), false, false});
            ++i;
        }
    }
    return out;
}

inline double oracle_bleu(reasontrans::Language lang, const std::vector<OtherToken>& hyp,
                          const std::vector<OtherToken>& ref, bool weighted) {
    if (hyp.empty() || ref.empty()) {
        return 0.0;
    }
    auto weight_of = [&](const std::vector<std::string>& gram) {
        if (!weighted) {
            return 1.0;
        }
        double w = 0.0;
        for (const auto& t : gram) {
            w += oracle_keywords(lang).count(t) > 0 ? 5.0 : 1.0;
        }
        return w;
    };
    double log_sum = 0.0;
    for (std::size_t n = 1; n <= 4; ++n) {
        std::map<std::vector<std::string>, std::size_t> h_counts, r_counts;
        for (std::size_t i = 0; i + n <= hyp.size(); ++i) {
            std::vector<std::string> g;
            for (std::size_t k = 0; k < n; ++k) g.push_back(hyp[i + k].text);
            h_counts[g] += 1;
        }
        for (std::size_t i = 0; i + n <= ref.size(); ++i) {
            std::vector<std::string> g;
            for (std::size_t k = 0; k < n; ++k) g.push_back(ref[i + k].text);
            r_counts[g] += 1;
        }
        double matched = 0.0, total = 0.0;
        for (const auto& [gram, count] : h_counts) {
            const double w = weight_of(gram);
            total += w * static_cast<double>(count);
            auto it = r_counts.find(gram);
            if (it != r_counts.end()) {
                matched += w * static_cast<double>(std::min(count, it->second));
            }
        }
        double p;
        if (n == 1) {
            p = total > 0.0 ? matched / total : 0.0;
            if (p == 0.0) return 0.0;
        } else {
            p = (matched + 1.0) / (total + 1.0);
        }
        log_sum += 0.25 * std::log(p);
    }
    const double c = static_cast<double>(hyp.size());
    const double r = static_cast<double>(ref.size());
    const double bp = c >= r ? 1.0 : std::exp(1.0 - r / c);
    return bp * std::exp(log_sum);
}

// Independent subtree enumeration over the shared grammar adapter's tree:
// its own serialization format and its own counting.
inline void oracle_collect(const reasontrans::CstNode& node, std::vector<std::string>& out,
                           std::string* serialized) {
    std::string repr;
    if (node.children.empty()) {
        repr = node.label;
    } else {
        repr = node.label + "[";
        for (std::size_t i = 0; i < node.children.size(); ++i) {
            std::string child;
            oracle_collect(node.children[i], out, &child);
            if (i > 0) repr += ",";
            repr += child;
        }
        repr += "]";
        out.push_back(repr);
    }
    if (serialized != nullptr) {
        *serialized = repr;
    }
}

inline double oracle_ast_match(const reasontrans::CstNode& hyp_root,
                               const reasontrans::CstNode& ref_root) {
    std::vector<std::string> hyp_subs, ref_subs;
    oracle_collect(hyp_root, hyp_subs, nullptr);
    oracle_collect(ref_root, ref_subs, nullptr);
    if (ref_subs.empty()) {
        return 1.0;
    }
    std::set<std::string> hyp_set(hyp_subs.begin(), hyp_subs.end());
    std::size_t matched = 0;
    for (const auto& s : ref_subs) {
        if (hyp_set.count(s) > 0) ++matched;
    }
    return static_cast<double>(matched) / static_cast<double>(ref_subs.size());
}

// Independent def-use extraction per the documented rules.
inline std::vector<std::pair<std::size_t, std::size_t>> oracle_def_use(
    reasontrans::Language lang, const std::string& text) {
    const auto toks = oracle_tokenize(lang, text);
    static const std::set<std::string> assign = {"=",  "+=", "-=", "*=", "/=", "%=",
                                                 "&=", "|=", "^="};
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    std::map<std::string, std::size_t> first_seen, defs;
    auto norm = [&](const std::string& name) {
        auto it = first_seen.find(name);
        if (it == first_seen.end()) {
            it = first_seen.emplace(name, first_seen.size()).first;
        }
        return it->second;
    };
    for (std::size_t i = 0; i < toks.size(); ++i) {
        if (!toks[i].identifier) {
            continue;
        }
        const std::string prev = i > 0 ? toks[i - 1].text : "";
        if (prev == "." || prev == "->" || (i >= 2 && prev == ":" && toks[i - 2].text == ":")) {
            continue;
        }
        const std::string next = i + 1 < toks.size() ? toks[i + 1].text : "";
        if (next == "(") {
            continue;
        }
        const std::size_t var = norm(toks[i].text);
        if (lang == reasontrans::Language::Python && i > 0 && toks[i - 1].keyword &&
            prev == "for") {
            defs[toks[i].text] += 1;
            continue;
        }
        if (assign.count(next) > 0) {
            if (next != "=") {
                edges.emplace_back(var, defs[toks[i].text]);
            }
            defs[toks[i].text] += 1;
            continue;
        }
        edges.emplace_back(var, defs[toks[i].text]);
    }
    return edges;
}

inline double oracle_dataflow_match(reasontrans::Language lang, const std::string& hyp,
                                    const std::string& ref) {
    auto hyp_edges = oracle_def_use(lang, hyp);
    auto ref_edges = oracle_def_use(lang, ref);
    if (ref_edges.empty()) {
        return 1.0;
    }
    std::map<std::pair<std::size_t, std::size_t>, std::size_t> bag;
    for (const auto& e : hyp_edges) bag[e] += 1;
    std::size_t matched = 0;
    for (const auto& e : ref_edges) {
        auto it = bag.find(e);
        if (it != bag.end() && it->second > 0) {
            --it->second;
            ++matched;
        }
    }
    return static_cast<double>(matched) / static_cast<double>(ref_edges.size());
}

struct OracleScore {
    double ngram;
    double weighted_ngram;
    double ast_match;
    double dataflow_match;
};

inline OracleScore oracle_codebleu(reasontrans::Language lang, const std::string& hyp,
                                   const std::string& ref) {
    OracleScore s{};
    const auto ht = oracle_tokenize(lang, hyp);
    const auto rt = oracle_tokenize(lang, ref);
    s.ngram = oracle_bleu(lang, ht, rt, false);
    s.weighted_ngram = oracle_bleu(lang, ht, rt, true);
    const auto hp = reasontrans::parse_cst(lang, hyp);
    const auto rp = reasontrans::parse_cst(lang, ref);
    s.ast_match = oracle_ast_match(hp.root, rp.root);
    s.dataflow_match = oracle_dataflow_match(lang, hyp, ref);
    return s;
}

// The 20 conformance pairs shared by the unit tests and the acceptance suite.
// Restricted to the token alphabet the oracle tokenizer shares with the lexer.
struct ConformancePair {
    reasontrans::Language lang;
    std::string hyp;
    std::string ref;
};

inline std::vector<ConformancePair> conformance_pairs() {
    using L = reasontrans::Language;
    return {
        {L::Python, "x = 1\ny = x + 2\n", "x = 1\ny = x + 3\n"},
        {L::Python, "def f(a):\n    return a + 1\n", "def f(b):\n    return b + 1\n"},
        {L::Python, "s = 0\nfor i in range(10):\n    s = s + i\n",
         "s = 0\nfor i in range(10):\n    s = s + i\n"},
        {L::Python, "if x > 0:\n    y = x\nelse:\n    y = 0\n", "y = x if x > 0 else 0\n"},
        {L::Python, "a = 1\nb = 2\nc = a + b\n", "a = 1\nb = 2\nc = b + a\n"},
        {L::Python, "while n > 1:\n    n = n - 1\n", "while n > 0:\n    n = n - 1\n"},
        {L::Python, "t = 5\n", "u = 9\nt = 5\n"},
        {L::Java, "public class A { static int f(int a) { return a + 1; } }",
         "public class A { static int f(int b) { return b + 1; } }"},
        {L::Java, "int s = 0; for (int i = 0; i < n; i++) { s = s + i; }",
         "int s = 0; for (int i = 0; i < n; i++) { s = s + i; }"},
        {L::Java, "if (x > 0) { y = x; } else { y = 0; }", "y = 0; if (x > 0) { y = x; }"},
        {L::Java, "long t = a; t = t * 2; return t;", "long t = a; t = t * 3; return t;"},
        {L::Java, "int a = 1; int b = 2; int c = a + b;", "int c = 3;"},
        {L::Java, "while (n > 1) { n = n - 1; }", "while (n > 1) { n = n - 2; }"},
        {L::Cpp, "int f(int a) { return a + 1; }", "int f(int b) { return b + 1; }"},
        {L::Cpp, "int s = 0; for (int i = 0; i < n; i++) { s = s + i; }",
         "int s = 0; for (int i = 1; i < n; i++) { s = s + i; }"},
        {L::Cpp, "if (x > 0) { y = x; } else { y = 0; }", "if (x > 0) { y = x; }"},
        {L::Cpp, "double t = 0; t = t + a; t = t + b; return t;",
         "double t = 0; t = t + b; t = t + a; return t;"},
        {L::Cpp, "int a = 1; a += 2; int b = a;", "int a = 1; a += 2; int b = a;"},
        {L::Cpp, "while (n > 1) { n = n - 1; }", "for (int i = 0; i < n; i++) { k = k + 1; }"},
        {L::Cpp, "bool g(int x) { return x > 0; }", "bool g(int x) { return x >= 0; }"},
    };
}

// --- deterministic small-program generators for identity/rename fixtures ---

inline std::string gen_program(reasontrans::Language lang, int seed) {
    using reasontrans::Language;
    const std::string a = "v" + std::to_string(seed % 7) + "a";
    const std::string b = "w" + std::to_string(seed % 5) + "b";
    const std::string f = "fn" + std::to_string(seed % 11);
    const int k1 = seed % 13 + 1;
    const int k2 = seed % 17 + 2;
    const char* op = (seed % 3 == 0) ? "+" : (seed % 3 == 1) ? "*" : "-";
    switch (lang) {
    case Language::Python:
        return "def " + f + "(" + a + "):\n" +
               "    " + b + " = " + std::to_string(k1) + "\n" +
               "    for i in range(" + std::to_string(k2) + "):\n" +
               "        " + b + " = " + b + " " + op + " " + a + "\n" +
               "    return " + b + "\n";
    case Language::Java:
        return "public class C" + std::to_string(seed) + " {\n" +
               "    public static int " + f + "(int " + a + ") {\n" +
               "        int " + b + " = " + std::to_string(k1) + ";\n" +
               "        for (int i = 0; i < " + std::to_string(k2) + "; i++) {\n" +
               "            " + b + " = " + b + " " + op + " " + a + ";\n" +
               "        }\n" +
               "        return " + b + ";\n" +
               "    }\n" +
               "}\n";
    case Language::Cpp:
        return "int " + f + "(int " + a + ") {\n" +
               "    int " + b + " = " + std::to_string(k1) + ";\n" +
               "    for (int i = 0; i < " + std::to_string(k2) + "; i++) {\n" +
               "        " + b + " = " + b + " " + op + " " + a + ";\n" +
               "    }\n" +
               "    return " + b + ";\n" +
               "}\n";
    }
    return "";
}

/// Consistent identifier renaming used for the AST-invariance fixtures.
inline std::string rename_identifiers(reasontrans::Language lang, const std::string& code) {
    const auto lexed = reasontrans::lex(lang, code);
    std::map<std::string, std::string> renames;
    std::string out;
    std::size_t cursor = 0;
    for (const auto& tok : lexed.tokens) {
        out += code.substr(cursor, tok.pos - cursor);
        if (tok.kind == reasontrans::TokenKind::identifier) {
            auto it = renames.find(tok.text);
            if (it == renames.end()) {
                it = renames.emplace(tok.text, "q" + std::to_string(renames.size()) + "z").first;
            }
            out += it->second;
        } else {
            out += tok.text;
        }
        cursor = tok.pos + tok.text.size();
    }
    out += code.substr(cursor);
    return out;
}

}  // namespace rt_oracle
