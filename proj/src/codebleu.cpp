#include "reasontrans/codebleu.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>
#include <unordered_set>

namespace reasontrans {

namespace {

std::string leaf_label(const Token& tok) {
    switch (tok.kind) {
    case TokenKind::identifier: return "id";
    case TokenKind::number: return "num";
    case TokenKind::string: return "str";
    case TokenKind::character: return "chr";
    default: return tok.text;  // keywords, operators, punctuation keep their spelling
    }
}

CstNode leaf(const Token& tok) {
    return CstNode{leaf_label(tok), {}};
}

// --- brace-language structural parser (java, cpp) ---

class BraceParser {
public:
    BraceParser(const std::vector<Token>& tokens) : tokens_(tokens) {}

    ParseResult run() {
        ParseResult out;
        out.ok = true;
        out.root.label = "unit";
        parse_statements(out.root, out, nullptr);
        if (pos_ < tokens_.size()) {
            out.ok = false;  // stray closers at top level
            out.error = "unbalanced delimiters";
            while (pos_ < tokens_.size()) {
                out.root.children.push_back(leaf(tokens_[pos_++]));
            }
        }
        return out;
    }

private:
    bool at_closer() const {
        if (pos_ >= tokens_.size()) return false;
        const std::string& t = tokens_[pos_].text;
        return t == "}" || t == ")" || t == "]";
    }

    void parse_statements(CstNode& parent, ParseResult& out, const char* stop) {
        while (pos_ < tokens_.size()) {
            const std::string& t = tokens_[pos_].text;
            if (stop && t == stop) {
                return;
            }
            if (at_closer()) {
                return;  // caller decides whether this closer is expected
            }
            parent.children.push_back(parse_statement(out));
        }
    }

    CstNode parse_statement(ParseResult& out) {
        CstNode stmt;
        stmt.label = tokens_[pos_].kind == TokenKind::keyword ? "stmt:" + tokens_[pos_].text
                                                              : "stmt:expr";
        while (pos_ < tokens_.size()) {
            const Token& tok = tokens_[pos_];
            if (tok.text == ";") {
                stmt.children.push_back(leaf(tok));
                ++pos_;
                break;
            }
            if (tok.text == "{") {
                ++pos_;
                CstNode block{"block", {}};
                parse_statements(block, out, "}");
                if (pos_ < tokens_.size() && tokens_[pos_].text == "}") {
                    ++pos_;
                } else {
                    out.ok = false;
                    out.error = "unbalanced delimiters";
                }
                stmt.children.push_back(std::move(block));
                break;  // `if (...) {...}` ends here; `else {...}` becomes its own stmt
            }
            if (tok.text == "(" || tok.text == "[") {
                stmt.children.push_back(parse_group(out, tok.text == "(" ? ")" : "]"));
                continue;
            }
            if (at_closer()) {
                break;  // unexpected closer, handled by the caller
            }
            stmt.children.push_back(leaf(tok));
            ++pos_;
        }
        return stmt;
    }

    CstNode parse_group(ParseResult& out, const char* close) {
        CstNode group{close[0] == ')' ? "parens" : "brackets", {}};
        ++pos_;  // opener
        while (pos_ < tokens_.size()) {
            const Token& tok = tokens_[pos_];
            if (tok.text == close) {
                ++pos_;
                return group;
            }
            if (tok.text == "(" || tok.text == "[") {
                group.children.push_back(parse_group(out, tok.text == "(" ? ")" : "]"));
                continue;
            }
            if (tok.text == "{") {
                ++pos_;
                CstNode block{"block", {}};
                parse_statements(block, out, "}");
                if (pos_ < tokens_.size() && tokens_[pos_].text == "}") {
                    ++pos_;
                } else {
                    out.ok = false;
                    out.error = "unbalanced delimiters";
                }
                group.children.push_back(std::move(block));
                continue;
            }
            if (tok.text == ")" || tok.text == "]" || tok.text == "}") {
                break;  // mismatched closer
            }
            group.children.push_back(leaf(tok));
            ++pos_;
        }
        out.ok = false;
        out.error = "unbalanced delimiters";
        return group;
    }

    const std::vector<Token>& tokens_;
    std::size_t pos_ = 0;
};

// --- python structural parser: logical lines + indentation blocks ---

struct LogicalLine {
    std::vector<Token> tokens;
    int indent = 0;
};

int column_indent(const std::string& text, std::size_t line_start, std::size_t tok_pos) {
    int col = 0;
    for (std::size_t i = line_start; i < tok_pos; ++i) {
        col += text[i] == '\t' ? 8 : 1;
    }
    return col;
}

std::vector<LogicalLine> split_logical_lines(const std::string& text, const std::vector<Token>& tokens,
                                             bool* balanced) {
    std::vector<LogicalLine> lines;
    int depth = 0;
    LogicalLine current;
    auto line_start_of = [&](std::size_t pos) {
        std::size_t ls = text.rfind('\n', pos == 0 ? 0 : pos - 1);
        return ls == std::string::npos ? 0 : ls + 1;
    };
    for (std::size_t k = 0; k < tokens.size(); ++k) {
        const Token& tok = tokens[k];
        if (current.tokens.empty()) {
            current.indent = column_indent(text, line_start_of(tok.pos), tok.pos);
        } else {
            // A depth-0 newline between the previous token and this one ends the
            // logical line; backslash-escaped newlines do not.
            const Token& prev = current.tokens.back();
            if (depth == 0) {
                for (std::size_t i = prev.pos + prev.text.size(); i < tok.pos; ++i) {
                    if (text[i] == '\n' && (i == 0 || text[i - 1] != '\\')) {
                        lines.push_back(std::move(current));
                        current = LogicalLine{};
                        current.indent = column_indent(text, line_start_of(tok.pos), tok.pos);
                        break;
                    }
                }
            }
        }
        if (tok.text == "(" || tok.text == "[" || tok.text == "{") {
            ++depth;
        } else if (tok.text == ")" || tok.text == "]" || tok.text == "}") {
            --depth;
        }
        current.tokens.push_back(tok);
    }
    if (!current.tokens.empty()) {
        lines.push_back(std::move(current));
    }
    *balanced = depth == 0;
    return lines;
}

CstNode python_line_node(const std::vector<Token>& tokens, bool* balanced) {
    // Group the line's tokens by brackets, reusing the brace grammar's group shapes.
    CstNode stmt;
    stmt.label = !tokens.empty() && tokens[0].kind == TokenKind::keyword ? "stmt:" + tokens[0].text
                                                                         : "stmt:expr";
    std::vector<CstNode*> stack{&stmt};
    for (const Token& tok : tokens) {
        if (tok.text == "(" || tok.text == "[" || tok.text == "{") {
            const char* label = tok.text == "(" ? "parens" : tok.text == "[" ? "brackets" : "braces";
            stack.back()->children.push_back(CstNode{label, {}});
            stack.push_back(&stack.back()->children.back());
        } else if (tok.text == ")" || tok.text == "]" || tok.text == "}") {
            if (stack.size() > 1) {
                stack.pop_back();
            } else {
                *balanced = false;
            }
        } else {
            stack.back()->children.push_back(leaf(tok));
        }
    }
    if (stack.size() > 1) {
        *balanced = false;
    }
    return stmt;
}

ParseResult parse_python(const std::string& text, const LexResult& lexed) {
    ParseResult out;
    out.ok = lexed.ok;
    out.error = lexed.error;
    out.root.label = "module";
    bool balanced = true;
    auto lines = split_logical_lines(text, lexed.tokens, &balanced);

    struct Level {
        int indent;
        CstNode* container;
    };
    std::vector<Level> stack{{-1, &out.root}};
    CstNode* pending_header = nullptr;  // last stmt ending with ':'
    int pending_indent = 0;

    for (auto& line : lines) {
        if (pending_header != nullptr && line.indent > pending_indent) {
            pending_header->children.push_back(CstNode{"block", {}});
            stack.push_back({line.indent, &pending_header->children.back()});
        }
        pending_header = nullptr;
        while (stack.size() > 1 && line.indent < stack.back().indent) {
            stack.pop_back();
        }
        CstNode* container = stack.back().container;
        container->children.push_back(python_line_node(line.tokens, &balanced));
        CstNode* stmt = &container->children.back();
        if (!line.tokens.empty() && line.tokens.back().text == ":") {
            pending_header = stmt;
            pending_indent = line.indent;
        }
    }
    if (!balanced) {
        out.ok = false;
        if (out.error.empty()) {
            out.error = "unbalanced delimiters";
        }
    }
    return out;
}

// --- subtree matching ---

void build_sexp(const CstNode& node, std::string& out) {
    if (node.children.empty()) {
        out += node.label;
        return;
    }
    out += '(';
    out += node.label;
    for (const auto& child : node.children) {
        out += ' ';
        build_sexp(child, out);
    }
    out += ')';
}

void collect_internal_sexps(const CstNode& node, std::vector<std::string>& out) {
    if (node.children.empty()) {
        return;
    }
    std::string sexp;
    build_sexp(node, sexp);
    out.push_back(std::move(sexp));
    for (const auto& child : node.children) {
        collect_internal_sexps(child, out);
    }
}

// --- n-gram kernels ---

struct GramCounts {
    std::unordered_map<std::string, std::size_t> counts;
    std::size_t total = 0;
};

GramCounts count_ngrams(const std::vector<Token>& tokens, std::size_t n) {
    GramCounts out;
    if (tokens.size() < n) {
        return out;
    }
    for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
        std::string key;
        for (std::size_t k = 0; k < n; ++k) {
            if (k > 0) key += '\x1f';
            key += tokens[i + k].text;
        }
        out.counts[key] += 1;
        out.total += 1;
    }
    return out;
}

double gram_weight(const std::string& key, const std::set<std::string>* keywords) {
    if (keywords == nullptr) {
        return 1.0;
    }
    double w = 0.0;
    std::size_t start = 0;
    while (true) {
        std::size_t sep = key.find('\x1f', start);
        const std::string tok = key.substr(start, sep == std::string::npos ? sep : sep - start);
        w += keywords->count(tok) > 0 ? 5.0 : 1.0;
        if (sep == std::string::npos) break;
        start = sep + 1;
    }
    return w;
}

double bleu_core(const std::vector<Token>& hyp, const std::vector<Token>& ref,
                 const std::set<std::string>* keywords) {
    if (hyp.empty() || ref.empty()) {
        return 0.0;
    }
    double log_sum = 0.0;
    for (std::size_t n = 1; n <= 4; ++n) {
        GramCounts h = count_ngrams(hyp, n);
        GramCounts r = count_ngrams(ref, n);
        double matched = 0.0;
        double total = 0.0;
        for (const auto& [key, count] : h.counts) {
            const double w = gram_weight(key, keywords);
            total += w * static_cast<double>(count);
            auto it = r.counts.find(key);
            if (it != r.counts.end()) {
                matched += w * static_cast<double>(std::min(count, it->second));
            }
        }
        double p;
        if (n == 1) {
            p = total > 0.0 ? matched / total : 0.0;
            if (p == 0.0) {
                return 0.0;
            }
        } else {
            p = (matched + 1.0) / (total + 1.0);  // add-one smoothing on higher orders
        }
        log_sum += 0.25 * std::log(p);
    }
    const double c = static_cast<double>(hyp.size());
    const double r = static_cast<double>(ref.size());
    const double bp = c >= r ? 1.0 : std::exp(1.0 - r / c);
    return bp * std::exp(log_sum);
}

// --- def-use extraction ---

bool is_assignment_op(const std::string& t) {
    static const std::set<std::string> ops = {"=",  "+=",  "-=",  "*=",  "/=",  "%=",  "&=",
                                              "|=", "^=",  "<<=", ">>=", "//=", "**="};
    return ops.count(t) > 0;
}

}  // namespace

ParseResult parse_cst(Language lang, const std::string& text) {
    LexResult lexed = lex(lang, text);
    if (lang == Language::Python) {
        return parse_python(text, lexed);
    }
    BraceParser parser(lexed.tokens);
    ParseResult out = parser.run();
    if (!lexed.ok) {
        out.ok = false;
        if (out.error.empty()) {
            out.error = lexed.error;
        }
    }
    return out;
}

std::vector<std::string> subtree_sexps(const CstNode& root) {
    std::vector<std::string> out;
    collect_internal_sexps(root, out);
    return out;
}

std::vector<DefUseEdge> extract_def_use(Language lang, const std::string& text) {
    const LexResult lexed = lex(lang, text);
    const auto& toks = lexed.tokens;
    std::vector<DefUseEdge> edges;
    std::unordered_map<std::string, std::size_t> first_seen;
    std::unordered_map<std::string, std::size_t> def_count;

    auto norm = [&](const std::string& name) {
        auto [it, inserted] = first_seen.emplace(name, first_seen.size());
        return it->second;
    };

    for (std::size_t i = 0; i < toks.size(); ++i) {
        if (toks[i].kind != TokenKind::identifier) {
            continue;
        }
        const std::string& prev = i > 0 ? toks[i - 1].text : std::string();
        if (prev == "." || prev == "->" || prev == "::") {
            continue;  // member access, not a variable
        }
        const std::string& next = i + 1 < toks.size() ? toks[i + 1].text : std::string();
        if (next == "(") {
            continue;  // call or declaration head
        }
        const std::string& name = toks[i].text;
        const std::size_t var = norm(name);

        const bool for_target = lang == Language::Python && i > 0 &&
                                toks[i - 1].kind == TokenKind::keyword && prev == "for";
        if (for_target) {
            def_count[name] += 1;
            continue;
        }
        if (is_assignment_op(next)) {
            if (next != "=") {
                edges.push_back({var, def_count[name]});  // compound assignment reads first
            }
            def_count[name] += 1;
            continue;
        }
        edges.push_back({var, def_count[name]});
    }
    return edges;
}

double token_bleu(const std::vector<Token>& hypothesis, const std::vector<Token>& reference) {
    return bleu_core(hypothesis, reference, nullptr);
}

double weighted_token_bleu(const std::vector<Token>& hypothesis, const std::vector<Token>& reference,
                           Language lang) {
    return bleu_core(hypothesis, reference, &keyword_set(lang));
}

CodeBleuScore codebleu(const std::string& hypothesis, const std::string& reference, Language lang,
                       const CodeBleuWeights& weights) {
    if (hypothesis.empty() || reference.empty()) {
        throw Error("codebleu: hypothesis and reference must be non-empty");
    }
    const double sum = weights.ngram + weights.weighted_ngram + weights.ast_match + weights.dataflow_match;
    if (std::fabs(sum - 1.0) > 1e-9) {
        throw Error("codebleu: weights must sum to 1");
    }

    ParseResult ref_parse = parse_cst(lang, reference);
    if (!ref_parse.ok) {
        throw Error("codebleu: reference does not parse: " + ref_parse.error);
    }
    ParseResult hyp_parse = parse_cst(lang, hypothesis);

    CodeBleuScore score;
    score.weights = weights;
    score.hypothesis_parse_failed = !hyp_parse.ok;

    const LexResult hyp_lex = lex(lang, hypothesis);
    const LexResult ref_lex = lex(lang, reference);
    score.ngram = token_bleu(hyp_lex.tokens, ref_lex.tokens);
    score.weighted_ngram = weighted_token_bleu(hyp_lex.tokens, ref_lex.tokens, lang);

    if (hyp_parse.ok) {
        const auto ref_subs = subtree_sexps(ref_parse.root);
        const auto hyp_subs = subtree_sexps(hyp_parse.root);
        std::unordered_set<std::string> hyp_set(hyp_subs.begin(), hyp_subs.end());
        std::size_t matched = 0;
        for (const auto& s : ref_subs) {
            if (hyp_set.count(s) > 0) {
                ++matched;
            }
        }
        score.ast_match = ref_subs.empty()
                              ? 1.0
                              : static_cast<double>(matched) / static_cast<double>(ref_subs.size());

        auto hyp_edges = extract_def_use(lang, hypothesis);
        auto ref_edges = extract_def_use(lang, reference);
        if (ref_edges.empty()) {
            score.dataflow_match = 1.0;
        } else {
            std::map<DefUseEdge, std::size_t> hyp_bag;
            for (const auto& e : hyp_edges) {
                hyp_bag[e] += 1;
            }
            std::size_t matched_edges = 0;
            for (const auto& e : ref_edges) {
                auto it = hyp_bag.find(e);
                if (it != hyp_bag.end() && it->second > 0) {
                    --it->second;
                    ++matched_edges;
                }
            }
            score.dataflow_match =
                static_cast<double>(matched_edges) / static_cast<double>(ref_edges.size());
        }
    }

    score.total = weights.ngram * score.ngram + weights.weighted_ngram * score.weighted_ngram +
                  weights.ast_match * score.ast_match + weights.dataflow_match * score.dataflow_match;
    return score;
}

}  // namespace reasontrans
