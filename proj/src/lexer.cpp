#include "reasontrans/lexer.hpp"

#include <array>
#include <cctype>
#include <cstring>
#include <sstream>

#include "embedded_assets.hpp"

namespace reasontrans {

namespace {

std::set<std::string> parse_keyword_lines(const char* text) {
    std::set<std::string> out;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) {
            line.pop_back();
        }
        if (!line.empty()) {
            out.insert(line);
        }
    }
    return out;
}

bool is_ident_start(char c) {
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '$';
}

bool is_ident_cont(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '$';
}

bool is_digit(char c) {
    return c >= '0' && c <= '9';
}

// Multi-character operators, longest first within each list.
const std::array<const char*, 12> kOps3 = {"<<=", ">>=", "**=", "//=", "...", "->*",
                                           "<=>", "===", "!==", ">>>", "##@", "::*"};
const std::array<const char*, 26> kOps2 = {"==", "!=", "<=", ">=", "&&", "||", "<<", ">>", "++",
                                           "--", "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=",
                                           "->", "::", "**", "//", ":=", "@=", "##", ".."};

struct Cursor {
    const std::string& text;
    std::size_t i = 0;

    bool eof() const { return i >= text.size(); }
    char peek(std::size_t ahead = 0) const {
        return i + ahead < text.size() ? text[i + ahead] : '\0';
    }
    bool starts_with(const char* s) const { return text.compare(i, std::strlen(s), s) == 0; }
};

class Lexer {
public:
    Lexer(Language lang, const std::string& text) : lang_(lang), cur_{text} {}

    LexResult run() {
        while (!cur_.eof()) {
            const char c = cur_.peek();
            if (c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f' || c == '\v') {
                ++cur_.i;
            } else if (c == '\\' && lang_ == Language::Python && cur_.peek(1) == '\n') {
                cur_.i += 2;  // line continuation
            } else if (is_comment_start()) {
                skip_comment();
            } else if (is_string_start()) {
                lex_string();
            } else if (is_digit(c) || (c == '.' && is_digit(cur_.peek(1)))) {
                lex_number();
            } else if (is_ident_start(c)) {
                lex_identifier();
            } else {
                lex_operator_or_punct();
            }
        }
        return std::move(result_);
    }

private:
    bool is_comment_start() const {
        if (lang_ == Language::Python) {
            return cur_.peek() == '#';
        }
        return cur_.starts_with("//") || cur_.starts_with("/*");
    }

    void skip_comment() {
        if (lang_ == Language::Python || cur_.starts_with("//")) {
            while (!cur_.eof() && cur_.peek() != '\n') {
                ++cur_.i;
            }
            return;
        }
        cur_.i += 2;  // "/*"
        while (!cur_.eof() && !cur_.starts_with("*/")) {
            ++cur_.i;
        }
        if (cur_.eof()) {
            fail("unterminated block comment");
        } else {
            cur_.i += 2;
        }
    }

    bool is_string_start() const {
        const char c = cur_.peek();
        if (c == '"' || c == '\'') {
            return true;
        }
        if (lang_ == Language::Python && is_ident_start(c)) {
            // String prefixes like r"...", f'...', rb"...".
            std::size_t k = 0;
            while (k < 3 && is_ident_start(cur_.peek(k))) {
                const char p = static_cast<char>(std::tolower(static_cast<unsigned char>(cur_.peek(k))));
                if (p != 'r' && p != 'b' && p != 'f' && p != 'u') {
                    return false;
                }
                ++k;
            }
            return cur_.peek(k) == '"' || cur_.peek(k) == '\'';
        }
        if (lang_ == Language::Cpp && c == 'R' && cur_.peek(1) == '"') {
            return true;
        }
        return false;
    }

    void lex_string() {
        const std::size_t start = cur_.i;
        bool raw = false;
        if (lang_ == Language::Cpp && cur_.peek() == 'R' && cur_.peek(1) == '"') {
            lex_cpp_raw_string(start);
            return;
        }
        if (lang_ == Language::Python) {
            while (is_ident_start(cur_.peek())) {
                const char p = static_cast<char>(std::tolower(static_cast<unsigned char>(cur_.peek())));
                raw = raw || p == 'r';
                ++cur_.i;
            }
        }
        const char quote = cur_.peek();
        std::string terminator(1, quote);
        if (lang_ == Language::Python && cur_.peek(1) == quote && cur_.peek(2) == quote) {
            terminator = std::string(3, quote);
            cur_.i += 3;
        } else {
            ++cur_.i;
        }
        while (!cur_.eof()) {
            if (!raw && cur_.peek() == '\\') {
                cur_.i += 2;
                continue;
            }
            if (cur_.starts_with(terminator.c_str())) {
                cur_.i += terminator.size();
                emit_string(start, quote, terminator.size() == 3);
                return;
            }
            if (terminator.size() == 1 && cur_.peek() == '\n' && lang_ != Language::Python) {
                break;  // strings don't span lines in java/cpp
            }
            ++cur_.i;
        }
        fail("unterminated string literal");
        emit_string(start, quote, terminator.size() == 3);
    }

    void lex_cpp_raw_string(std::size_t start) {
        cur_.i += 2;  // R"
        std::string delim;
        while (!cur_.eof() && cur_.peek() != '(') {
            delim.push_back(cur_.peek());
            ++cur_.i;
        }
        const std::string close = ")" + delim + "\"";
        while (!cur_.eof() && !cur_.starts_with(close.c_str())) {
            ++cur_.i;
        }
        if (cur_.eof()) {
            fail("unterminated raw string literal");
        } else {
            cur_.i += close.size();
        }
        emit_string(start, '"', false);
    }

    void emit_string(std::size_t start, char quote, bool triple) {
        TokenKind kind = TokenKind::string;
        if (quote == '\'' && !triple && lang_ != Language::Python) {
            kind = TokenKind::character;
        }
        push(kind, start);
    }

    void lex_number() {
        const std::size_t start = cur_.i;
        bool hex = cur_.peek() == '0' && (cur_.peek(1) == 'x' || cur_.peek(1) == 'X');
        while (!cur_.eof()) {
            const char c = cur_.peek();
            if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.') {
                const bool exponent = !hex ? (c == 'e' || c == 'E') : (c == 'p' || c == 'P');
                ++cur_.i;
                if (exponent && (cur_.peek() == '+' || cur_.peek() == '-')) {
                    ++cur_.i;
                }
            } else if (lang_ == Language::Cpp && c == '\'' && is_digit(cur_.peek(1))) {
                ++cur_.i;  // digit separator
            } else {
                break;
            }
        }
        push(TokenKind::number, start);
    }

    void lex_identifier() {
        const std::size_t start = cur_.i;
        while (!cur_.eof() && is_ident_cont(cur_.peek())) {
            ++cur_.i;
        }
        const std::string text = cur_.text.substr(start, cur_.i - start);
        const bool kw = keyword_set(lang_).count(text) > 0;
        result_.tokens.push_back({kw ? TokenKind::keyword : TokenKind::identifier, text, start});
    }

    void lex_operator_or_punct() {
        const std::size_t start = cur_.i;
        for (const char* op : kOps3) {
            if (applies(op) && cur_.starts_with(op)) {
                cur_.i += 3;
                push(TokenKind::op, start);
                return;
            }
        }
        for (const char* op : kOps2) {
            if (applies(op) && cur_.starts_with(op)) {
                cur_.i += 2;
                push(TokenKind::op, start);
                return;
            }
        }
        const char c = cur_.peek();
        ++cur_.i;
        const bool structural = c == '(' || c == ')' || c == '[' || c == ']' || c == '{' ||
                                c == '}' || c == ',' || c == ';' || c == ':' || c == '.';
        if (static_cast<unsigned char>(c) >= 0x80) {
            fail("unexpected non-ascii byte outside a string");
        }
        push(structural ? TokenKind::punct : TokenKind::op, start);
    }

    // "//" is a comment in java/cpp and "**"/":=" are python-only spellings.
    bool applies(const std::string& op) const {
        if (lang_ == Language::Python) {
            return op != "::" && op != "->*" && op != "<=>" && op != ">>>";
        }
        return op != "//" && op != "//=" && op != "**" && op != "**=" && op != ":=";
    }

    void push(TokenKind kind, std::size_t start) {
        result_.tokens.push_back({kind, cur_.text.substr(start, cur_.i - start), start});
    }

    void fail(const std::string& message) {
        result_.ok = false;
        if (result_.error.empty()) {
            result_.error = message;
        }
    }

    Language lang_;
    Cursor cur_;
    LexResult result_;
};

}  // namespace

const std::set<std::string>& keyword_set(Language lang) {
    static const std::set<std::string> python = parse_keyword_lines(assets::kPythonKeywords);
    static const std::set<std::string> java = parse_keyword_lines(assets::kJavaKeywords);
    static const std::set<std::string> cpp = parse_keyword_lines(assets::kCppKeywords);
    switch (lang) {
    case Language::Python: return python;
    case Language::Java: return java;
    case Language::Cpp: return cpp;
    }
    return python;
}

LexResult lex(Language lang, const std::string& text) {
    return Lexer(lang, text).run();
}

}  // namespace reasontrans
