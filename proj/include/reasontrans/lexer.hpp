#pragma once

#include <cstddef>
#include <set>
#include <string>
#include <vector>

#include "reasontrans/corpus.hpp"

namespace reasontrans {

enum class TokenKind { identifier, keyword, number, string, character, op, punct };

struct Token {
    TokenKind kind = TokenKind::identifier;
    std::string text;
    std::size_t pos = 0;  // byte offset in the source
};

struct LexResult {
    std::vector<Token> tokens;
    bool ok = true;      // false on unterminated strings or stray bytes; lexing still total
    std::string error;
};

/// Language keyword set (loaded from the versioned data files embedded at build time).
const std::set<std::string>& keyword_set(Language lang);

/// Tokenizes source text, skipping whitespace and comments. Never throws: on a
/// malformed construct the offending bytes become a punct token and ok is cleared,
/// so BLEU-style consumers always get a deterministic token stream.
LexResult lex(Language lang, const std::string& text);

}  // namespace reasontrans
