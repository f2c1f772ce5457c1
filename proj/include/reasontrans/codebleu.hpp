#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "reasontrans/corpus.hpp"
#include "reasontrans/lexer.hpp"

namespace reasontrans {

struct CodeBleuWeights {
    double ngram = 0.25;
    double weighted_ngram = 0.25;
    double ast_match = 0.25;
    double dataflow_match = 0.25;
};

struct CodeBleuScore {
    double ngram = 0.0;
    double weighted_ngram = 0.0;
    double ast_match = 0.0;
    double dataflow_match = 0.0;
    double total = 0.0;
    CodeBleuWeights weights;
    bool hypothesis_parse_failed = false;
};

/// Structural concrete-syntax node. Internal labels are keyword/shape based and
/// leaf identifiers collapse to the class "id", so tree shape is invariant under
/// consistent identifier renaming.
struct CstNode {
    std::string label;
    std::vector<CstNode> children;
    bool is_leaf() const { return children.empty() && !label.empty() && label[0] != '('; }
};

struct ParseResult {
    bool ok = false;
    CstNode root;
    std::string error;
};

/// Builds the structural tree: brace/semicolon structure for Java and C++,
/// logical lines plus indentation blocks for Python. Parsing fails (ok=false)
/// on lex errors or unbalanced delimiters; a tree is still returned.
ParseResult parse_cst(Language lang, const std::string& text);

/// S-expressions of every internal node (leaves excluded), in preorder.
std::vector<std::string> subtree_sexps(const CstNode& root);

/// One def-use edge: `variable` is the mention-order index of the variable name
/// (rename-invariant) and `def_ordinal` counts which definition of that variable
/// the use reads (0 = used before any definition in the fragment).
struct DefUseEdge {
    std::size_t variable = 0;
    std::size_t def_ordinal = 0;

    bool operator==(const DefUseEdge&) const = default;
    auto operator<=>(const DefUseEdge&) const = default;
};

/// Extraction rules (shared contract with the conformance oracle):
/// a variable mention is an identifier token that is not a keyword, is not
/// directly followed by `(`, and is not preceded by `.`, `->`, or `::`.
/// A mention directly followed by an assignment operator (= += -= *= /= %= &=
/// |= ^= <<= >>= //= **=) is a definition; compound assignments also emit a use
/// of the previous definition first. In Python, the mention after `for` is a
/// definition. Every other mention is a use of the variable's latest definition.
std::vector<DefUseEdge> extract_def_use(Language lang, const std::string& text);

/// BLEU-4 over lexer tokens with add-one smoothing on orders 2..4.
double token_bleu(const std::vector<Token>& hypothesis, const std::vector<Token>& reference);

/// Same, with each n-gram weighted by the sum of its token weights
/// (keywords 5, everything else 1).
double weighted_token_bleu(const std::vector<Token>& hypothesis, const std::vector<Token>& reference,
                           Language lang);

/// CodeBLEU for one hypothesis/reference pair. Throws Error when the reference
/// does not parse or the weights do not sum to 1; an unparseable hypothesis
/// zeroes ast/dataflow and sets hypothesis_parse_failed.
CodeBleuScore codebleu(const std::string& hypothesis, const std::string& reference, Language lang,
                       const CodeBleuWeights& weights = {});

}  // namespace reasontrans
