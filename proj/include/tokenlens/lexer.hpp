#pragma once

#include <string_view>
#include <vector>

#include "tokenlens/source.hpp"

namespace tokenlens {

enum class TokenKind {
    Identifier,
    Keyword,
    Number,
    String,
    Char,
    Operator,      // operators and punctuation
    LineComment,
    BlockComment,
    Whitespace,
    Error,
};

struct Token {
    TokenKind kind;
    Span span;
};

struct LexResult {
    std::vector<Token> tokens;  // covers the input exactly, in order
    bool had_errors = false;
};

/// Tokenizes Java source. The token list always covers the full input;
/// unrecognized bytes become single-byte Error tokens.
LexResult lex(std::string_view source);

bool is_trivia(TokenKind kind);
bool is_java_keyword(std::string_view word);

/// Primitive type keywords plus void; these classify as operands, not
/// operators, in the Halstead counting rules.
bool is_type_keyword(std::string_view word);

std::string_view token_text(std::string_view source, const Token& tok);

}  // namespace tokenlens
