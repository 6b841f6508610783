#include "tokenlens/lexer.hpp"

#include <array>
#include <cctype>
#include <unordered_set>

namespace tokenlens {

namespace {

const std::unordered_set<std::string_view> kKeywords = {
    "abstract", "assert",    "boolean",  "break",     "byte",      "case",
    "catch",    "char",      "class",    "const",     "continue",  "default",
    "do",       "double",    "else",     "enum",      "extends",   "final",
    "finally",  "float",     "for",      "goto",      "if",        "implements",
    "import",   "instanceof", "int",     "interface", "long",      "native",
    "new",      "package",   "private",  "protected", "public",    "return",
    "short",    "static",    "strictfp", "super",     "switch",    "synchronized",
    "this",     "throw",     "throws",   "transient", "try",       "void",
    "volatile", "while",     "record",   "var",       "yield",
};

const std::unordered_set<std::string_view> kTypeKeywords = {
    "boolean", "byte", "char", "short", "int", "long", "float", "double", "void",
};

// Multi-character operators, longest first so maximal munch works by scanning
// the table in order.
constexpr std::array<std::string_view, 37> kOperators = {
    ">>>=", ">>>", ">>=", "<<=", "->",  "::",  "...", "==", "!=", "<=", ">=",
    "&&",   "||",  "++",  "--",  "+=",  "-=",  "*=",  "/=", "%=", "&=", "|=",
    "^=",   "<<",  ">>",  "+",   "-",   "*",   "/",   "%",  "=",  "<",  ">",
    "!",    "&",   "|",   "^",
};

constexpr std::string_view kSinglePunct = "(){}[];,.?:~@";

bool ident_start(char c) {
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '$';
}
bool ident_cont(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '$';
}

}  // namespace

bool is_trivia(TokenKind kind) {
    return kind == TokenKind::Whitespace || kind == TokenKind::LineComment ||
           kind == TokenKind::BlockComment;
}

bool is_java_keyword(std::string_view word) { return kKeywords.count(word) > 0; }

bool is_type_keyword(std::string_view word) { return kTypeKeywords.count(word) > 0; }

std::string_view token_text(std::string_view source, const Token& tok) {
    return source.substr(tok.span.begin, tok.span.length());
}

LexResult lex(std::string_view src) {
    LexResult out;
    std::size_t i = 0;
    const std::size_t n = src.size();

    auto push = [&](TokenKind kind, std::size_t begin, std::size_t end) {
        out.tokens.push_back({kind, {begin, end}});
    };

    while (i < n) {
        const std::size_t start = i;
        const char c = src[i];

        if (std::isspace(static_cast<unsigned char>(c))) {
            while (i < n && std::isspace(static_cast<unsigned char>(src[i]))) ++i;
            push(TokenKind::Whitespace, start, i);
            continue;
        }

        if (c == '/' && i + 1 < n && src[i + 1] == '/') {
            i += 2;
            while (i < n && src[i] != '\n') ++i;
            push(TokenKind::LineComment, start, i);
            continue;
        }

        if (c == '/' && i + 1 < n && src[i + 1] == '*') {
            i += 2;
            bool closed = false;
            while (i < n) {
                if (src[i] == '*' && i + 1 < n && src[i + 1] == '/') {
                    i += 2;
                    closed = true;
                    break;
                }
                ++i;
            }
            if (!closed) out.had_errors = true;
            push(TokenKind::BlockComment, start, i);
            continue;
        }

        if (c == '"' || c == '\'') {
            const char quote = c;
            ++i;
            bool closed = false;
            while (i < n) {
                if (src[i] == '\\' && i + 1 < n) {
                    i += 2;
                    continue;
                }
                if (src[i] == quote) {
                    ++i;
                    closed = true;
                    break;
                }
                if (src[i] == '\n') break;  // unterminated on this line
                ++i;
            }
            if (!closed) out.had_errors = true;
            push(closed ? (quote == '"' ? TokenKind::String : TokenKind::Char)
                        : TokenKind::Error,
                 start, i);
            continue;
        }

        if (std::isdigit(static_cast<unsigned char>(c)) ||
            (c == '.' && i + 1 < n && std::isdigit(static_cast<unsigned char>(src[i + 1])))) {
            ++i;
            if (c == '0' && i < n && (src[i] == 'x' || src[i] == 'X' ||
                                      src[i] == 'b' || src[i] == 'B')) {
                ++i;
                while (i < n && (std::isxdigit(static_cast<unsigned char>(src[i])) ||
                                 src[i] == '_'))
                    ++i;
            } else {
                bool seen_dot = (c == '.');
                bool seen_exp = false;
                while (i < n) {
                    const char d = src[i];
                    if (std::isdigit(static_cast<unsigned char>(d)) || d == '_') {
                        ++i;
                    } else if (d == '.' && !seen_dot && !seen_exp) {
                        seen_dot = true;
                        ++i;
                    } else if ((d == 'e' || d == 'E') && !seen_exp) {
                        seen_exp = true;
                        ++i;
                        if (i < n && (src[i] == '+' || src[i] == '-')) ++i;
                    } else {
                        break;
                    }
                }
            }
            // type suffix
            if (i < n && (src[i] == 'l' || src[i] == 'L' || src[i] == 'f' ||
                          src[i] == 'F' || src[i] == 'd' || src[i] == 'D'))
                ++i;
            push(TokenKind::Number, start, i);
            continue;
        }

        if (ident_start(c)) {
            while (i < n && ident_cont(src[i])) ++i;
            const std::string_view word = src.substr(start, i - start);
            push(is_java_keyword(word) ? TokenKind::Keyword : TokenKind::Identifier,
                 start, i);
            continue;
        }

        bool matched = false;
        for (std::string_view op : kOperators) {
            if (src.substr(i, op.size()) == op) {
                i += op.size();
                push(TokenKind::Operator, start, i);
                matched = true;
                break;
            }
        }
        if (matched) continue;

        if (kSinglePunct.find(c) != std::string_view::npos) {
            ++i;
            push(TokenKind::Operator, start, i);
            continue;
        }

        ++i;
        out.had_errors = true;
        push(TokenKind::Error, start, i);
    }

    return out;
}

}  // namespace tokenlens
