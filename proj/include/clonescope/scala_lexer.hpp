#pragma once

// Lexer for Scala 2/3 source text.
//
// Produces the token stream used by method extraction, token bags and the
// syntax-tree builder. Comments are dropped but the lines they occupy are
// tracked so that callers can count effective (code-bearing) lines.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace clonescope::scala {

enum class TokenKind {
    Identifier,     // alphanumeric, mixed or backquoted identifier
    Operator,       // symbolic identifier, including reserved `=`, `=>`, `:`, `<-`
    Keyword,
    IntLiteral,
    FloatLiteral,
    StringLiteral,  // plain, triple-quoted and interpolated
    CharLiteral,
    SymbolLiteral,
    Punct,          // ( ) [ ] { } , ; .
    Unknown,
};

struct Token {
    TokenKind kind = TokenKind::Unknown;
    std::string text;
    int line = 0;      // 1-based
    int column = 0;    // 1-based byte column
    int end_line = 0;  // line of the last character
    std::size_t offset = 0;
    std::size_t end_offset = 0;  // one past the last byte
    bool newline_before = false;

    [[nodiscard]] bool is(TokenKind k, std::string_view t) const { return kind == k && text == t; }
    [[nodiscard]] bool is_punct(std::string_view t) const { return is(TokenKind::Punct, t); }
    [[nodiscard]] bool is_keyword(std::string_view t) const { return is(TokenKind::Keyword, t); }
    [[nodiscard]] bool is_op(std::string_view t) const { return is(TokenKind::Operator, t); }
    [[nodiscard]] bool is_literal() const {
        return kind == TokenKind::IntLiteral || kind == TokenKind::FloatLiteral ||
               kind == TokenKind::StringLiteral || kind == TokenKind::CharLiteral ||
               kind == TokenKind::SymbolLiteral || is_keyword("true") || is_keyword("false") ||
               is_keyword("null");
    }
};

struct LexResult {
    std::vector<Token> tokens;
    std::set<int> code_lines;  // lines holding at least one non-comment token
    std::vector<std::string> diagnostics;
};

inline bool is_keyword(std::string_view word) {
    static constexpr std::string_view kKeywords[] = {
        "_",       "abstract", "case",     "catch",   "class",    "def",    "do",
        "else",    "extends",  "false",    "final",   "finally",  "for",    "forSome",
        "if",      "implicit", "import",   "lazy",    "match",    "new",    "null",
        "object",  "override", "package",  "private", "protected", "return", "sealed",
        "super",   "this",     "throw",    "trait",   "true",     "try",    "type",
        "val",     "var",      "while",    "with",    "yield",    "then",   "given",
        "enum",
    };
    return std::find(std::begin(kKeywords), std::end(kKeywords), word) != std::end(kKeywords);
}

namespace detail {

inline bool is_op_char(char c) {
    switch (c) {
        case '!': case '#': case '%': case '&': case '*': case '+': case '-': case '/':
        case ':': case '<': case '=': case '>': case '?': case '@': case '\\': case '^':
        case '|': case '~':
            return true;
        default:
            return false;
    }
}

inline bool is_ascii_letter(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }
inline bool is_digit(char c) { return c >= '0' && c <= '9'; }
inline bool is_hex_digit(char c) {
    return is_digit(c) || (c >= 'a' && c <= 'f') || (c >= 'A' && c <= 'F');
}
inline bool is_non_ascii(char c) { return (static_cast<unsigned char>(c) & 0x80U) != 0; }

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) {}

    LexResult run() {
        while (pos_ < src_.size()) {
            char c = src_[pos_];
            if (c == '\n') {
                ++line_;
                line_start_ = ++pos_;
                pending_newline_ = true;
            } else if (c == ' ' || c == '\t' || c == '\r' || c == '\f') {
                ++pos_;
            } else if (c == '/' && peek(1) == '/') {
                while (pos_ < src_.size() && src_[pos_] != '\n') ++pos_;
            } else if (c == '/' && peek(1) == '*') {
                block_comment();
            } else {
                token();
            }
        }
        return std::move(out_);
    }

private:
    [[nodiscard]] char peek(std::size_t ahead) const {
        return pos_ + ahead < src_.size() ? src_[pos_ + ahead] : '\0';
    }

    void advance() {
        if (src_[pos_] == '\n') {
            ++line_;
            line_start_ = pos_ + 1;
        }
        ++pos_;
    }

    void block_comment() {
        int start_line = line_;
        int depth = 0;
        while (pos_ < src_.size()) {
            if (src_[pos_] == '/' && peek(1) == '*') {
                ++depth;
                pos_ += 2;
            } else if (src_[pos_] == '*' && peek(1) == '/') {
                --depth;
                pos_ += 2;
                if (depth == 0) return;
            } else {
                if (src_[pos_] == '\n') pending_newline_ = true;
                advance();
            }
        }
        diag("unterminated block comment starting on line " + std::to_string(start_line));
    }

    void diag(std::string msg) { out_.diagnostics.push_back(std::move(msg)); }

    void emit(TokenKind kind, std::size_t start, int start_line, int start_col) {
        Token t;
        t.kind = kind;
        t.text = std::string(src_.substr(start, pos_ - start));
        t.line = start_line;
        t.column = start_col;
        t.end_line = line_;
        t.offset = start;
        t.end_offset = pos_;
        t.newline_before = pending_newline_ || out_.tokens.empty();
        pending_newline_ = false;
        for (int l = t.line; l <= t.end_line; ++l) out_.code_lines.insert(l);
        if (kind == TokenKind::Identifier && is_keyword(t.text)) t.kind = TokenKind::Keyword;
        out_.tokens.push_back(std::move(t));
    }

    // Letters, digits, '_', '$' and any non-ASCII byte continue an identifier.
    void ident_rest() {
        while (pos_ < src_.size()) {
            char c = src_[pos_];
            if (c == '_') {
                ++pos_;
                if (pos_ < src_.size() && is_op_char(src_[pos_])) {
                    op_rest();
                    return;
                }
            } else if (is_ascii_letter(c) || is_digit(c) || c == '$' || is_non_ascii_letter()) {
                pos_ = std::min(src_.size(), pos_ + utf8_len(c));
            } else {
                return;
            }
        }
    }

    void op_rest() {
        while (pos_ < src_.size() && is_op_char(src_[pos_])) {
            if (src_[pos_] == '/' && (peek(1) == '/' || peek(1) == '*')) return;
            ++pos_;
        }
    }

    static std::size_t utf8_len(char lead) {
        auto b = static_cast<unsigned char>(lead);
        if (b < 0x80) return 1;
        if ((b & 0xE0) == 0xC0) return 2;
        if ((b & 0xF0) == 0xE0) return 3;
        if ((b & 0xF8) == 0xF0) return 4;
        return 1;
    }

    // Unicode arrows are operators; every other non-ASCII codepoint is a letter.
    [[nodiscard]] std::size_t unicode_op_len() const {
        static constexpr std::string_view kOps[] = {"⇒", "←", "→"};
        for (auto op : kOps) {
            if (src_.substr(pos_, op.size()) == op) return op.size();
        }
        return 0;
    }

    [[nodiscard]] bool is_non_ascii_letter() const {
        return is_non_ascii(src_[pos_]) && unicode_op_len() == 0;
    }

    void token() {
        std::size_t start = pos_;
        int start_line = line_;
        int start_col = static_cast<int>(pos_ - line_start_) + 1;
        char c = src_[pos_];

        if (is_ascii_letter(c) || c == '_' || c == '$' || is_non_ascii_letter()) {
            pos_ = std::min(src_.size(), pos_ + utf8_len(c));
            ident_rest();
            // Interpolated string: identifier glued to an opening quote.
            if (pos_ < src_.size() && src_[pos_] == '"' && src_.substr(start, 1) != "_") {
                string_body(true, start_line);
                emit(TokenKind::StringLiteral, start, start_line, start_col);
                return;
            }
            emit(TokenKind::Identifier, start, start_line, start_col);
            return;
        }
        if (is_non_ascii(c)) {
            pos_ += unicode_op_len();
            emit(TokenKind::Operator, start, start_line, start_col);
            return;
        }
        if (c == '`') {
            ++pos_;
            while (pos_ < src_.size() && src_[pos_] != '`' && src_[pos_] != '\n') ++pos_;
            if (pos_ < src_.size() && src_[pos_] == '`') {
                ++pos_;
                emit(TokenKind::Identifier, start, start_line, start_col);
            } else {
                pos_ = start + 1;
                diag("unmatched backquote on line " + std::to_string(start_line));
                emit(TokenKind::Unknown, start, start_line, start_col);
            }
            return;
        }
        if (is_digit(c) || (c == '.' && is_digit(peek(1)))) {
            emit(number(), start, start_line, start_col);
            return;
        }
        if (c == '"') {
            string_body(false, start_line);
            emit(TokenKind::StringLiteral, start, start_line, start_col);
            return;
        }
        if (c == '\'') {
            emit(quote(start_line), start, start_line, start_col);
            return;
        }
        switch (c) {
            case '(': case ')': case '[': case ']': case '{': case '}': case ',': case ';': case '.':
                ++pos_;
                emit(TokenKind::Punct, start, start_line, start_col);
                return;
            default:
                break;
        }
        if (is_op_char(c)) {
            op_rest();
            emit(TokenKind::Operator, start, start_line, start_col);
            return;
        }
        ++pos_;
        diag("unexpected character 0x" + hex_byte(c) + " on line " + std::to_string(start_line));
        emit(TokenKind::Unknown, start, start_line, start_col);
    }

    static std::string hex_byte(char c) {
        static constexpr char kHex[] = "0123456789abcdef";
        auto b = static_cast<unsigned char>(c);
        return {kHex[b >> 4U], kHex[b & 0xFU]};
    }

    TokenKind number() {
        bool is_float = false;
        if (src_[pos_] == '0' && (peek(1) == 'x' || peek(1) == 'X')) {
            pos_ += 2;
            while (pos_ < src_.size() && (is_hex_digit(src_[pos_]) || src_[pos_] == '_')) ++pos_;
        } else {
            while (pos_ < src_.size() && (is_digit(src_[pos_]) || src_[pos_] == '_')) ++pos_;
            if (pos_ < src_.size() && src_[pos_] == '.' && is_digit(peek(1))) {
                is_float = true;
                ++pos_;
                while (pos_ < src_.size() && (is_digit(src_[pos_]) || src_[pos_] == '_')) ++pos_;
            }
            if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
                std::size_t save = pos_;
                ++pos_;
                if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
                if (pos_ < src_.size() && is_digit(src_[pos_])) {
                    is_float = true;
                    while (pos_ < src_.size() && is_digit(src_[pos_])) ++pos_;
                } else {
                    pos_ = save;
                }
            }
            if (pos_ < src_.size() && (src_[pos_] == 'f' || src_[pos_] == 'F' ||
                                       src_[pos_] == 'd' || src_[pos_] == 'D')) {
                is_float = true;
                ++pos_;
                return TokenKind::FloatLiteral;
            }
        }
        if (pos_ < src_.size() && (src_[pos_] == 'L' || src_[pos_] == 'l')) ++pos_;
        return is_float ? TokenKind::FloatLiteral : TokenKind::IntLiteral;
    }

    TokenKind quote(int start_line) {
        // 'c' or '\n' is a char literal; 'name is a symbol literal.
        std::size_t p = pos_ + 1;
        if (p < src_.size() && src_[p] == '\\') {
            p += 2;
            while (p < src_.size() && src_[p] != '\'' && src_[p] != '\n' && p - pos_ < 10) ++p;
            if (p < src_.size() && src_[p] == '\'') {
                pos_ = p + 1;
                return TokenKind::CharLiteral;
            }
        } else if (p < src_.size() && src_[p] != '\n') {
            std::size_t len = utf8_len(src_[p]);
            if (p + len < src_.size() && src_[p + len] == '\'') {
                pos_ = p + len + 1;
                return TokenKind::CharLiteral;
            }
            char c = src_[p];
            if (is_ascii_letter(c) || c == '_' || is_non_ascii(c)) {
                pos_ = p;
                ident_rest();
                return TokenKind::SymbolLiteral;
            }
        }
        ++pos_;
        diag("stray quote on line " + std::to_string(start_line));
        return TokenKind::Unknown;
    }

    // Positioned on the opening quote. Handles triple quotes and, for
    // interpolated strings, `${ ... }` splices that may nest strings.
    void string_body(bool interpolated, int start_line) {
        bool triple = src_.substr(pos_, 3) == "\"\"\"";
        pos_ += triple ? 3 : 1;
        while (pos_ < src_.size()) {
            char c = src_[pos_];
            if (triple) {
                if (src_.substr(pos_, 3) == "\"\"\"") {
                    pos_ += 3;
                    while (pos_ < src_.size() && src_[pos_] == '"') ++pos_;
                    return;
                }
            } else {
                if (c == '"') {
                    ++pos_;
                    return;
                }
                if (c == '\n') break;
                if (c == '\\' && !interpolated && pos_ + 1 < src_.size()) {
                    advance();
                    advance();
                    continue;
                }
            }
            if (interpolated && c == '$') {
                if (peek(1) == '{') {
                    pos_ += 2;
                    splice();
                    continue;
                }
                pos_ += (peek(1) == '$' || peek(1) == '"') ? 2 : 1;
                continue;
            }
            advance();
        }
        diag("unterminated string literal starting on line " + std::to_string(start_line));
    }

    void splice() {
        int depth = 1;
        while (pos_ < src_.size() && depth > 0) {
            char c = src_[pos_];
            if (c == '{') {
                ++depth;
                ++pos_;
            } else if (c == '}') {
                --depth;
                ++pos_;
            } else if (c == '"') {
                string_body(false, line_);
            } else {
                advance();
            }
        }
    }

    std::string_view src_;
    std::size_t pos_ = 0;
    std::size_t line_start_ = 0;
    int line_ = 1;
    bool pending_newline_ = true;
    LexResult out_;
};

}  // namespace detail

inline LexResult lex(std::string_view source) { return detail::Lexer(source).run(); }

/// Punctuation that token bags drop by default.
inline bool is_punctuation(const Token& t) { return t.kind == TokenKind::Punct; }

/// Joins the non-comment tokens of `source` with single spaces.
inline std::string normalize(std::string_view source) {
    auto lexed = lex(source);
    std::string out;
    for (const auto& t : lexed.tokens) {
        if (!out.empty()) out += ' ';
        out += t.text;
    }
    return out;
}

}  // namespace clonescope::scala
