#pragma once

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "clonescope/error.hpp"
#include "clonescope/scala_lexer.hpp"

namespace clonescope {

using Diagnostics = std::vector<std::string>;

struct SourceFile {
    std::string path;     // corpus-relative, '/' separated
    std::string content;
    int loc = 0;          // non-empty, non-comment lines
};

struct Method {
    std::string id;
    std::string file;
    std::string name;
    int start_line = 0;
    int end_line = 0;
    std::string raw_body;
    std::string normalized_body;
    int effective_lines = 0;
};

/// Multiset of tokens for one method. `size` is the sum of frequencies.
struct TokenBag {
    std::string method_id;
    std::map<std::string, std::uint32_t> entries;
    std::uint64_t size = 0;

    friend bool operator==(const TokenBag&, const TokenBag&) = default;
};

/// Which lexical classes enter a token bag.
struct TokenClasses {
    bool keywords = true;
    bool identifiers = true;
    bool literals = true;
    bool operators = true;
    bool punctuation = false;
};

struct ExtractConfig {
    std::vector<std::string> extensions{".scala"};
    int min_lines = 10;
    TokenClasses token_classes;
};

/// 64-bit FNV-1a, hex encoded.
inline std::string fnv1a_hex(std::string_view data) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    static constexpr char kHex[] = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = kHex[h & 0xFU];
        h >>= 4U;
    }
    return out;
}

/// Content address of (path, start_line, name).
inline std::string method_id(std::string_view path, int start_line, std::string_view name) {
    std::string key;
    key.append(path).push_back('\0');
    key.append(std::to_string(start_line)).push_back('\0');
    key.append(name);
    return fnv1a_hex(key);
}

inline bool valid_utf8(std::string_view s) {
    std::size_t i = 0;
    while (i < s.size()) {
        auto c = static_cast<unsigned char>(s[i]);
        std::size_t len = 0;
        if (c < 0x80) len = 1;
        else if ((c & 0xE0) == 0xC0 && c >= 0xC2) len = 2;
        else if ((c & 0xF0) == 0xE0) len = 3;
        else if ((c & 0xF8) == 0xF0 && c <= 0xF4) len = 4;
        else return false;
        if (i + len > s.size()) return false;
        for (std::size_t k = 1; k < len; ++k) {
            if ((static_cast<unsigned char>(s[i + k]) & 0xC0) != 0x80) return false;
        }
        i += len;
    }
    return true;
}

inline int count_loc(std::string_view content) {
    return static_cast<int>(scala::lex(content).code_lines.size());
}

/// Reads every file under `root` whose extension is listed, sorted by path.
inline std::vector<SourceFile> ingest_corpus(const std::filesystem::path& root,
                                             const std::vector<std::string>& extensions,
                                             Diagnostics* diags = nullptr) {
    namespace fs = std::filesystem;
    std::error_code ec;
    if (!fs::is_directory(root, ec)) {
        throw CorpusError("corpus root is not a readable directory: " + root.string());
    }
    fs::recursive_directory_iterator it(root, fs::directory_options::skip_permission_denied, ec);
    if (ec) throw CorpusError("cannot read corpus root " + root.string() + ": " + ec.message());

    std::vector<SourceFile> files;
    for (; it != fs::recursive_directory_iterator(); it.increment(ec)) {
        if (ec) {
            if (diags) diags->push_back("directory walk error: " + ec.message());
            ec.clear();
            continue;
        }
        if (!it->is_regular_file(ec)) continue;
        const auto ext = it->path().extension().string();
        if (std::find(extensions.begin(), extensions.end(), ext) == extensions.end()) continue;

        std::ifstream in(it->path(), std::ios::binary);
        std::ostringstream buf;
        buf << in.rdbuf();
        if (!in && !in.eof()) {
            if (diags) diags->push_back("skipped unreadable file " + it->path().string());
            continue;
        }
        SourceFile f;
        f.path = fs::relative(it->path(), root, ec).generic_string();
        f.content = buf.str();
        if (!valid_utf8(f.content)) {
            if (diags) diags->push_back("skipped non-UTF-8 file " + f.path);
            continue;
        }
        f.loc = count_loc(f.content);
        files.push_back(std::move(f));
    }
    std::sort(files.begin(), files.end(),
              [](const SourceFile& a, const SourceFile& b) { return a.path < b.path; });
    return files;
}

namespace detail {

using scala::Token;
using scala::TokenKind;

inline bool is_opener(const Token& t) {
    return t.kind == TokenKind::Punct && (t.text == "(" || t.text == "[" || t.text == "{");
}
inline bool is_closer(const Token& t) {
    return t.kind == TokenKind::Punct && (t.text == ")" || t.text == "]" || t.text == "}");
}
inline char matching_opener(char closer) {
    return closer == ')' ? '(' : closer == ']' ? '[' : '{';
}

inline bool can_end_statement(const Token& t) {
    switch (t.kind) {
        case TokenKind::Identifier:
        case TokenKind::IntLiteral:
        case TokenKind::FloatLiteral:
        case TokenKind::StringLiteral:
        case TokenKind::CharLiteral:
        case TokenKind::SymbolLiteral:
        case TokenKind::Unknown:
            return true;
        case TokenKind::Keyword:
            return t.text == "this" || t.text == "null" || t.text == "true" ||
                   t.text == "false" || t.text == "return" || t.text == "_" || t.text == "super";
        case TokenKind::Punct:
            return t.text == ")" || t.text == "]" || t.text == "}";
        case TokenKind::Operator:
            return false;
    }
    return true;
}

inline bool can_begin_statement(const Token& t) {
    switch (t.kind) {
        case TokenKind::Punct:
            return t.text == "(" || t.text == "{" || t.text == "[";
        case TokenKind::Keyword:
            return !(t.text == "else" || t.text == "match" || t.text == "catch" ||
                     t.text == "finally" || t.text == "yield" || t.text == "with" ||
                     t.text == "extends" || t.text == "then" || t.text == "forSome");
        case TokenKind::Operator:
            return t.text == "@";
        default:
            return true;
    }
}

/// Index of the closer matching the opener at `open`, or nullopt.
inline std::optional<std::size_t> match_bracket(const std::vector<Token>& toks, std::size_t open) {
    std::vector<char> stack;
    for (std::size_t k = open; k < toks.size(); ++k) {
        if (is_opener(toks[k])) {
            stack.push_back(toks[k].text[0]);
        } else if (is_closer(toks[k])) {
            if (stack.empty() || stack.back() != matching_opener(toks[k].text[0])) return std::nullopt;
            stack.pop_back();
            if (stack.empty()) return k;
        }
    }
    return std::nullopt;
}

enum class BodyStatus { Complete, Abstract, Unterminated };

struct BodyScan {
    BodyStatus status = BodyStatus::Abstract;
    std::size_t last = 0;  // index of the final body token
};

inline int line_indent(const std::vector<Token>& toks, std::size_t i) {
    std::size_t k = i;
    while (k > 0 && toks[k - 1].line == toks[i].line) --k;
    // A token spanning several lines may own the start of this line.
    if (k > 0 && toks[k - 1].end_line == toks[i].line) return 1;
    return toks[k].column;
}

inline BodyScan scan_expression_body(const std::vector<Token>& toks, std::size_t def_index,
                                     std::size_t start) {
    BodyScan out;
    if (start >= toks.size()) {
        out.status = BodyStatus::Unterminated;
        return out;
    }
    const int indent = line_indent(toks, def_index);
    // Only a braceless block (a body opening with a definition on its own
    // line) is delimited by indentation. Every other body follows the
    // newline rule, so re-indenting the source never moves its end.
    const Token& first = toks[start];
    const bool indent_mode =
        first.newline_before && (first.is_keyword("val") || first.is_keyword("var") || first.is_keyword("def") ||
                                 first.is_keyword("lazy") || first.is_keyword("import") || first.is_keyword("given"));
    std::vector<char> stack;
    std::optional<std::size_t> header_close;  // `)` closing an if/while/for header

    for (std::size_t k = start; k < toks.size(); ++k) {
        const Token& t = toks[k];
        if (k > start && stack.empty()) {
            if (t.is_punct(";")) break;
            if (t.newline_before) {
                if (indent_mode) {
                    if (t.column <= indent) break;
                } else if (can_end_statement(toks[k - 1]) && can_begin_statement(t) &&
                           header_close != k - 1) {
                    break;
                }
            }
        }
        if (is_closer(t)) {
            if (stack.empty()) break;  // enclosing block ends
            if (stack.back() != matching_opener(t.text[0])) {
                out.status = BodyStatus::Unterminated;
                return out;
            }
            stack.pop_back();
        } else if (is_opener(t)) {
            if (stack.empty() && t.is_punct("(") && k > 0 &&
                (toks[k - 1].is_keyword("if") || toks[k - 1].is_keyword("while") ||
                 toks[k - 1].is_keyword("for"))) {
                header_close = match_bracket(toks, k);
            }
            stack.push_back(t.text[0]);
        }
        out.last = k;
    }
    if (!stack.empty()) {
        out.status = BodyStatus::Unterminated;
        return out;
    }
    out.status = out.last >= start ? BodyStatus::Complete : BodyStatus::Unterminated;
    return out;
}

inline BodyScan scan_def(const std::vector<Token>& toks, std::size_t def_index) {
    BodyScan out;
    int depth = 0;
    for (std::size_t j = def_index + 2; j < toks.size(); ++j) {
        const Token& t = toks[j];
        if (depth == 0) {
            if (t.is_op("=")) return scan_expression_body(toks, def_index, j + 1);
            if (t.is_punct("{")) {
                auto close = match_bracket(toks, j);
                if (!close) {
                    out.status = BodyStatus::Unterminated;
                    return out;
                }
                out.status = BodyStatus::Complete;
                out.last = *close;
                return out;
            }
            if (is_closer(t) || t.is_punct(";")) return out;
            if (t.newline_before && !(t.is_punct("(") || t.is_punct("[") || t.is_op(":"))) {
                return out;
            }
        }
        if (is_opener(t)) ++depth;
        if (is_closer(t)) {
            if (--depth < 0) return out;
        }
    }
    out.status = depth > 0 ? BodyStatus::Unterminated : BodyStatus::Abstract;
    return out;
}

/// Byte offset of the first closer that does not match, or npos.
inline std::size_t first_mismatch(const std::vector<Token>& toks) {
    std::vector<char> stack;
    for (const auto& t : toks) {
        if (is_opener(t)) {
            stack.push_back(t.text[0]);
        } else if (is_closer(t)) {
            if (stack.empty() || stack.back() != matching_opener(t.text[0])) return t.offset;
            stack.pop_back();
        }
    }
    return std::string::npos;
}

}  // namespace detail

/// Named `def` definitions (nested ones included) with at least `min_lines`
/// effective lines. Anonymous functions and auxiliary constructors are not
/// methods here.
inline std::vector<Method> extract_methods(const SourceFile& file, int min_lines,
                                           Diagnostics* diags = nullptr) {
    using scala::TokenKind;
    if (min_lines < 1) throw DomainError("min_lines must be at least 1");

    auto lexed = scala::lex(file.content);
    if (diags) {
        for (const auto& d : lexed.diagnostics) diags->push_back(file.path + ": " + d);
    }
    const auto& toks = lexed.tokens;
    const std::size_t mismatch = detail::first_mismatch(toks);
    if (mismatch != std::string::npos && diags) {
        diags->push_back(file.path + ": unbalanced delimiters; methods after byte " +
                         std::to_string(mismatch) + " are ignored");
    }

    std::vector<Method> methods;
    for (std::size_t i = 0; i + 1 < toks.size(); ++i) {
        if (!toks[i].is_keyword("def")) continue;
        const auto& name_tok = toks[i + 1];
        if (name_tok.kind != TokenKind::Identifier && name_tok.kind != TokenKind::Operator) continue;

        auto scan = detail::scan_def(toks, i);
        if (scan.status == detail::BodyStatus::Abstract) continue;
        if (scan.status == detail::BodyStatus::Unterminated) {
            if (diags) {
                diags->push_back(file.path + ":" + std::to_string(toks[i].line) + ": method " +
                                 name_tok.text + " has an unterminated body");
            }
            continue;
        }
        const auto& last = toks[scan.last];
        if (mismatch != std::string::npos && last.end_offset > mismatch) continue;

        Method m;
        m.file = file.path;
        m.name = name_tok.text;
        m.start_line = toks[i].line;
        m.end_line = last.end_line;
        m.effective_lines = static_cast<int>(std::distance(
            lexed.code_lines.lower_bound(m.start_line), lexed.code_lines.upper_bound(m.end_line)));
        if (m.effective_lines < min_lines) continue;
        m.id = method_id(m.file, m.start_line, m.name);
        m.raw_body = file.content.substr(toks[i].offset, last.end_offset - toks[i].offset);
        m.normalized_body = scala::normalize(m.raw_body);
        methods.push_back(std::move(m));
    }
    return methods;
}

/// Extracts every file and orders the result by (path, start_line).
inline std::vector<Method> extract_corpus(const std::vector<SourceFile>& files, int min_lines,
                                          Diagnostics* diags = nullptr) {
    std::vector<Method> all;
    for (const auto& f : files) {
        auto ms = extract_methods(f, min_lines, diags);
        all.insert(all.end(), std::make_move_iterator(ms.begin()), std::make_move_iterator(ms.end()));
    }
    std::stable_sort(all.begin(), all.end(), [](const Method& a, const Method& b) {
        return std::tie(a.file, a.start_line) < std::tie(b.file, b.start_line);
    });
    return all;
}

inline bool keeps(const TokenClasses& classes, const scala::Token& t) {
    using scala::TokenKind;
    if (t.is_literal()) return classes.literals;
    switch (t.kind) {
        case TokenKind::Keyword: return classes.keywords;
        case TokenKind::Identifier: return classes.identifiers;
        case TokenKind::Operator: return classes.operators;
        case TokenKind::Punct: return classes.punctuation;
        default: return true;
    }
}

/// Tokens of `normalized_body` that survive the class filter, in order.
inline std::vector<std::string> token_stream(std::string_view normalized_body,
                                             const TokenClasses& classes = {},
                                             Diagnostics* diags = nullptr) {
    auto lexed = scala::lex(normalized_body);
    if (diags) diags->insert(diags->end(), lexed.diagnostics.begin(), lexed.diagnostics.end());
    std::vector<std::string> out;
    for (auto& t : lexed.tokens) {
        if (keeps(classes, t)) out.push_back(std::move(t.text));
    }
    return out;
}

inline TokenBag tokenize(const Method& method, const TokenClasses& classes = {},
                         Diagnostics* diags = nullptr) {
    if (method.normalized_body.empty()) {
        throw DomainError("method " + method.id + " has an empty normalized body");
    }
    TokenBag bag;
    bag.method_id = method.id;
    for (auto& tok : token_stream(method.normalized_body, classes, diags)) {
        ++bag.entries[tok];
        ++bag.size;
    }
    return bag;
}

}  // namespace clonescope
