#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "clonescope/error.hpp"
#include "clonescope/extractor.hpp"
#include "clonescope/scala_ast.hpp"

namespace clonescope {

enum class ReprKind { Identifier, Ast };

inline std::string_view to_string(ReprKind k) { return k == ReprKind::Identifier ? "identifier" : "ast"; }

inline ReprKind parse_repr_kind(std::string_view s) {
    if (s == "identifier") return ReprKind::Identifier;
    if (s == "ast") return ReprKind::Ast;
    throw DomainError("unknown representation kind: " + std::string(s));
}

struct RepresentationSequence {
    std::string method_id;
    ReprKind kind = ReprKind::Identifier;
    std::vector<std::string> tokens;
    bool degenerate = false;            // no tokens at all
    std::optional<std::string> error;  // AST only: the method did not parse
};

/// Identifier: identifier tokens of the method in source order, without the
/// method's own name. Ast: pre-order node labels of the method's syntax tree.
inline RepresentationSequence extract_representation(const Method& method, ReprKind kind) {
    RepresentationSequence seq;
    seq.method_id = method.id;
    seq.kind = kind;
    if (kind == ReprKind::Identifier) {
        auto lexed = scala::lex(method.normalized_body);
        for (std::size_t i = 0; i < lexed.tokens.size(); ++i) {
            const auto& t = lexed.tokens[i];
            if (t.kind != scala::TokenKind::Identifier) continue;
            if (i == 1 && lexed.tokens[0].is_keyword("def")) continue;
            seq.tokens.push_back(t.text);
        }
    } else {
        try {
            seq.tokens = scala::preorder(scala::parse_method(method.normalized_body));
        } catch (const ParseError& e) {
            seq.error = e.what();
        }
    }
    seq.degenerate = seq.tokens.empty();
    return seq;
}

}  // namespace clonescope
