#pragma once

// Syntax trees for single Scala methods.
//
// The parser reads the token stream of a method's normalized body, so line
// breaks carry no meaning here: statements are separated by `;`, by a token
// that cannot continue the current expression, or by the end of the block.
// Node labels name syntactic categories only; identifier and literal text
// never appears in a label.

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "clonescope/error.hpp"
#include "clonescope/scala_lexer.hpp"

namespace clonescope::scala {

struct SyntaxNode {
    std::string label;
    std::vector<SyntaxNode> children;

    SyntaxNode() = default;
    explicit SyntaxNode(std::string l) : label(std::move(l)) {}
    SyntaxNode(std::string l, std::vector<SyntaxNode> c) : label(std::move(l)), children(std::move(c)) {}
};

inline void preorder(const SyntaxNode& node, std::vector<std::string>& out) {
    out.push_back(node.label);
    for (const auto& c : node.children) preorder(c, out);
}

inline std::vector<std::string> preorder(const SyntaxNode& node) {
    std::vector<std::string> out;
    preorder(node, out);
    return out;
}

namespace detail {

class MethodParser {
public:
    explicit MethodParser(std::vector<Token> toks) : toks_(std::move(toks)), enclosing_(toks_.size(), 0) {
        std::vector<char> open;
        for (std::size_t i = 0; i < toks_.size(); ++i) {
            const auto& t = toks_[i];
            if (t.is_punct(")") || t.is_punct("]") || t.is_punct("}")) {
                if (!open.empty()) open.pop_back();
            }
            enclosing_[i] = open.empty() ? '\0' : open.back();
            if (t.is_punct("(") || t.is_punct("[") || t.is_punct("{")) open.push_back(t.text[0]);
        }
    }

    SyntaxNode parse_method() {
        if (!cur().is_keyword("def")) fail("method must start with 'def'");
        SyntaxNode def = def_header();
        if (accept_op("=")) {
            auto stats = block_stats(/*case_body=*/false);
            if (stats.size() == 1) {
                def.children.push_back(std::move(stats.front()));
            } else {
                def.children.emplace_back("Block", std::move(stats));
            }
        } else if (cur().is_punct("{")) {
            def.children.push_back(brace_expr());
        } else {
            fail("method has no body");
        }
        if (!at_end()) fail("unexpected trailing token '" + cur().text + "'");
        return def;
    }

private:
    // ---- token access -------------------------------------------------

    [[nodiscard]] bool at_end() const { return pos_ >= toks_.size(); }

    [[nodiscard]] const Token& cur() const { return peek(0); }

    [[nodiscard]] const Token& peek(std::size_t ahead) const {
        static const Token kEnd{TokenKind::Unknown, "<eof>"};
        return pos_ + ahead < toks_.size() ? toks_[pos_ + ahead] : kEnd;
    }

    [[nodiscard]] bool statement_level() const {
        return pos_ < toks_.size() && enclosing_[pos_] != '(' && enclosing_[pos_] != '[';
    }

    [[noreturn]] void fail(const std::string& what) const {
        throw ParseError(what + " at token " + std::to_string(pos_));
    }

    void next() {
        if (at_end()) fail("unexpected end of method");
        ++pos_;
    }

    bool accept_punct(std::string_view p) {
        if (!cur().is_punct(p)) return false;
        ++pos_;
        return true;
    }
    bool accept_op(std::string_view p) {
        if (!cur().is_op(p)) return false;
        ++pos_;
        return true;
    }
    bool accept_keyword(std::string_view k) {
        if (!cur().is_keyword(k)) return false;
        ++pos_;
        return true;
    }
    void expect_punct(std::string_view p) {
        if (!accept_punct(p)) fail("expected '" + std::string(p) + "', found '" + cur().text + "'");
    }
    void expect_op(std::string_view p) {
        if (!accept_op(p)) fail("expected '" + std::string(p) + "', found '" + cur().text + "'");
    }

    struct DepthGuard {
        explicit DepthGuard(MethodParser& p) : parser(p) {
            if (++parser.depth_ > 400) parser.fail("nesting too deep");
        }
        ~DepthGuard() { --parser.depth_; }
        DepthGuard(const DepthGuard&) = delete;
        DepthGuard& operator=(const DepthGuard&) = delete;
        MethodParser& parser;
    };

    // Skips a balanced bracket group starting at the current opener.
    void skip_balanced() {
        int depth = 0;
        do {
            const auto& t = cur();
            if (t.is_punct("(") || t.is_punct("[") || t.is_punct("{")) ++depth;
            if (t.is_punct(")") || t.is_punct("]") || t.is_punct("}")) --depth;
            next();
        } while (depth > 0);
    }

    [[nodiscard]] static bool is_name(const Token& t) {
        return t.kind == TokenKind::Identifier || t.kind == TokenKind::Operator;
    }

    [[nodiscard]] static bool is_reserved_op(const Token& t) {
        return t.kind == TokenKind::Operator &&
               (t.text == "=" || t.text == "=>" || t.text == "<-" || t.text == ":" ||
                t.text == "@" || t.text == "#" || t.text == "⇒" || t.text == "←" ||
                t.text == "<:" || t.text == ">:" || t.text == "<%");
    }

    [[nodiscard]] static bool can_start_operand(const Token& t) {
        switch (t.kind) {
            case TokenKind::Identifier:
            case TokenKind::IntLiteral:
            case TokenKind::FloatLiteral:
            case TokenKind::StringLiteral:
            case TokenKind::CharLiteral:
            case TokenKind::SymbolLiteral:
                return true;
            case TokenKind::Punct:
                return t.text == "(" || t.text == "{";
            case TokenKind::Keyword:
                return t.text == "this" || t.text == "super" || t.text == "new" ||
                       t.text == "null" || t.text == "true" || t.text == "false" ||
                       t.text == "_" || t.text == "if" || t.text == "while" || t.text == "try" ||
                       t.text == "for" || t.text == "throw" || t.text == "return" || t.text == "do";
            case TokenKind::Operator:
                return t.text == "-" || t.text == "+" || t.text == "!" || t.text == "~";
            default:
                return false;
        }
    }

    // ---- definitions --------------------------------------------------

    SyntaxNode def_header() {
        next();  // def
        if (!is_name(cur())) fail("expected method name");
        next();
        SyntaxNode def("DefDef");
        if (cur().is_punct("[")) {
            skip_balanced();
            def.children.emplace_back("TypeParams");
        }
        while (cur().is_punct("(")) def.children.push_back(param_clause());
        if (accept_op(":")) def.children.push_back(type());
        return def;
    }

    SyntaxNode param_clause() {
        expect_punct("(");
        SyntaxNode clause("ParamClause");
        if (!accept_keyword("implicit") && cur().is(TokenKind::Identifier, "using") && is_name(peek(1))) next();
        while (!cur().is_punct(")")) {
            skip_modifiers();
            SyntaxNode param("Param");
            if (cur().is_keyword("val") || cur().is_keyword("var")) next();
            if (!is_name(cur()) && !cur().is_keyword("_")) fail("expected parameter name");
            next();
            if (accept_op(":")) param.children.push_back(type(/*allow_function=*/true, /*by_name=*/true));
            if (accept_op("=")) param.children.emplace_back("Default", std::vector{expr()});
            clause.children.push_back(std::move(param));
            if (!accept_punct(",")) break;
        }
        expect_punct(")");
        return clause;
    }

    void skip_modifiers() {
        for (;;) {
            const auto& t = cur();
            if (t.is_keyword("implicit") || t.is_keyword("lazy") || t.is_keyword("final") ||
                t.is_keyword("override") || t.is_keyword("abstract") || t.is_keyword("sealed") ||
                t.is(TokenKind::Identifier, "inline") || t.is(TokenKind::Identifier, "transparent")) {
                if (t.kind == TokenKind::Identifier && !(peek(1).is_keyword("def") || peek(1).is_keyword("val"))) {
                    return;
                }
                next();
            } else if (t.is_keyword("private") || t.is_keyword("protected")) {
                next();
                if (cur().is_punct("[")) skip_balanced();
            } else if (t.is_op("@")) {
                next();
                if (!is_name(cur())) fail("expected annotation name");
                next();
                while (accept_punct(".")) next();
                while (cur().is_punct("(")) skip_balanced();
            } else {
                return;
            }
        }
    }

    // ---- types (consumed, reported as one node) -------------------------

    SyntaxNode type(bool allow_function = true, bool by_name = false) {
        DepthGuard guard(*this);
        if (by_name && (cur().is_op("=>") || cur().is_op("⇒"))) next();
        compound_type();
        if (allow_function) {
            while (cur().is_op("|") || cur().is_op("&")) {
                next();
                compound_type();
            }
            if (cur().is_op("=>") || cur().is_op("⇒")) {
                next();
                type(true);
            }
        }
        if (cur().is_op("*") && (peek(1).is_punct(")") || peek(1).is_punct(",") || at_end_after(1))) next();
        if (cur().is_keyword("forSome")) {
            next();
            skip_balanced();
        }
        return SyntaxNode("Type");
    }

    [[nodiscard]] bool at_end_after(std::size_t k) const { return pos_ + k >= toks_.size(); }

    void compound_type() {
        annot_type();
        while (accept_keyword("with")) annot_type();
        if (cur().is_punct("{")) skip_balanced();  // structural refinement
    }

    void annot_type() {
        simple_type();
        for (;;) {
            if (cur().is_punct("[")) {
                type_args();
            } else if (cur().is_op("#")) {
                next();
                next();
            } else {
                break;
            }
        }
    }

    void type_args() {
        expect_punct("[");
        while (!cur().is_punct("]")) {
            type();
            if (!accept_punct(",")) break;
        }
        expect_punct("]");
    }

    void simple_type() {
        const auto& t = cur();
        if (t.is_punct("(")) {
            next();
            while (!cur().is_punct(")")) {
                type(true, true);
                if (!accept_punct(",")) break;
            }
            expect_punct(")");
            return;
        }
        if (t.is_keyword("_") || t.is_op("?")) {
            next();
            while (cur().is_op("<:") || cur().is_op(">:")) {
                next();
                annot_type();
            }
            return;
        }
        if (t.is_literal()) {
            next();
            return;
        }
        if (t.kind == TokenKind::Identifier || t.is_keyword("this") || t.is_keyword("super")) {
            next();
            while (cur().is_punct(".")) {
                next();
                if (cur().is_keyword("type")) {
                    next();
                    return;
                }
                if (!is_name(cur()) && !cur().is_keyword("this")) fail("expected type name");
                next();
            }
            return;
        }
        fail("expected type, found '" + t.text + "'");
    }

    // ---- statements -----------------------------------------------------

    // Statements up to `}` / end of input, or up to the next `case` in a case body.
    std::vector<SyntaxNode> block_stats(bool case_body) {
        std::vector<SyntaxNode> stats;
        for (;;) {
            while (accept_punct(";")) {}
            if (at_end() || cur().is_punct("}") || cur().is_punct(")")) break;
            if (case_body && cur().is_keyword("case") && !peek(1).is_keyword("class") &&
                !peek(1).is_keyword("object")) {
                break;
            }
            std::size_t before = pos_;
            stats.push_back(statement());
            if (pos_ == before) fail("parser made no progress");
        }
        return stats;
    }

    SyntaxNode statement() {
        DepthGuard guard(*this);
        skip_modifiers();
        const auto& t = cur();
        if (t.is_keyword("val") || t.is_keyword("var")) {
            SyntaxNode node(t.text == "val" ? "ValDef" : "VarDef");
            next();
            node.children.push_back(pattern(/*allow_typed=*/false));
            while (accept_punct(",")) node.children.push_back(pattern(false));
            if (accept_op(":")) node.children.push_back(type());
            if (accept_op("=")) node.children.push_back(expr());
            return node;
        }
        if (t.is_keyword("def")) {
            SyntaxNode def = def_header();
            if (accept_op("=")) {
                def.children.push_back(expr());
            } else if (cur().is_punct("{")) {
                def.children.push_back(brace_expr());
            }
            return def;
        }
        if (t.is_keyword("import")) return import_stat();
        if (t.is_keyword("class") || t.is_keyword("trait") || t.is_keyword("object") ||
            t.is_keyword("enum") || (t.is_keyword("case") && (peek(1).is_keyword("class") || peek(1).is_keyword("object")))) {
            return template_def();
        }
        if (t.is_keyword("type")) {
            next();
            next();
            if (cur().is_punct("[")) skip_balanced();
            if (accept_op("=")) type();
            return SyntaxNode("TypeDef");
        }
        return expr();
    }

    SyntaxNode import_stat() {
        next();  // import
        for (;;) {
            if (cur().is_punct("{")) {
                skip_balanced();
            } else if (is_name(cur()) || cur().is_keyword("_") || cur().is_keyword("given") ||
                       cur().is_keyword("this")) {
                next();
            } else {
                fail("malformed import");
            }
            if (!accept_punct(".") && !accept_punct(",")) break;
        }
        return SyntaxNode("Import");
    }

    SyntaxNode template_def() {
        accept_keyword("case");
        next();  // class / trait / object / enum
        if (!is_name(cur())) fail("expected template name");
        next();
        if (cur().is_punct("[")) skip_balanced();
        skip_modifiers();
        while (cur().is_punct("(")) skip_balanced();
        if (accept_keyword("extends")) {
            annot_type();
            while (cur().is_punct("(")) skip_balanced();
            while (accept_keyword("with")) annot_type();
        }
        if (cur().is_punct("{")) skip_balanced();
        return SyntaxNode("TemplateDef");
    }

    // ---- expressions ----------------------------------------------------

    // True when the tokens at the cursor form a lambda parameter list followed by `=>`.
    [[nodiscard]] std::size_t lambda_header_length() const {
        const auto& t = cur();
        auto arrow = [](const Token& a) { return a.is_op("=>") || a.is_op("⇒"); };
        if ((t.kind == TokenKind::Identifier || t.is_keyword("_")) && arrow(peek(1))) return 2;
        if (t.is_keyword("implicit") && peek(1).kind == TokenKind::Identifier && arrow(peek(2))) return 3;
        if (t.is_punct("(")) {
            int depth = 0;
            for (std::size_t k = pos_; k < toks_.size(); ++k) {
                if (toks_[k].is_punct("(") || toks_[k].is_punct("[") || toks_[k].is_punct("{")) ++depth;
                if (toks_[k].is_punct(")") || toks_[k].is_punct("]") || toks_[k].is_punct("}")) {
                    if (--depth == 0) {
                        return k + 1 < toks_.size() && arrow(toks_[k + 1]) ? k + 2 - pos_ : 0;
                    }
                }
            }
        }
        return 0;
    }

    SyntaxNode lambda_params() {
        SyntaxNode params("LambdaParams");
        if (accept_keyword("implicit")) {}
        if (cur().is_punct("(")) {
            next();
            while (!cur().is_punct(")")) {
                skip_modifiers();
                SyntaxNode p("Param");
                next();
                if (accept_op(":")) p.children.push_back(type(true, true));
                params.children.push_back(std::move(p));
                if (!accept_punct(",")) break;
            }
            expect_punct(")");
        } else {
            next();
            params.children.emplace_back("Param");
        }
        next();  // =>
        return params;
    }

    SyntaxNode expr() {
        DepthGuard guard(*this);
        if (lambda_header_length() > 0) {
            SyntaxNode lambda("Lambda");
            lambda.children.push_back(lambda_params());
            lambda.children.push_back(expr());
            return lambda;
        }
        const auto& t = cur();
        if (t.is_keyword("if")) return if_expr();
        if (t.is_keyword("while")) return while_expr();
        if (t.is_keyword("do")) {
            next();
            SyntaxNode node("DoWhile", std::vector{expr()});
            while (accept_punct(";")) {}
            if (!accept_keyword("while")) fail("expected 'while' after do body");
            node.children.push_back(condition());
            return node;
        }
        if (t.is_keyword("for")) return for_expr();
        if (t.is_keyword("try")) return try_expr();
        if (t.is_keyword("throw")) {
            next();
            return SyntaxNode("Throw", std::vector{expr()});
        }
        if (t.is_keyword("return")) {
            next();
            SyntaxNode node("Return");
            if (can_start_operand(cur())) node.children.push_back(expr());
            return node;
        }

        SyntaxNode e = postfix_expr();
        if (accept_op("=")) return SyntaxNode("Assign", {std::move(e), expr()});
        if (cur().is_op(":")) {
            next();
            if (cur().is_keyword("_") && peek(1).is_op("*")) {
                next();
                next();
                return SyntaxNode("SeqArg", std::vector{std::move(e)});
            }
            return SyntaxNode("Ascription", {std::move(e), type()});
        }
        return e;
    }

    SyntaxNode condition() {
        if (cur().is_punct("(")) {
            next();
            SyntaxNode c = expr();
            expect_punct(")");
            return c;
        }
        return postfix_expr();
    }

    SyntaxNode if_expr() {
        next();
        SyntaxNode node("If");
        if (cur().is_punct("(")) {
            node.children.push_back(condition());
            accept_keyword("then");
        } else {
            // Scala 3: `if cond then expr`
            node.children.push_back(postfix_expr());
            if (!accept_keyword("then")) fail("expected 'then'");
        }
        node.children.push_back(expr());
        while (accept_punct(";")) {}
        if (accept_keyword("else")) node.children.push_back(expr());
        return node;
    }

    SyntaxNode while_expr() {
        next();
        SyntaxNode node("While");
        node.children.push_back(condition());
        accept_keyword("do");
        node.children.push_back(expr());
        return node;
    }

    SyntaxNode for_expr() {
        next();
        SyntaxNode node("For");
        if (cur().is_punct("(") || cur().is_punct("{")) {
            std::string close = cur().is_punct("(") ? ")" : "}";
            next();
            enumerators(node, [&] { return cur().is_punct(close); });
            expect_punct(close);
        } else {
            enumerators(node, [&] { return cur().is_keyword("yield") || cur().is_keyword("do") || at_end(); });
        }
        if (accept_keyword("yield")) {
            node.label = "ForYield";
        } else {
            accept_keyword("do");
        }
        node.children.push_back(expr());
        return node;
    }

    template <typename Done>
    void enumerators(SyntaxNode& node, Done done) {
        while (!done()) {
            if (accept_punct(";")) continue;
            if (accept_keyword("if")) {
                node.children.emplace_back("Guard", std::vector{postfix_expr()});
                continue;
            }
            accept_keyword("val");
            SyntaxNode pat = pattern(true);
            if (accept_op("<-") || accept_op("←")) {
                node.children.emplace_back("Generator", std::vector<SyntaxNode>{std::move(pat), expr()});
            } else {
                expect_op("=");
                node.children.emplace_back("ForBind", std::vector<SyntaxNode>{std::move(pat), expr()});
            }
        }
    }

    SyntaxNode try_expr() {
        next();
        SyntaxNode node("Try", std::vector{expr()});
        while (accept_punct(";")) {}
        if (accept_keyword("catch")) {
            SyntaxNode c("Catch");
            if (cur().is_punct("{") && peek(1).is_keyword("case")) {
                next();
                c.children = case_clauses();
                expect_punct("}");
            } else if (cur().is_keyword("case")) {
                c.children = case_clauses();
            } else {
                c.children.push_back(expr());
            }
            node.children.push_back(std::move(c));
        }
        while (accept_punct(";")) {}
        if (accept_keyword("finally")) node.children.emplace_back("Finally", std::vector{expr()});
        return node;
    }

    std::vector<SyntaxNode> case_clauses() {
        std::vector<SyntaxNode> clauses;
        while (cur().is_keyword("case")) {
            next();
            SyntaxNode clause("CaseClause");
            clause.children.push_back(pattern(true));
            if (accept_keyword("if")) clause.children.emplace_back("Guard", std::vector{postfix_expr()});
            if (!accept_op("=>") && !accept_op("⇒")) fail("expected '=>' in case clause");
            for (auto& s : block_stats(/*case_body=*/true)) clause.children.push_back(std::move(s));
            clauses.push_back(std::move(clause));
            while (accept_punct(";")) {}
        }
        if (clauses.empty()) fail("expected case clause");
        return clauses;
    }

    SyntaxNode postfix_expr() {
        SyntaxNode e = infix_expr(0);
        while (cur().is_keyword("match")) {
            next();
            SyntaxNode m("Match", std::vector{std::move(e)});
            if (accept_punct("{")) {
                for (auto& c : case_clauses()) m.children.push_back(std::move(c));
                expect_punct("}");
            } else {
                for (auto& c : case_clauses()) m.children.push_back(std::move(c));
            }
            e = std::move(m);
        }
        return e;
    }

    [[nodiscard]] bool is_infix_op(const Token& t) const {
        if (t.kind == TokenKind::Operator) return !is_reserved_op(t);
        if (t.kind == TokenKind::Identifier) {
            // Without line breaks, `a b` could be two statements or an
            // alphanumeric infix call; prefer infix only for simple operands.
            const auto& n = peek(1);
            if (n.kind == TokenKind::Operator) return false;
            if (statement_level()) {
                // Statement level: a call or a closing bracket usually ends a statement.
                if (n.is_punct("(")) return false;
                const auto& p = pos_ > 0 ? toks_[pos_ - 1] : cur();
                if (p.is_punct(")") || p.is_punct("}") || p.is_punct("]")) return false;
            }
            if (n.kind == TokenKind::Keyword) {
                return n.text == "this" || n.text == "super" || n.text == "new" || n.text == "null" ||
                       n.text == "true" || n.text == "false" || n.text == "_";
            }
            return can_start_operand(n);
        }
        return false;
    }

    static int precedence(const std::string& op) {
        const char c = op.front();
        const bool alpha = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_' || c == '$' || c == '`' ||
                           (static_cast<unsigned char>(c) & 0x80U) != 0;
        if (alpha) return 1;
        if (op.size() > 1 && op.back() == '=' && op.front() != '=' && op != "<=" && op != ">=" && op != "!=") {
            return 0;  // assignment operator
        }
        switch (c) {
            case '|': return 2;
            case '^': return 3;
            case '&': return 4;
            case '=': case '!': return 5;
            case '<': case '>': return 6;
            case ':': return 7;
            case '+': case '-': return 8;
            case '*': case '/': case '%': return 9;
            default: return 10;
        }
    }

    SyntaxNode infix_expr(int min_prec) {
        DepthGuard guard(*this);
        SyntaxNode left = prefix_expr();
        while (is_infix_op(cur())) {
            const std::string op = cur().text;
            const int prec = precedence(op);
            if (prec < min_prec) break;
            next();
            if (!can_start_operand(cur())) {
                left = SyntaxNode("Postfix", std::vector{std::move(left)});
                break;
            }
            const bool right_assoc = op.back() == ':';
            SyntaxNode right = infix_expr(right_assoc ? prec : prec + 1);
            left = SyntaxNode("Infix", {std::move(left), std::move(right)});
        }
        return left;
    }

    SyntaxNode prefix_expr() {
        const auto& t = cur();
        if (t.kind == TokenKind::Operator && (t.text == "-" || t.text == "+" || t.text == "!" || t.text == "~")) {
            if (t.text == "-" && (peek(1).kind == TokenKind::IntLiteral || peek(1).kind == TokenKind::FloatLiteral)) {
                next();
                return simple_expr();
            }
            next();
            return SyntaxNode("Prefix", std::vector{simple_expr()});
        }
        return simple_expr();
    }

    SyntaxNode brace_expr() {
        expect_punct("{");
        SyntaxNode node;
        if (cur().is_keyword("case")) {
            node = SyntaxNode("PartialFunction", case_clauses());
        } else if (std::size_t len = lambda_header_length(); len > 0) {
            // `{ x => stats }`: the lambda body runs to the closing brace.
            SyntaxNode lambda("Lambda");
            lambda.children.push_back(lambda_params());
            auto stats = block_stats(false);
            if (stats.size() == 1) {
                lambda.children.push_back(std::move(stats.front()));
            } else {
                lambda.children.emplace_back("Block", std::move(stats));
            }
            node = SyntaxNode("Block", std::vector{std::move(lambda)});
        } else {
            node = SyntaxNode("Block", block_stats(false));
        }
        expect_punct("}");
        return node;
    }

    SyntaxNode args() {
        expect_punct("(");
        SyntaxNode a("Args");
        while (!cur().is_punct(")")) {
            a.children.push_back(expr());
            if (!accept_punct(",")) break;
        }
        expect_punct(")");
        return a;
    }

    SyntaxNode simple_expr() {
        DepthGuard guard(*this);
        const auto& t = cur();
        SyntaxNode base;
        if (t.is_keyword("new")) {
            next();
            base = SyntaxNode("New");
            if (!cur().is_punct("{")) {
                annot_type();
                while (cur().is_punct("(")) base.children.push_back(args());
                while (accept_keyword("with")) annot_type();
            }
            if (cur().is_punct("{")) {
                skip_balanced();
                base.children.emplace_back("TemplateBody");
            }
        } else if (t.is_punct("{")) {
            base = brace_expr();
        } else if (t.is_punct("(")) {
            next();
            std::vector<SyntaxNode> items;
            while (!cur().is_punct(")")) {
                items.push_back(expr());
                if (!accept_punct(",")) break;
            }
            expect_punct(")");
            base = items.size() == 1 ? std::move(items.front()) : SyntaxNode("Tuple", std::move(items));
        } else if (t.is_literal()) {
            next();
            base = SyntaxNode("Literal");
        } else if (t.kind == TokenKind::Identifier) {
            next();
            base = SyntaxNode("Ident");
        } else if (t.is_keyword("this")) {
            next();
            base = SyntaxNode("This");
        } else if (t.is_keyword("super")) {
            next();
            if (cur().is_punct("[")) skip_balanced();
            base = SyntaxNode("Super");
        } else if (t.is_keyword("_")) {
            next();
            base = SyntaxNode("Placeholder");
        } else if (t.is_keyword("if") || t.is_keyword("while") || t.is_keyword("try") || t.is_keyword("for") ||
                   t.is_keyword("throw") || t.is_keyword("return") || t.is_keyword("do")) {
            return expr();
        } else {
            fail("unexpected token '" + t.text + "'");
        }

        for (;;) {
            if ((cur().is_punct("(") || cur().is_punct("{")) && statement_level() && pos_ > 0 &&
                toks_[pos_ - 1].is_punct("}")) {
                break;
            }
            if (cur().is_punct(".")) {
                next();
                if (!is_name(cur()) && !cur().is_keyword("type") && !cur().is_keyword("this") &&
                    !cur().is_keyword("match")) {
                    fail("expected member name after '.'");
                }
                if (cur().is_keyword("match")) break;
                next();
                base = SyntaxNode("Select", std::vector{std::move(base)});
            } else if (cur().is_punct("(")) {
                SyntaxNode call("Apply", std::vector{std::move(base)});
                call.children.push_back(args());
                base = std::move(call);
            } else if (cur().is_punct("[")) {
                type_args();
                base = SyntaxNode("TypeApply", std::vector{std::move(base)});
            } else if (cur().is_punct("{")) {
                SyntaxNode call("Apply", std::vector{std::move(base)});
                call.children.push_back(brace_expr());
                base = std::move(call);
            } else {
                break;
            }
        }
        return base;
    }

    // ---- patterns -------------------------------------------------------

    SyntaxNode pattern(bool allow_typed) {
        DepthGuard guard(*this);
        SyntaxNode p = pattern1(allow_typed);
        if (!cur().is_op("|")) return p;
        SyntaxNode alt("PatAlt", std::vector{std::move(p)});
        while (accept_op("|")) alt.children.push_back(pattern1(allow_typed));
        return alt;
    }

    SyntaxNode pattern1(bool allow_typed) {
        if ((cur().kind == TokenKind::Identifier || cur().is_keyword("_")) && peek(1).is_op(":") && allow_typed) {
            next();
            next();
            return SyntaxNode("PatTyped", std::vector{type(/*allow_function=*/false)});
        }
        return pattern2();
    }

    SyntaxNode pattern2() {
        if (cur().kind == TokenKind::Identifier && peek(1).is_op("@")) {
            next();
            next();
            return SyntaxNode("PatBind", std::vector{pattern3()});
        }
        return pattern3();
    }

    SyntaxNode pattern3() {
        SyntaxNode left = simple_pattern();
        while (cur().kind == TokenKind::Operator && !is_reserved_op(cur()) && !cur().is_op("|")) {
            next();
            left = SyntaxNode("PatInfix", {std::move(left), simple_pattern()});
        }
        return left;
    }

    SyntaxNode pattern_args() {
        expect_punct("(");
        std::vector<SyntaxNode> items;
        while (!cur().is_punct(")")) {
            items.push_back(pattern(true));
            if (!accept_punct(",")) break;
        }
        expect_punct(")");
        return SyntaxNode("", std::move(items));
    }

    SyntaxNode simple_pattern() {
        const auto& t = cur();
        if (t.is_keyword("_")) {
            next();
            if (cur().is_op("*")) {
                next();
                return SyntaxNode("PatSeqWildcard");
            }
            return SyntaxNode("PatWildcard");
        }
        if (t.is_literal() || (t.is_op("-") && (peek(1).kind == TokenKind::IntLiteral ||
                                                 peek(1).kind == TokenKind::FloatLiteral))) {
            if (t.is_op("-")) next();
            next();
            return SyntaxNode("PatLiteral");
        }
        if (t.is_punct("(")) {
            auto items = pattern_args().children;
            if (items.size() == 1) return std::move(items.front());
            return SyntaxNode("PatTuple", std::move(items));
        }
        if (t.kind == TokenKind::Identifier || t.is_keyword("this")) {
            const bool var = t.kind == TokenKind::Identifier && t.text.front() >= 'a' && t.text.front() <= 'z';
            next();
            bool path = false;
            while (cur().is_punct(".") && (is_name(peek(1)) || peek(1).is_keyword("this"))) {
                next();
                next();
                path = true;
            }
            if (cur().is_punct("[")) type_args();
            if (cur().is_punct("(")) return SyntaxNode("PatUnapply", pattern_args().children);
            return SyntaxNode(var && !path ? "PatVar" : "PatStable");
        }
        fail("unexpected token '" + t.text + "' in pattern");
    }

    std::vector<Token> toks_;
    std::vector<char> enclosing_;  // innermost open bracket around each token
    std::size_t pos_ = 0;
    int depth_ = 0;
};

}  // namespace detail

/// Parses one method (text starting at its `def`). Throws ParseError.
inline SyntaxNode parse_method(std::string_view method_source) {
    auto lexed = lex(method_source);
    return detail::MethodParser(std::move(lexed.tokens)).parse_method();
}

}  // namespace clonescope::scala
