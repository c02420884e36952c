#include <gtest/gtest.h>

#include <string>
#include <vector>

#include "clonescope/scala_lexer.hpp"

namespace scala = clonescope::scala;
using scala::TokenKind;

namespace {

std::vector<std::string> texts(const std::string& src) {
    std::vector<std::string> out;
    for (const auto& t : scala::lex(src).tokens) out.push_back(t.text);
    return out;
}

std::vector<TokenKind> kinds(const std::string& src) {
    std::vector<TokenKind> out;
    for (const auto& t : scala::lex(src).tokens) out.push_back(t.kind);
    return out;
}

}  // namespace

TEST(Lexer, WildcardStarSplitsIntoTwoTokens) {
    EXPECT_EQ(texts("case Array(_, a, _*) => a"),
              (std::vector<std::string>{"case", "Array", "(", "_", ",", "a", ",", "_", "*", ")", "=>", "a"}));
}

TEST(Lexer, UnderscoreJoinsOperatorSuffixOnlyAfterLetters) {
    EXPECT_EQ(texts("unary_! x_1"), (std::vector<std::string>{"unary_!", "x_1"}));
}

TEST(Lexer, CommentsAreDropped) {
    const std::string src = "val a = 1 // trailing\n/* block /* nested */ still */ val b = 2";
    EXPECT_EQ(texts(src), (std::vector<std::string>{"val", "a", "=", "1", "val", "b", "=", "2"}));
}

TEST(Lexer, OperatorStopsAtCommentOpener) {
    EXPECT_EQ(texts("a +// c\nb"), (std::vector<std::string>{"a", "+", "b"}));
}

TEST(Lexer, StringForms) {
    const auto toks = scala::lex(R"(s"x=${a + "}"} y" """multi
line""" "esc\"aped" 'c' '\n' 'sym)").tokens;
    ASSERT_EQ(toks.size(), 6U);
    EXPECT_EQ(toks[0].kind, TokenKind::StringLiteral);
    EXPECT_EQ(toks[0].text, R"(s"x=${a + "}"} y")");
    EXPECT_EQ(toks[1].kind, TokenKind::StringLiteral);
    EXPECT_EQ(toks[1].end_line, 2);
    EXPECT_EQ(toks[2].text, R"("esc\"aped")");
    EXPECT_EQ(toks[3].kind, TokenKind::CharLiteral);
    EXPECT_EQ(toks[4].kind, TokenKind::CharLiteral);
    EXPECT_EQ(toks[5].kind, TokenKind::SymbolLiteral);
}

TEST(Lexer, NumberForms) {
    EXPECT_EQ(kinds("0xFF 1_000 3.14 1e10 2f 10L .5"),
              (std::vector<TokenKind>{TokenKind::IntLiteral, TokenKind::IntLiteral, TokenKind::FloatLiteral,
                                      TokenKind::FloatLiteral, TokenKind::FloatLiteral, TokenKind::IntLiteral,
                                      TokenKind::FloatLiteral}));
}

TEST(Lexer, KeywordsAndReservedOperators) {
    const auto toks = scala::lex("def f(x: Int) = x match { case _ => true }").tokens;
    EXPECT_TRUE(toks[0].is_keyword("def"));
    EXPECT_EQ(toks[1].kind, TokenKind::Identifier);
    EXPECT_TRUE(toks[4].is_op(":"));
    EXPECT_TRUE(toks[7].is_op("="));
    EXPECT_TRUE(toks[12].is_keyword("_"));
    EXPECT_TRUE(toks[14].is_literal());
}

TEST(Lexer, BackquotedIdentifier) {
    const auto toks = scala::lex("val `type` = 1").tokens;
    ASSERT_EQ(toks.size(), 4U);
    EXPECT_EQ(toks[1].kind, TokenKind::Identifier);
    EXPECT_EQ(toks[1].text, "`type`");
}

TEST(Lexer, UnicodeArrowIsOperator) {
    const auto toks = scala::lex("for (x ← xs) yield x ⇒ x").tokens;
    EXPECT_TRUE(toks[3].is_op("←"));
}

TEST(Lexer, CodeLinesIgnoreCommentsAndBlanks) {
    const auto r = scala::lex("// header\n\nval a = 1\n/* x\n y */\nval b =\n  2\n");
    EXPECT_EQ(r.code_lines, (std::set<int>{3, 6, 7}));
}

TEST(Lexer, NewlineFlag) {
    const auto toks = scala::lex("a\n  b c").tokens;
    EXPECT_TRUE(toks[0].newline_before);
    EXPECT_TRUE(toks[1].newline_before);
    EXPECT_FALSE(toks[2].newline_before);
}

TEST(Lexer, UnterminatedInputDoesNotCrash) {
    for (const std::string src : {"\"abc", "/* open", "'", "s\"${", "\"\"\"never", "`x", "0x"}) {
        const auto r = scala::lex(src);
        EXPECT_LE(r.tokens.size(), 3U) << src;
    }
}

TEST(Normalize, CollapsesWhitespaceAndDropsComments) {
    EXPECT_EQ(scala::normalize("def  f ( x )  =\n\t// c\n  x /* y */ + 1"), "def f ( x ) = x + 1");
}

TEST(Normalize, Idempotent) {
    const std::string src =
        "def f(xs: List[Int]): Int = {\n  // sum\n  xs.foldLeft(0)(_ + _) /* done */\n}\n";
    const auto once = scala::normalize(src);
    EXPECT_EQ(scala::normalize(once), once);
}

TEST(Normalize, PreservesStringContents) {
    EXPECT_EQ(scala::normalize("println(\"a  //  b\")"), "println ( \"a  //  b\" )");
}
