#include <gtest/gtest.h>

#include "fixtures.hpp"

namespace logon {
namespace {

using testing::Fixtures;

class TermParserTest : public ::testing::Test {
 protected:
  Fixtures fx;
};

TEST_F(TermParserTest, InfixAndWithRefs) {
  ParseOptions opts;
  opts.scope = {"p"};
  auto r = fx.parse("PL", "p ∧ p", opts);
  ASSERT_TRUE(r.errors.empty());
  EXPECT_EQ(debugString(r.term), "C[PL?and; ·; $p, $p]");
  EXPECT_EQ(r.term->ref()->start, 0u);
  EXPECT_EQ(r.term->ref()->end, std::string("p ∧ p").size());
  EXPECT_EQ(r.term->args()[0]->ref()->end, 1u);
  EXPECT_EQ(r.term->args()[1]->ref()->start, std::string("p ∧ ").size());
  EXPECT_TRUE(r.metas.empty());
}

TEST_F(TermParserTest, ImplicitArgumentsBecomeMetas) {
  ParseOptions opts;
  opts.scope = {"p"};
  auto r = fx.parse("PL", "andI p p", opts);
  ASSERT_TRUE(r.errors.empty());
  EXPECT_EQ(debugString(r.term), "C[PL?andI; ·; $/X1, $/X2, $p, $p]");
  ASSERT_EQ(r.metas.size(), 2u);
  EXPECT_EQ(r.metas[0].name, "/X1");
  EXPECT_TRUE(r.term->args()[0]->inferred());
  EXPECT_FALSE(r.term->args()[2]->inferred());
}

TEST_F(TermParserTest, OmittedBinderType) {
  auto r = fx.parse("LF", "[x] x");
  ASSERT_TRUE(r.errors.empty());
  EXPECT_EQ(debugString(r.term), "C[LF?lambda; x:$/X1; $x]");
  ASSERT_EQ(r.metas.size(), 1u);
}

TEST_F(TermParserTest, PrecedenceOfConnectives) {
  ParseOptions opts;
  opts.scope = {"a", "b", "c"};
  auto r = fx.parse("PL", "a ∧ b ⟹ c", opts);
  ASSERT_TRUE(r.errors.empty());
  EXPECT_EQ(debugString(r.term), "C[PL?imp; ·; C[PL?and; ·; $a, $b], $c]");
  r = fx.parse("PL", "a ⟹ b ∧ c", opts);
  EXPECT_EQ(debugString(r.term), "C[PL?imp; ·; $a, C[PL?and; ·; $b, $c]]");
  r = fx.parse("PL", "a ∧ b ∧ c", opts);
  EXPECT_EQ(debugString(r.term), "C[PL?and; ·; C[PL?and; ·; $a, $b], $c]");
}

TEST_F(TermParserTest, ArrowAssociatesRight) {
  auto r = fx.parse("PL", "prop → prop → prop");
  ASSERT_TRUE(r.errors.empty());
  EXPECT_EQ(debugString(r.term),
            "C[LF?arrow; ·; PL?prop, C[LF?arrow; ·; PL?prop, PL?prop]]");
}

TEST_F(TermParserTest, JuxtapositionAndDelimitersWithoutSpaces) {
  auto r = fx.parse("PL", "{A}{B} ded A → ded B → ded (A∧B)");
  ASSERT_TRUE(r.errors.empty()) << r.errors.front().message;
  EXPECT_EQ(debugString(r.term),
            "C[LF?Pi; A:$/X1; C[LF?Pi; B:C[LF?apply; ·; $/X2, $A]; "
            "C[LF?arrow; ·; C[LF?apply; ·; PL?ded, $A], C[LF?arrow; ·; C[LF?apply; ·; PL?ded, $B], "
            "C[LF?apply; ·; PL?ded, C[PL?and; ·; $A, $B]]]]]]");
}

TEST_F(TermParserTest, ExampleDefiniens) {
  auto r = fx.parse("PL", "[A] impI [p] andI p p");
  ASSERT_TRUE(r.errors.empty());
  EXPECT_EQ(debugString(r.term),
            "C[LF?lambda; A:$/X1; C[PL?impI; ·; C[LF?apply; ·; $/X5, $A], C[LF?apply; ·; $/X6, $A], "
            "C[LF?lambda; p:C[LF?apply; ·; $/X2, $A]; C[PL?andI; ·; C[LF?apply; ·; $/X3, $A, $p], "
            "C[LF?apply; ·; $/X4, $A, $p], $p, $p]]]]");
}

TEST_F(TermParserTest, BinderSequencesNest) {
  auto r = fx.parse("PL", "[x,y] x ⟹ y");
  ASSERT_TRUE(r.errors.empty());
  ASSERT_TRUE(r.term->hasHead("LF?lambda"));
  ASSERT_TRUE(r.term->args()[0]->hasHead("LF?lambda"));
  auto r2 = fx.parse("PL", "[x y : prop] x");
  ASSERT_TRUE(r2.errors.empty());
  EXPECT_EQ(debugString(r2.term),
            "C[LF?lambda; x:PL?prop; C[LF?lambda; y:PL?prop; $x]]");
}

TEST_F(TermParserTest, ErrorsProducePlaceholders) {
  auto r = fx.parse("PL", "prop → foo → prop");
  ASSERT_EQ(r.errors.size(), 1u);
  EXPECT_EQ(r.errors[0].message, "unknown identifier 'foo'");
  EXPECT_EQ(r.errors[0].ref.start, std::string("prop → ").size());
  EXPECT_TRUE(r.term->hasHead("LF?arrow"));
  EXPECT_TRUE(isErrorMeta(r.term->args()[1]->args()[0]->name()));
}

TEST_F(TermParserTest, UnclosedBinderIsReported) {
  auto r = fx.parse("PL", "[x prop");
  EXPECT_FALSE(r.errors.empty());
  EXPECT_NE(r.term, nullptr);
}

TEST_F(TermParserTest, HoleNotation) {
  auto r = fx.parse("PL", "⟨ded prop⟩");
  ASSERT_TRUE(r.errors.empty());
  EXPECT_EQ(debugString(r.term), "C[LF?hole; ·; C[LF?apply; ·; PL?ded, PL?prop]]");
}

TEST_F(TermParserTest, ParenthesesExtendRefs) {
  auto r = fx.parse("PL", "(prop)");
  ASSERT_TRUE(r.errors.empty());
  EXPECT_EQ(r.term->ref()->start, 0u);
  EXPECT_EQ(r.term->ref()->end, 6u);
}

TEST_F(TermParserTest, ReservedPrefixRejected) {
  auto r = fx.parse("PL", "/X1");
  ASSERT_EQ(r.errors.size(), 1u);
}

TEST_F(TermParserTest, AmbiguityNamesBothHeads) {
  Document doc = parseDocument(
      "theory T = include LF ❙ o : type ❙ f : o → o ❘ # ! 1 prec 50 ❙ g : o → o ❘ # ! 1 prec 50 ❙ c : o ❙ ❚",
      "amb.mmt");
  ASSERT_TRUE(doc.errors.empty());
  TheoryResolver res = [&](std::string_view n) -> const TheoryDecl* {
    if (n == "T") return doc.findTheory("T");
    return fx.theory(n);
  };
  ParsingUnit u{"! c", SourceRef{"x", 0, 3}, "T", SlotId::type("T?u")};
  auto r = parseTerm(u, buildNotationTable("T", res));
  ASSERT_EQ(r.errors.size(), 1u);
  EXPECT_NE(r.errors[0].message.find("T?f"), std::string::npos);
  EXPECT_NE(r.errors[0].message.find("T?g"), std::string::npos);
}

TEST_F(TermParserTest, Deterministic) {
  auto a = fx.parse("PL", "{A}{B} (ded A → ded B) → ded (A⟹B)");
  auto b = fx.parse("PL", "{A}{B} (ded A → ded B) → ded (A⟹B)");
  EXPECT_TRUE(equalsStructural(a.term, b.term));
}

}  // namespace
}  // namespace logon
