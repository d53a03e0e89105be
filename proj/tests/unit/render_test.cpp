#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "logon/checker.hpp"
#include "logon/render.hpp"

using namespace logon;
using logon::testing::Fixtures;

namespace {

const Fixtures& fx() {
  static Fixtures f;
  return f;
}

ParseOptions scoped() {
  ParseOptions o;
  o.scope = {"A", "B", "C"};
  return o;
}

std::string roundTrip(const std::string& text) {
  auto r = fx().parse("PL", text, scoped());
  EXPECT_TRUE(r.errors.empty()) << text;
  return renderText(r.term, fx().table("PL"));
}

}  // namespace

TEST(RenderTest, Canonical) {
  EXPECT_EQ(roundTrip("A ∧ A"), "A∧A");
  EXPECT_EQ(roundTrip("prop → prop → prop"), "prop→prop→prop");
  EXPECT_EQ(roundTrip("(prop → prop) → prop"), "(prop→prop)→prop");
  EXPECT_EQ(roundTrip("{A} ded (A ⟹ (A ∧ A))"), "{A} ded (A⟹A∧A)");
  EXPECT_EQ(roundTrip("{A}{B} ded A → ded B → ded (A∧B)"), "{A} {B} ded A → ded B → ded (A∧B)");
  EXPECT_EQ(roundTrip("[A] impI [p] andI p p"), "[A] impI [p] andI p p");
  EXPECT_EQ(roundTrip("(A ∧ B) ∧ C"), "A∧B∧C");
  EXPECT_EQ(roundTrip("A ∧ (B ∧ C)"), "A∧(B∧C)");
  EXPECT_EQ(roundTrip("⟨ ded A ⟩"), "⟨ded A⟩");
}

TEST(RenderTest, ShowInferredPrintsImplicitArguments) {
  auto r = fx().parse("PL", "[A:prop] andI A A");
  ASSERT_TRUE(r.errors.empty());
  // implicit arguments are metas raised over A, shown only on demand
  EXPECT_EQ(renderText(r.term, fx().table("PL")), "[A:prop] andI A A");
  EXPECT_EQ(renderText(r.term, fx().table("PL"), {.showInferred = true}), "[A:prop] andI (/X1 A) (/X2 A) A A");
}

TEST(RenderTest, ArrowsCanBeDisabled) {
  auto r = fx().parse("PL", "prop → prop");
  RenderOptions o;
  o.arrows = false;
  // the parsed term is an arrow; only Pi terms are affected
  EXPECT_EQ(renderText(r.term, fx().table("PL"), o), "prop→prop");
  auto pi = lf::pi("x", Term::constant("PL?prop"), Term::constant("PL?prop"));
  EXPECT_EQ(renderText(pi, fx().table("PL")), "prop→prop");
  EXPECT_EQ(renderText(pi, fx().table("PL"), o), "{x:prop} prop");
}

TEST(RenderTest, SpansCoverSubterms) {
  auto r = fx().parse("PL", "ded (A∧A)", scoped());
  auto out = render(r.term, fx().table("PL"));
  ASSERT_FALSE(out.spans.empty());
  EXPECT_EQ(out.spans[0].path, std::vector<std::size_t>{});
  EXPECT_EQ(out.spans[0].end, out.text.size());
  for (const auto& s : out.spans) {
    auto sub = childAt(r.term, s.path);
    ASSERT_NE(sub, nullptr);
    auto text = out.text.substr(s.start, s.end - s.start);
    if (sub->isConstant() || sub->isVariable()) {
      EXPECT_NE(text.find(sub->isVariable() ? sub->name() : renderText(sub, fx().table("PL"))), std::string::npos);
    }
  }
  // the parenthesised argument includes its parentheses
  bool found = false;
  for (const auto& s : out.spans)
    if (out.text.substr(s.start, s.end - s.start) == "(A∧A)") found = true;
  EXPECT_TRUE(found);
}

// Every term slot of the fixtures survives parse -> render -> parse.
TEST(RenderTest, FixtureRoundTrip) {
  std::vector<Document> docs{fx().lf, fx().pl};
  auto parsed = parseSlots(docs);
  auto tables = buildTables(docs);
  ASSERT_FALSE(parsed.empty());
  for (const auto& [id, p] : parsed) {
    const auto* src = slotSource(docs, id);
    ASSERT_NE(src, nullptr);
    const auto& table = tables.at(src->theory);
    std::string text = renderText(p.term, table);
    ParsingUnit again{text, SourceRef{"rt", 0, text.size()}, src->theory, id};
    auto q = parseTerm(again, table);
    EXPECT_TRUE(q.errors.empty()) << text;
    EXPECT_TRUE(equalsStructural(stripRefs(p.term), stripRefs(q.term))) << id.str() << ": " << text;
    EXPECT_EQ(renderText(q.term, table), text);
  }
}
