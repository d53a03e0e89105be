#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "logon/checker.hpp"
#include "logon/render.hpp"

using namespace logon;
using logon::testing::readData;

namespace {

ProjectCheck checkFixtures(std::string pl = readData("pl.mmt")) {
  std::vector<Document> docs;
  docs.push_back(parseDocument(readData("lf.mmt"), "lf.mmt"));
  docs.push_back(parseDocument(pl, "pl.mmt"));
  return checkDocuments(std::move(docs));
}

std::string dump(const std::vector<Diagnostic>& ds) {
  std::string s;
  for (const auto& d : ds) {
    s += d.range.file + ":" + std::to_string(d.range.start) + " " + d.message + "\n";
    for (const auto& l : d.log) s += "    " + l + "\n";
  }
  return s;
}

}  // namespace

TEST(CheckerTest, FixturesHaveNoErrors) {
  auto pc = checkFixtures();
  EXPECT_EQ(pc.errorCount(), 0u) << dump(pc.diagnostics);
  // lf has no typed constants; pl has 7 types and 1 definiens
  EXPECT_EQ(pc.structure.units.size(), 8u);
}

TEST(CheckerTest, ExampleElaboration) {
  auto pc = checkFixtures();
  auto* r = pc.store.find(SlotId::definiens("PL?example"));
  ASSERT_NE(r, nullptr);
  ASSERT_TRUE(r->ok()) << dump(pc.diagnostics);
  const auto& table = pc.tables.at("PL");
  EXPECT_EQ(renderText(r->elaboratedSubject, table, {.showInferred = true}),
            "[A:prop] impI A (A∧A) ([p:ded A] andI A A p p)");
  EXPECT_EQ(renderText(r->elaboratedSubject, table), "[A] impI [p] andI p p");
  auto parsed = pc.parsed.at(SlotId::definiens("PL?example")).term;
  EXPECT_TRUE(erasesTo(r->elaboratedSubject, parsed, lf::rules()));
}

TEST(CheckerTest, ExampleDependencies) {
  auto pc = checkFixtures();
  auto* r = pc.store.find(SlotId::definiens("PL?example"));
  ASSERT_NE(r, nullptr);
  EXPECT_TRUE(r->dependencies.count(SlotId::type("PL?impI")));
  EXPECT_TRUE(r->dependencies.count(SlotId::type("PL?andI")));
}

namespace {

std::string withEquiv(std::string_view body) {
  std::string pl = readData("pl.mmt");
  auto end = pl.rfind("❚");
  return pl.substr(0, end) + "  equiv : prop → prop → prop ❘ = " + std::string(body) + " ❙\n" +
         pl.substr(end);
}

}  // namespace

TEST(CheckerTest, EquivalenceChecks) {
  auto pc = checkFixtures(withEquiv("[x,y] (x⟹y) ∧ (y⟹x)"));
  EXPECT_EQ(pc.errorCount(), 0u) << dump(pc.diagnostics);
}

TEST(CheckerTest, ErrorRecoveryKeepsBinderTypes) {
  auto pc = checkFixtures(withEquiv("[x,y] (x⟹y) ∧ ded"));
  ASSERT_EQ(pc.errorCount(), 1u) << dump(pc.diagnostics);
  const auto& d = pc.diagnostics.front();
  EXPECT_NE(std::find(d.log.begin(), d.log.end(), "ded : prop"), d.log.end()) << dump(pc.diagnostics);
  auto* r = pc.store.find(SlotId::definiens("PL?equiv"));
  ASSERT_NE(r, nullptr);
  // x's type is a plain meta, y's is raised over x; both are solved
  const auto& parsed = pc.parsed.at(SlotId::definiens("PL?equiv"));
  ASSERT_GE(parsed.metas.size(), 2u);
  for (int i = 0; i < 2; ++i) EXPECT_TRUE(r->solved.at(parsed.metas[i].name));
  const auto& e = r->elaboratedSubject;
  ASSERT_EQ(e->bound().size(), 1u);
  EXPECT_EQ(debugString(e->bound()[0].type), "PL?prop");
  const auto& inner = e->args()[0];
  ASSERT_EQ(inner->bound().size(), 1u);
  EXPECT_EQ(debugString(inner->bound()[0].type), "PL?prop");
  // the erroneous region is the injected constant
  auto src = withEquiv("[x,y] (x⟹y) ∧ ded");
  EXPECT_EQ(src.substr(d.range.start, d.range.end - d.range.start), "ded");
}
