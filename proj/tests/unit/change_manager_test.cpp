#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "logon/change_manager.hpp"
#include "logon/serialize.hpp"

using namespace logon;
using logon::testing::readData;

namespace {

const std::string kThms =
    "theory Thms =\n"
    "  include PL ❙\n"
    "  c : {A:prop} ded (A⟹A) ❘ = [A] impI [p] p ❙\n"
    "  d : {B:prop} ded (B⟹B) ❘ = [B] c B ❙\n"
    "❚\n";

std::vector<SourceFile> corpus(std::string thms = kThms) {
  return {{"lf.mmt", readData("lf.mmt")}, {"pl.mmt", readData("pl.mmt")}, {"thms.mmt", std::move(thms)}};
}

std::string replaceOnce(std::string s, std::string_view from, std::string_view to) {
  auto at = s.find(from);
  EXPECT_NE(at, std::string::npos) << from;
  return s.replace(at, from.size(), to);
}

std::set<std::string> revalidated(const DepGraph& g) {
  std::set<std::string> out;
  for (const auto& id : g.lastStats().revalidatedSlots) out.insert(id.str());
  return out;
}

/// Incremental state equals a from-scratch check of the same files.
void expectMatchesFullCheck(const DepGraph& g) {
  DepGraph full;
  full.load(g.files());
  EXPECT_EQ(g.diagnostics(), full.diagnostics());
  ASSERT_EQ(g.store().results().size(), full.store().results().size());
  for (const auto& [id, r] : full.store().results()) {
    const auto* mine = g.store().find(id);
    ASSERT_NE(mine, nullptr) << id.str();
    EXPECT_EQ(toJson(*mine).dump(), toJson(r).dump()) << id.str();
  }
}

}  // namespace

TEST(ChangeManagerTest, LoadChecksEverything) {
  DepGraph g;
  auto st = g.load(corpus());
  EXPECT_EQ(g.errorCount(), 0u);
  EXPECT_EQ(st.revalidated, 12u);  // 8 in PL, 4 in Thms
  auto edges = g.edges();
  EXPECT_TRUE(edges.at(SlotId::definiens("Thms?d")).count(SlotId::type("Thms?c")));
}

TEST(ChangeManagerTest, NoOpEdit) {
  DepGraph g;
  g.load(corpus());
  auto delta = g.checkIncremental("thms.mmt", kThms);
  EXPECT_EQ(g.lastStats().reparsed, 0u);
  EXPECT_EQ(g.lastStats().revalidated, 0u);
  EXPECT_TRUE(delta.added.empty());
  EXPECT_TRUE(delta.removed.empty());
}

TEST(ChangeManagerTest, EditingProofRevalidatesOnlyIt) {
  DepGraph g;
  g.load(corpus());
  g.checkIncremental("thms.mmt", replaceOnce(kThms, "[A] impI [p] p", "[A] impI [q] q"));
  EXPECT_EQ(revalidated(g), std::set<std::string>{"Thms?c#def"});
  expectMatchesFullCheck(g);
}

TEST(ChangeManagerTest, EditingTypeRevalidatesDependents) {
  DepGraph g;
  g.load(corpus());
  g.checkIncremental("thms.mmt", replaceOnce(kThms, "{A:prop} ded (A⟹A)", "{X:prop} ded (X⟹X)"));
  EXPECT_EQ(revalidated(g), (std::set<std::string>{"Thms?c#tp", "Thms?c#def", "Thms?d#def"}));
  expectMatchesFullCheck(g);
}

TEST(ChangeManagerTest, CommentOnlyEditReparsesWithoutRevalidation) {
  DepGraph g;
  g.load(corpus());
  auto plan = g.applyEdit("thms.mmt", replaceOnce(kThms, "[A] impI [p] p", "[A] impI // intro\n [p] p"));
  EXPECT_EQ(plan.reparse, std::set<SlotId>{SlotId::definiens("Thms?c")});
  EXPECT_FALSE(plan.structural);
  g.checkIncremental("thms.mmt", g.file("thms.mmt")->text);
  EXPECT_EQ(g.lastStats().revalidated, 0u);
  expectMatchesFullCheck(g);
}

TEST(ChangeManagerTest, ShiftedSlotsKeepResultsWithNewPositions) {
  DepGraph g;
  g.load(corpus());
  // longer text before everything: nothing is revalidated, refs move
  g.checkIncremental("thms.mmt", replaceOnce(kThms, "theory Thms =", "theory Thms =   "));
  EXPECT_EQ(g.lastStats().revalidated, 0u);
  expectMatchesFullCheck(g);
}

TEST(ChangeManagerTest, AddingConstantIsStructural) {
  DepGraph g;
  g.load(corpus());
  std::string next = replaceOnce(kThms, "❚", "  e : prop ❙\n❚");
  auto plan = g.applyEdit("thms.mmt", next);
  EXPECT_TRUE(plan.structural);
  EXPECT_EQ(plan.reparse, std::set<SlotId>{SlotId::type("Thms?e")});
  g.checkIncremental("thms.mmt", next);
  EXPECT_EQ(revalidated(g), std::set<std::string>{"Thms?e#tp"});
  expectMatchesFullCheck(g);
}

TEST(ChangeManagerTest, FixingAnErrorRevalidatesOneSlot) {
  std::string bad = replaceOnce(kThms, "[B] c B", "[B] c ded");
  DepGraph g;
  g.load(corpus(bad));
  std::size_t before = g.errorCount();
  ASSERT_GE(before, 1u);
  auto delta = g.checkIncremental("thms.mmt", kThms);
  EXPECT_EQ(revalidated(g), std::set<std::string>{"Thms?d#def"});
  EXPECT_EQ(g.errorCount(), 0u);
  EXPECT_EQ(delta.removed.size(), before);
  EXPECT_TRUE(delta.added.empty());
  expectMatchesFullCheck(g);
}

TEST(ChangeManagerTest, RemovingDeclarationRevalidatesUsers) {
  DepGraph g;
  g.load(corpus());
  g.checkIncremental("thms.mmt", replaceOnce(kThms, "  c : {A:prop} ded (A⟹A) ❘ = [A] impI [p] p ❙\n", ""));
  EXPECT_GE(g.errorCount(), 1u);
  expectMatchesFullCheck(g);
}

TEST(ChangeManagerTest, NotationChangeReparsesIncluders) {
  DepGraph g;
  g.load(corpus());
  std::string pl = replaceOnce(readData("pl.mmt"), "# 1 ⟹ 2 prec 10", "# 1 ⇒ 2 prec 10");
  auto plan = g.applyEdit("pl.mmt", pl);
  EXPECT_TRUE(plan.structural);
  EXPECT_TRUE(plan.reparse.count(SlotId::type("Thms?c")));
  g.checkIncremental("pl.mmt", pl);
  EXPECT_GE(g.errorCount(), 1u);  // ⟹ no longer parses
  expectMatchesFullCheck(g);
}

TEST(PropagateTest, ClosureInDependencyOrder) {
  SlotId a = SlotId::type("T?a"), b = SlotId::type("T?b"), c = SlotId::definiens("T?c"), d = SlotId::type("T?d");
  std::map<SlotId, std::set<SlotId>> edges{{b, {a}}, {c, {b}}, {d, {}}};
  EXPECT_EQ(propagate(edges, {{a, true}}), (std::vector<SlotId>{b, c}));
  EXPECT_TRUE(propagate(edges, {{a, false}}).empty());
  EXPECT_TRUE(propagate(edges, {}).empty());
}

TEST(PropagateTest, CycleIsDetected) {
  SlotId a = SlotId::type("T?a"), b = SlotId::type("T?b");
  std::map<SlotId, std::set<SlotId>> edges{{a, {b}}, {b, {a}}};
  EXPECT_THROW(propagate(edges, {{a, true}}), CycleDetected);
}

TEST(ChangeManagerTest, PrecedenceChangeRerendersMessages) {
  DepGraph g;
  g.load(corpus(replaceOnce(kThms, "[B] c B", "[B] c (B∧B)")));
  ASSERT_GE(g.errorCount(), 1u);
  // the failing unit's parse is unchanged, but its log prints ∧ terms
  std::string pl = replaceOnce(readData("pl.mmt"), "prec 20", "prec 5");
  g.checkIncremental("pl.mmt", pl);
  EXPECT_TRUE(revalidated(g).count("Thms?d#def"));
  expectMatchesFullCheck(g);
}
