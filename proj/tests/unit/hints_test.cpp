#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "logon/proof.hpp"
#include "logon/render.hpp"

using namespace logon;
using logon::testing::readData;

namespace {

std::string plWithExample(std::string_view def) {
  std::string pl = readData("pl.mmt");
  auto at = pl.find("[A] impI [p] andI p p");
  return pl.replace(at, std::string_view("[A] impI [p] andI p p").size(), def);
}

ProjectCheck check(const std::string& pl) {
  std::vector<Document> docs;
  docs.push_back(parseDocument(readData("lf.mmt"), "lf.mmt"));
  docs.push_back(parseDocument(pl, "pl.mmt"));
  return checkDocuments(std::move(docs));
}

std::vector<Hint> hintsAtFirstHole(const ProjectCheck& pc) {
  const auto* unit = pc.unit(SlotId::definiens("PL?example"));
  const auto* r = pc.store.find(unit->id);
  auto holes = findHoles(r->elaboratedSubject);
  if (holes.empty()) return {};
  return hintsFor(pc, *unit, holes.front());
}

bool hasHint(const std::vector<Hint>& hs, std::string_view text) {
  return std::any_of(hs.begin(), hs.end(), [&](const Hint& h) { return h.renderedText == text; });
}

std::string texts(const std::vector<Hint>& hs) {
  std::string s;
  for (const auto& h : hs) s += h.renderedText + " (" + std::to_string(h.remainingGoals) + ")\n";
  return s;
}

}  // namespace

TEST(HintsTest, HoleIsTypedByItsContent) {
  auto pc = check(plWithExample("[A] ⟨ded (A⟹(A∧A))⟩"));
  EXPECT_EQ(pc.errorCount(), 0u);
  auto* r = pc.store.find(SlotId::definiens("PL?example"));
  auto holes = findHoles(r->elaboratedSubject);
  ASSERT_EQ(holes.size(), 1u);
  ASSERT_EQ(holes[0].ctx.size(), 1u);
  EXPECT_EQ(holes[0].ctx[0].name, "A");
  EXPECT_EQ(renderText(holes[0].expected, pc.tables.at("PL")), "ded (A⟹A∧A)");
}

TEST(HintsTest, ImplicationIntroduction) {
  auto pc = check(plWithExample("[A] ⟨ded (A⟹(A∧A))⟩"));
  auto hs = hintsAtFirstHole(pc);
  ASSERT_FALSE(hs.empty());
  EXPECT_EQ(hs.front().headName, "impI") << texts(hs);
  EXPECT_EQ(hs.front().renderedText, "impI ⟨ded A → ded (A∧A)⟩");
  EXPECT_EQ(hs.front().remainingGoals, 1);
  RenderOptions all{.showInferred = true};
  EXPECT_EQ(renderText(hs.front().insertion, pc.tables.at("PL"), all), "impI A (A∧A) ⟨ded A → ded (A∧A)⟩");
}

TEST(HintsTest, LambdaIntroduction) {
  auto pc = check(plWithExample("[A] impI ⟨ded A → ded (A∧A)⟩"));
  auto hs = hintsAtFirstHole(pc);
  EXPECT_TRUE(hasHint(hs, "[p] ⟨ded (A∧A)⟩")) << texts(hs);
}

TEST(HintsTest, PropositionHoleOffersConnectivesAndVariables) {
  auto pc = check(plWithExample("[A] impI [p] andI ⟨ded A⟩ p"));
  auto hs = hintsAtFirstHole(pc);
  // p : ded A closes the goal immediately
  ASSERT_FALSE(hs.empty());
  EXPECT_EQ(hs.front().renderedText, "p") << texts(hs);
  EXPECT_EQ(hs.front().remainingGoals, 0);
}

TEST(HintsTest, GreedyCompletionReachesTheProof) {
  std::vector<SourceFile> files{{"lf.mmt", readData("lf.mmt")},
                                {"pl.mmt", plWithExample("[A] ⟨ded (A⟹(A∧A))⟩")}};
  auto res = greedyComplete(files, SlotId::definiens("PL?example"));
  std::string trace;
  for (const auto& t : res.texts) trace += t + "\n";
  EXPECT_LE(res.rounds, 4) << trace;
  EXPECT_TRUE(res.holeFree) << trace;
  EXPECT_EQ(res.errors, 0u) << trace;
  EXPECT_EQ(res.finalText, "[A] impI [p] andI p p") << trace;
}
