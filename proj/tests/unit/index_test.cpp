#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "logon/index.hpp"
#include "logon/render.hpp"

using namespace logon;
using logon::testing::readData;

namespace {

const ProjectCheck& pl() {
  static const ProjectCheck pc = [] {
    std::vector<Document> docs;
    docs.push_back(parseDocument(readData("lf.mmt"), "lf.mmt"));
    docs.push_back(parseDocument(readData("pl.mmt"), "pl.mmt"));
    return checkDocuments(std::move(docs));
  }();
  return pc;
}

std::vector<std::string> hitSummary(const std::vector<Hit>& hits) {
  const auto& table = pl().tables.at("PL");
  std::vector<std::string> out;
  for (const auto& h : hits)
    out.push_back(h.entry->slot.str() + (h.entry->inferred ? " inferred " : " ") + renderText(h.entry->term, table));
  return out;
}

}  // namespace

TEST(RelationalIndexTest, InverseRefersTo) {
  auto ix = buildRelationalIndex(pl());
  EXPECT_EQ(related(ix, "PL?and", "inverse(RefersTo)"), (std::set<std::string>{"PL?andI", "PL?example"}));
}

TEST(RelationalIndexTest, IncludesClosure) {
  auto ix = buildRelationalIndex(pl());
  EXPECT_EQ(related(ix, "PL", "closure(Includes)"), std::set<std::string>{"LF"});
  EXPECT_TRUE(related(ix, "PL?nothing", "union(RefersTo, inverse(RefersTo))").empty());
}

TEST(RelationalIndexTest, DeclaresAndRestrict) {
  auto ix = buildRelationalIndex(pl());
  auto decl = related(ix, "PL", "Declares");
  EXPECT_EQ(decl.size(), 7u);
  EXPECT_TRUE(decl.count("PL?example"));
  // example refers to PL constants and to nothing in LF by name
  auto refs = related(ix, "PL?example", "restrict(RefersTo, PL)");
  EXPECT_EQ(refs, (std::set<std::string>{"PL?and", "PL?andI", "PL?ded", "PL?imp", "PL?impI", "PL?prop"}));
  EXPECT_TRUE(related(ix, "PL?example", "restrict(RefersTo, LF)").empty());
}

TEST(RelationalIndexTest, DependsOnMirrorsLookups) {
  auto ix = buildRelationalIndex(pl());
  auto deps = related(ix, "PL?example#def", "DependsOn");
  // the declared type is part of the def unit itself, not a lookup
  EXPECT_FALSE(deps.count("PL?example#tp"));
  EXPECT_TRUE(deps.count("PL?andI#tp"));
  EXPECT_TRUE(deps.count("PL?impI#tp"));
}

TEST(RelationalIndexTest, UnknownRelation) {
  auto ix = buildRelationalIndex(pl());
  EXPECT_THROW(evaluate(ix, "Mentions"), UnknownRelation);
  EXPECT_THROW(evaluate(ix, "inverse(RefersTo"), UnknownRelation);
  EXPECT_THROW(evaluate(ix, "frobnicate(RefersTo)"), UnknownRelation);
}

TEST(SearchTest, SquareQueryFindsInferredHit) {
  auto ix = TermIndex::build(pl());
  auto q = parseQuery("$x: x∧x", pl().tables.at("PL"));
  auto hits = search(ix, q);
  auto s = hitSummary(hits);
  EXPECT_EQ(s, (std::vector<std::string>{"PL?example#tp A∧A", "PL?example#def inferred A∧A"}));
  for (const auto& h : hits) EXPECT_EQ(debugString(h.sigma.at("x")), "$A");
  // the inferred hit resolves to a visible ancestor inside the definiens
  EXPECT_EQ(hits[1].entry->ref.file, "pl.mmt");
}

TEST(SearchTest, ImplicationOfConjunction) {
  auto ix = TermIndex::build(pl());
  auto q = parseQuery("$x,$y,$z: x⟹(y∧z)", pl().tables.at("PL"));
  auto hits = search(ix, q);
  ASSERT_GE(hits.size(), 1u);
  EXPECT_EQ(hitSummary(hits).front(), "PL?example#tp A⟹A∧A");
  for (const auto& v : {"x", "y", "z"}) EXPECT_EQ(debugString(hits.front().sigma.at(v)), "$A");
  for (const auto& h : hits) EXPECT_TRUE(alphaEquivalent(substitute(q.pattern, h.sigma), h.entry->term));
}

TEST(SearchTest, GroundQueryWithoutOccurrence) {
  auto ix = TermIndex::build(pl());
  EXPECT_TRUE(search(ix, parseQuery(": prop∧prop", pl().tables.at("PL"))).empty());
}

TEST(SearchTest, HitsAreOrderedBySource) {
  auto ix = TermIndex::build(pl());
  auto hits = search(ix, parseQuery("$x: ded x", pl().tables.at("PL")));
  ASSERT_GE(hits.size(), 3u);
  for (std::size_t i = 1; i < hits.size(); ++i)
    EXPECT_LE(std::tie(hits[i - 1].entry->ref.file, hits[i - 1].entry->ref.start),
              std::tie(hits[i].entry->ref.file, hits[i].entry->ref.start));
}

TEST(SearchTest, QueryErrors) {
  const auto& table = pl().tables.at("PL");
  EXPECT_THROW(parseQuery("$x $y x", table), QueryParseError);
  EXPECT_THROW(parseQuery("$x: x ∧", table), QueryParseError);
  EXPECT_THROW(parseQuery("$x,$x: x", table), QueryParseError);
}

TEST(MatchTest, AlphaRenamingAndCapture) {
  auto lam = [](std::string x, TermPtr body) {
    return Term::complex(std::string(lf::kLambda), {{x, Term::constant("T?a"), nullptr}}, {std::move(body)});
  };
  auto f = [](TermPtr a, TermPtr b) { return Term::complex("T?f", {}, {std::move(a), std::move(b)}); };
  auto v = [](std::string n) { return Term::variable(std::move(n)); };
  // [u] f u y matches [w] f w c with y := c
  auto m = match(lam("u", f(v("u"), v("y"))), {"y"}, lam("w", f(v("w"), Term::constant("T?c"))));
  ASSERT_TRUE(m);
  EXPECT_EQ(debugString(m->at("y")), "T?c");
  // y cannot capture the bound w
  EXPECT_FALSE(match(lam("u", f(v("u"), v("y"))), {"y"}, lam("w", f(v("w"), v("w")))));
  // non-linear
  EXPECT_TRUE(match(f(v("y"), v("y")), {"y"}, f(v("q"), v("q"))));
  EXPECT_FALSE(match(f(v("y"), v("y")), {"y"}, f(v("q"), v("r"))));
  // shadowing keeps the bijection
  EXPECT_FALSE(match(lam("u", lam("u2", v("u"))), {}, lam("w", lam("w", v("w")))));
}
