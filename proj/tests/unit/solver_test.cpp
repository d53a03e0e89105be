#include <gtest/gtest.h>

#include <algorithm>

#include "fixtures.hpp"
#include "logon/checker.hpp"
#include "logon/render.hpp"

using namespace logon;
using logon::testing::readData;

namespace {

struct Env {
  ProjectCheck pc;
  Env() {
    std::vector<Document> docs;
    docs.push_back(parseDocument(readData("lf.mmt"), "lf.mmt"));
    docs.push_back(parseDocument(readData("pl.mmt"), "pl.mmt"));
    pc = checkDocuments(std::move(docs));
  }
  LookupFn lookup() const {
    return [this](const SlotId& id) { return pc.store.lookup(id); };
  }
  const NotationTable& table() const { return pc.tables.at("PL"); }
  TermPtr term(const std::string& text, std::vector<std::string> scope = {}) const {
    ParsingUnit u{text, SourceRef{"t", 0, text.size()}, "PL", SlotId::type("T?t")};
    ParseOptions o;
    o.scope = std::move(scope);
    auto r = parseTerm(u, table(), o);
    EXPECT_TRUE(r.errors.empty()) << text;
    return stripRefs(r.term);
  }
  std::string show(const TermPtr& t) const { return renderText(t, table()); }
};

const Env& env() {
  static Env e;
  return e;
}

TermPtr var(const std::string& n) { return Term::variable(n); }
TermPtr cst(const std::string& n) { return Term::constant(n); }
Context propCtx(std::vector<std::string> names) {
  Context c;
  for (auto& n : names) c.push_back({n, cst("PL?prop"), nullptr});
  return c;
}

SolveResult run(const Judgment& j, const Context& ctx, const Context& metas = {},
                const RuleSet& rules = lf::rules()) {
  return solveGoals({{j, ctx}}, metas, rules, env().lookup());
}

bool contains(const std::vector<std::string>& v, const std::string& s) {
  return std::find(v.begin(), v.end(), s) != v.end();
}

}  // namespace

TEST(RegisterRulesTest, LfPluginProvidesCoreInference) {
  RuleSet rs = registerRules({}, lf::plugin());
  auto heads = rs.inferenceHeads();
  for (const char* h : {"LF?type", "LF?lambda", "LF?Pi", "LF?apply"}) EXPECT_TRUE(contains(heads, h)) << h;
  EXPECT_FALSE(contains(heads, "LF?hole"));
}

TEST(RegisterRulesTest, RegisteringTwiceIsRejected) {
  RuleSet rs = registerRules({}, lf::plugin());
  try {
    registerRules(rs, lf::plugin());
    FAIL() << "expected DuplicateRule";
  } catch (const DuplicateRule& e) {
    EXPECT_TRUE(contains(rs.inferenceHeads(), e.head()));
  }
}

TEST(RegisterRulesTest, HolePluginAlone) {
  RuleSet rs = registerRules({}, lf::holePlugin());
  EXPECT_EQ(rs.inferenceHeads(), std::vector<std::string>{"LF?hole"});
  EXPECT_TRUE(rs.checking.empty());
  EXPECT_TRUE(rs.rewrites.empty());
}

TEST(SolverTest, ReflexiveEquality) {
  auto r = run(Judgment::equal("PL", cst("PL?prop"), cst("PL?prop"), cst("LF?type")), {});
  EXPECT_TRUE(r.ok());
  EXPECT_TRUE(r.substitution.empty());
}

TEST(SolverTest, InferType) {
  const RuleSet& rs = lf::rules();
  auto l = env().lookup();
  EXPECT_EQ(debugString(inferType(cst("LF?type"), {}, {}, rs, l)), "LF?kind");
  auto idA = lf::lambda("A", cst("PL?prop"), var("A"));
  EXPECT_EQ(debugString(inferType(idA, {}, {}, rs, l)), "C[LF?Pi; A:PL?prop; PL?prop]");
  auto dedA = lf::apply(cst("PL?ded"), {var("A")});
  EXPECT_EQ(debugString(inferType(dedA, propCtx({"A"}), {}, rs, l)), "LF?type");
}

TEST(SolverTest, ApplicationOfNonFunctionFails) {
  auto bad = lf::apply(cst("PL?prop"), {cst("PL?prop")});
  EXPECT_EQ(inferType(bad, {}, {}, lf::rules(), env().lookup()), nullptr);
}

TEST(SolverTest, CheckLambdaAgainstArrow) {
  const Env& e = env();
  auto r = run(Judgment::typing("PL", e.term("[p:ded A] p", {"A"}), e.term("ded A → ded A", {"A"})),
               propCtx({"A"}));
  EXPECT_TRUE(r.ok());
}

TEST(SolverTest, CheckByEtaExpansion) {
  const Env& e = env();
  auto andI = cst("PL?andI");
  auto r = run(Judgment::typing("PL", andI, e.term("{A:prop}{B:prop} ded A → ded B → ded (A∧B)")), {});
  EXPECT_TRUE(r.ok());
}

TEST(SolverTest, CheckRenamesBinders) {
  auto r = run(Judgment::typing("PL", lf::lambda("x", cst("PL?prop"), var("x")),
                                lf::pi("y", cst("PL?prop"), cst("PL?prop"))),
               {});
  EXPECT_TRUE(r.ok());
}

TEST(SolverTest, PatternSolutionWithoutArguments) {
  const Env& e = env();
  auto pp = e.term("prop∧prop");
  auto r = run(Judgment::equal("PL", var("/X"), pp, cst("PL?prop")), {}, {{"/X", nullptr, nullptr}});
  ASSERT_TRUE(r.ok());
  EXPECT_TRUE(r.solved.at("/X"));
  EXPECT_EQ(e.show(r.substitution.at("/X")), "prop∧prop");
}

TEST(SolverTest, PatternSolutionAbstractsVariables) {
  const Env& e = env();
  auto lhs = lf::apply(var("/X"), {var("x")});
  auto rhs = e.term("x∧x", {"x"});
  auto r = run(Judgment::equal("PL", lhs, rhs, cst("PL?prop")), propCtx({"x"}), {{"/X", nullptr, nullptr}});
  ASSERT_TRUE(r.ok());
  auto sol = r.substitution.at("/X");
  ASSERT_TRUE(sol->hasHead("LF?lambda"));
  EXPECT_EQ(sol->bound()[0].name, "x");
  EXPECT_EQ(e.show(sol->args()[0]), "x∧x");
  EXPECT_TRUE(sol->inferred());
}

TEST(SolverTest, RepeatedVariableIsNotAPattern) {
  const Env& e = env();
  auto lhs = lf::apply(var("/X"), {var("x"), var("x")});
  auto rhs = e.term("x∧x", {"x"});
  auto r = run(Judgment::equal("PL", lhs, rhs, cst("PL?prop")), propCtx({"x"}), {{"/X", nullptr, nullptr}});
  ASSERT_EQ(r.errors.size(), 1u);
  EXPECT_EQ(r.errors[0].kind, SolveErrorKind::NonPatternConstraint);
  EXPECT_FALSE(r.solved.at("/X"));
}

TEST(SolverTest, OccursCheckBlocksSolution) {
  auto lhs = var("/X");
  auto rhs = lf::apply(cst("PL?ded"), {var("/X")});
  auto r = run(Judgment::equal("PL", lhs, rhs, nullptr), {}, {{"/X", nullptr, nullptr}});
  EXPECT_FALSE(r.ok());
  EXPECT_FALSE(r.solved.at("/X"));
}

TEST(SolverTest, DivergentRewriteStops) {
  RulePlugin loop;
  loop.name = "loop";
  loop.rules.rewrites.push_back({"a-to-b", [](SolverApi&, const TermPtr& t) -> std::optional<TermPtr> {
                                   if (t->isConstant() && t->name() == "T?a") return Term::constant("T?b");
                                   return std::nullopt;
                                 }});
  loop.rules.rewrites.push_back({"b-to-a", [](SolverApi&, const TermPtr& t) -> std::optional<TermPtr> {
                                   if (t->isConstant() && t->name() == "T?b") return Term::constant("T?a");
                                   return std::nullopt;
                                 }});
  RuleSet rs = registerRules({}, loop);
  auto r = solveGoals({{Judgment::equal("T", cst("T?a"), cst("T?c")), {}}}, {}, rs, env().lookup());
  ASSERT_FALSE(r.errors.empty());
  EXPECT_EQ(r.errors[0].kind, SolveErrorKind::DivergentRewrite);
}

TEST(SolverTest, InhabitabilityWithoutPluginWarns) {
  auto r = solveGoals({{Judgment::inhabitable("T", cst("T?a")), {}}}, {}, RuleSet{}, env().lookup());
  EXPECT_TRUE(r.ok());
  EXPECT_EQ(r.warnings.size(), 1u);
}

TEST(SolverTest, UnknownHeadIsRuleMissing) {
  auto t = Term::complex("T?f", {}, {cst("T?a")});
  auto r = solveGoals({{Judgment::typing("T", t, cst("T?a")), {}}}, {}, RuleSet{}, env().lookup());
  ASSERT_EQ(r.errors.size(), 1u);
  EXPECT_EQ(r.errors[0].kind, SolveErrorKind::RuleMissing);
}

TEST(LfTest, ArrowRewritesToPi) {
  auto t = lf::whnf(lf::arrow(cst("PL?prop"), cst("PL?prop")));
  ASSERT_TRUE(t->hasHead("LF?Pi"));
  EXPECT_TRUE(t->bound()[0].name.starts_with("_"));
  EXPECT_EQ(debugString(t->bound()[0].type), "PL?prop");
}

TEST(LfTest, BetaReduces) {
  auto redex = lf::apply(lf::lambda("x", cst("PL?prop"), var("x")), {var("a")});
  EXPECT_EQ(debugString(lf::whnf(redex)), "$a");
}

TEST(LfTest, ConstantHasNoRedex) {
  auto c = cst("PL?prop");
  EXPECT_EQ(lf::whnf(c).get(), c.get());
}
