#include "logon/rules.hpp"

namespace logon {

std::string_view solveErrorKindName(SolveErrorKind k) {
  switch (k) {
    case SolveErrorKind::RuleMissing:
      return "RuleMissing";
    case SolveErrorKind::TypingFailed:
      return "TypingFailed";
    case SolveErrorKind::NonPatternConstraint:
      return "NonPatternConstraint";
    case SolveErrorKind::UnsolvedMeta:
      return "UnsolvedMeta";
    case SolveErrorKind::DivergentRewrite:
      return "DivergentRewrite";
  }
  return "TypingFailed";
}

void SolverApi::block() { throw SolverBlocked{}; }

void SolverApi::fail(std::string message, SolveErrorKind kind) {
  throw SolverFailure{std::move(message), kind};
}

std::vector<std::string> RuleSet::inferenceHeads() const {
  std::vector<std::string> out;
  for (const auto& [head, rule] : inference) out.push_back(head);
  return out;
}

namespace {

template <class M>
void mergeKeyed(M& into, const M& from) {
  for (const auto& [key, rule] : from) {
    if (into.count(key)) throw DuplicateRule(key);
    into.emplace(key, rule);
  }
}

template <class R>
void mergeNamed(std::vector<Named<R>>& into, const std::vector<Named<R>>& from) {
  for (const auto& r : from) {
    for (const auto& existing : into)
      if (existing.name == r.name) throw DuplicateRule(r.name);
    into.push_back(r);
  }
}

template <class R>
void mergeHook(std::optional<Named<R>>& into, const std::optional<Named<R>>& from) {
  if (!from) return;
  if (into) throw DuplicateRule(from->name);
  into = from;
}

}  // namespace

RuleSet registerRules(RuleSet rules, const RulePlugin& plugin) {
  const RuleSet& p = plugin.rules;
  mergeKeyed(rules.inference, p.inference);
  mergeKeyed(rules.checking, p.checking);
  mergeKeyed(rules.equality, p.equality);
  mergeNamed(rules.rewrites, p.rewrites);
  mergeNamed(rules.solutions, p.solutions);
  mergeNamed(rules.completions, p.completions);
  mergeHook(rules.fallbackInference, p.fallbackInference);
  mergeHook(rules.inhabitable, p.inhabitable);
  mergeHook(rules.metaHead, p.metaHead);
  mergeHook(rules.reduceInstantiated, p.reduceInstantiated);
  mergeHook(rules.unfold, p.unfold);
  return rules;
}

}  // namespace logon
