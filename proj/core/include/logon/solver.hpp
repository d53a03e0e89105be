#pragma once

#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "logon/model.hpp"
#include "logon/rules.hpp"

namespace logon {

struct SolveError {
  SolveErrorKind kind = SolveErrorKind::TypingFailed;
  std::string message;
  std::optional<SourceRef> ref;
  std::vector<std::string> log;  // outermost judgment first
};

struct LookupResult {
  TermPtr term;  // null if the slot has no usable term
  /// Slots the answer depends on; empty means just the requested one.
  std::vector<SlotId> dependencies;
};

/// Resolves `c#tp` (the type of c) and `c#def` (the definiens of c).
using LookupFn = std::function<LookupResult(const SlotId&)>;
using Printer = std::function<std::string(const TermPtr&)>;

struct SolveOptions {
  Printer printer;  // defaults to debugString
  std::size_t rewriteFuel = 10000;
  /// Report goals left blocked at the end (and unsolved metas) as errors.
  bool reportStuck = true;
};

struct SolveResult {
  Substitution substitution;  // solved metas, fully instantiated, inferred-flagged
  std::map<std::string, bool> solved;
  std::vector<SolveError> errors;
  std::vector<std::string> warnings;
  std::set<SlotId> dependencies;
  TermPtr elaboratedSubject;
  TermPtr elaboratedType;  // Typing units only
  std::size_t stuckGoals = 0;

  bool ok() const { return errors.empty(); }
};

/// A goal for `solveGoals`.
struct GoalSpec {
  Judgment judgment;
  Context ctx;
};

SolveResult solve(const ValidationUnit& unit, const RuleSet& rules, const LookupFn& lookup,
                  const SolveOptions& options = {});

/// Solves several goals over one meta context. The elaborated fields refer
/// to the first goal.
SolveResult solveGoals(const std::vector<GoalSpec>& goals, const Context& metas,
                       const RuleSet& rules, const LookupFn& lookup,
                       const SolveOptions& options = {});

/// Type of `t` in `ctx` with all solvable metas instantiated; null on failure.
TermPtr inferType(const TermPtr& t, const Context& ctx, const Context& metas, const RuleSet& rules,
                  const LookupFn& lookup, std::set<SlotId>* dependencies = nullptr);

/// Applies solutions, reducing redexes the instantiation creates. With
/// `elaborate`, instantiated subtrees are flagged inferred and take the
/// reference of the meta occurrence they replace.
TermPtr instantiateMetas(const TermPtr& t, const Substitution& solutions, const RuleSet& rules,
                         bool elaborate = false);

/// True iff `elaborated` has the shape of `parsed` once every meta
/// occurrence of `parsed` is allowed to stand for an inferred subtree.
bool erasesTo(const TermPtr& elaborated, const TermPtr& parsed, const RuleSet& rules);

std::string renderJudgment(const Judgment& j, const Printer& printer);

}  // namespace logon
