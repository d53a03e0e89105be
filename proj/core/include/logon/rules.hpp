#pragma once

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "logon/model.hpp"

namespace logon {

enum class SolveErrorKind { RuleMissing, TypingFailed, NonPatternConstraint, UnsolvedMeta, DivergentRewrite };
std::string_view solveErrorKindName(SolveErrorKind k);

/// The interface rules see. `block` and `fail` unwind the current goal:
/// a blocked goal is retried later, a failed one becomes an error.
class SolverApi {
 public:
  virtual ~SolverApi() = default;

  /// Infers the type of `t` in `ctx`; may emit side goals.
  virtual TermPtr infer(const TermPtr& t, const Context& ctx) = 0;
  /// Instantiates solved metas and rewrites the head to normal form.
  virtual TermPtr simplify(const TermPtr& t) = 0;
  /// Like simplify, but everywhere.
  virtual TermPtr normalize(const TermPtr& t) = 0;
  virtual TermPtr instantiate(const TermPtr& t) = 0;

  virtual void emitTyping(TermPtr e, TermPtr a, Context ctx) = 0;
  virtual void emitEqual(TermPtr a, TermPtr b, Context ctx, TermPtr at = nullptr) = 0;
  virtual void emitInhabitable(TermPtr a, Context ctx) = 0;

  /// Type and definiens of a constant; null when there is none. Both
  /// register a dependency.
  virtual TermPtr lookupType(std::string_view path) = 0;
  virtual TermPtr lookupDefiniens(std::string_view path) = 0;

  /// True for metas of the current problem that have no solution yet.
  virtual bool isSolvable(std::string_view meta) const = 0;
  /// Meta heading `t` if it is an unsolved meta or a meta application.
  virtual std::optional<std::string> metaHead(const TermPtr& t) const = 0;
  /// Records a solution; false if it would be cyclic.
  virtual bool assign(const std::string& meta, TermPtr value) = 0;

  virtual std::string render(const TermPtr& t) const = 0;

  [[noreturn]] void block();
  [[noreturn]] void fail(std::string message, SolveErrorKind kind = SolveErrorKind::TypingFailed);
};

// Thrown through rules by SolverApi::block / fail.
struct SolverBlocked {};
struct SolverFailure {
  std::string message;
  SolveErrorKind kind = SolveErrorKind::TypingFailed;
};

using InferenceRule = std::function<TermPtr(SolverApi&, const TermPtr& term, const Context& ctx)>;
using CheckingRule =
    std::function<void(SolverApi&, const TermPtr& term, const TermPtr& type, const Context& ctx)>;
/// Returns false when the rule does not apply.
using EqualityRule = std::function<bool(SolverApi&, const TermPtr& a, const TermPtr& b,
                                        const TermPtr& at, const Context& ctx)>;
using RewriteRule = std::function<std::optional<TermPtr>(SolverApi&, const TermPtr& t)>;
/// Returns true when it solved (assigned) a meta.
using SolutionRule =
    std::function<bool(SolverApi&, const TermPtr& a, const TermPtr& b, const Context& ctx)>;
using InhabitabilityRule = std::function<void(SolverApi&, const TermPtr& type, const Context& ctx)>;
using MetaHeadRule = std::function<std::optional<std::string>(const TermPtr& t)>;
/// Reduces a node whose children changed by meta instantiation.
using InstantiationRule = std::function<std::optional<TermPtr>(const TermPtr& t)>;
/// Unfolds a definition at the head of a term.
using UnfoldRule = std::function<std::optional<TermPtr>(SolverApi&, const TermPtr& t)>;

struct Hint;
struct HintRequest;
using CompletionRule = std::function<std::vector<Hint>(const HintRequest&)>;

template <class R>
struct Named {
  std::string name;
  R rule;
};

struct RuleSet {
  std::map<std::string, InferenceRule, std::less<>> inference;  // by head
  std::map<std::string, CheckingRule, std::less<>> checking;    // by type head
  std::map<std::string, EqualityRule, std::less<>> equality;    // by type head
  std::vector<Named<RewriteRule>> rewrites;
  std::vector<Named<SolutionRule>> solutions;
  std::vector<Named<CompletionRule>> completions;
  // Used for complex terms whose head has no inference rule; returns null
  // when it does not apply.
  std::optional<Named<InferenceRule>> fallbackInference;
  std::optional<Named<InhabitabilityRule>> inhabitable;
  std::optional<Named<MetaHeadRule>> metaHead;
  std::optional<Named<InstantiationRule>> reduceInstantiated;
  std::optional<Named<UnfoldRule>> unfold;

  /// Heads (or hook names) this set provides, for inspection.
  std::vector<std::string> inferenceHeads() const;
};

struct RulePlugin {
  std::string name;
  RuleSet rules;
};

class DuplicateRule : public std::runtime_error {
 public:
  explicit DuplicateRule(std::string head)
      : std::runtime_error("duplicate rule for '" + head + "'"), head_(std::move(head)) {}
  const std::string& head() const { return head_; }

 private:
  std::string head_;
};

/// Merges a plugin into a rule set. Keyed rules and hooks must not clash.
RuleSet registerRules(RuleSet rules, const RulePlugin& plugin);

}  // namespace logon
