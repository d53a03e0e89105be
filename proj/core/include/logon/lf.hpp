#pragma once

#include <optional>
#include <string>
#include <vector>

#include "logon/builtins.hpp"
#include "logon/rules.hpp"
#include "logon/solver.hpp"
#include "logon/term_parser.hpp"

namespace logon {

namespace lf {

TermPtr pi(std::string x, TermPtr a, TermPtr b);
TermPtr lambda(std::string x, TermPtr a, TermPtr body);
/// `apply(f, args)`, flattening nested applications; `f` itself if no args.
TermPtr apply(TermPtr f, std::vector<TermPtr> args);
TermPtr hole(TermPtr type);
TermPtr arrow(TermPtr a, TermPtr b);

bool isHole(const TermPtr& t);

/// Splits off the first binder of a Pi or lambda: (x, A, rest).
struct Binder {
  std::string name;
  TermPtr type;
  TermPtr body;
};
std::optional<Binder> peelBinder(const TermPtr& t, std::string_view head);

/// Head normal form under the LF rewrites (arrow, flattening, beta).
TermPtr whnf(const TermPtr& t);

/// The LF plugin: inference for type, Pi, lambda and apply, the Pi
/// checking and equality rules, rewrites, pattern solutions and the hooks
/// the engine needs to treat applied meta-variables.
RulePlugin plugin();
/// Inference for `hole`.
RulePlugin holePlugin();
/// Completion rule producing proof hints.
RulePlugin hintPlugin();
/// All three merged.
const RuleSet& rules();

}  // namespace lf

/// A suggestion for filling a hole.
struct Hint {
  std::string headName;  // constant path, variable name, or "lambda"
  TermPtr insertion;
  std::string renderedText;  // without inferred parts
  int remainingGoals = 0;
};

struct HintRequest {
  TermPtr expected;  // type of the hole
  Context ctx;       // bound variables around the hole
  Context metas;     // metas that may occur in `expected`
  /// Constants in scope, in priority order.
  std::vector<std::string> constants;
  const NotationTable* table = nullptr;
  const RuleSet* rules = nullptr;
  LookupFn lookup;
};

/// Runs every completion rule of `rules` and sorts by (remainingGoals, name).
std::vector<Hint> collectHints(const HintRequest& request);

}  // namespace logon
