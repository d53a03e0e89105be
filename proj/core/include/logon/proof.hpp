#pragma once

#include <optional>
#include <string>
#include <vector>

#include "logon/checker.hpp"

namespace logon {

/// A hole in an elaborated term.
struct HoleSite {
  std::vector<std::size_t> path;
  std::optional<SourceRef> ref;
  TermPtr expected;
  Context ctx;  // bound variables around the hole, outermost first
};

/// Holes of `t` in pre-order; holes nested in a hole's type are skipped.
std::vector<HoleSite> findHoles(const TermPtr& t);

/// Constants a unit may refer to: visible theories plus the earlier
/// declarations of its own theory, in notation-table order.
std::vector<std::string> constantsInScope(const ProjectCheck& pc, const ValidationUnit& unit);

/// Hints for one hole of a checked unit, best first.
std::vector<Hint> hintsFor(const ProjectCheck& pc, const ValidationUnit& unit, const HoleSite& hole,
                           const RuleSet& rules = lf::rules());

struct SourceFile {
  std::string file;
  std::string text;
};

struct GreedyResult {
  std::vector<std::string> texts;  // slot text before each round, then the final one
  int rounds = 0;
  bool holeFree = false;
  std::size_t errors = 0;  // of the final state
  std::string finalText;
};

/// Repeatedly fills every hole of `slot` with its top hint and re-checks,
/// at most `maxRounds` times.
GreedyResult greedyComplete(std::vector<SourceFile> files, const SlotId& slot, int maxRounds = 16,
                            const RuleSet& rules = lf::rules());

}  // namespace logon
