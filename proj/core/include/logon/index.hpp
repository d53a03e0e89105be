#pragma once

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "logon/checker.hpp"

namespace logon {

enum class Relation { Includes, Declares, RefersTo, DependsOn };
std::string_view relationName(Relation r);
std::optional<Relation> relationFromName(std::string_view s);

using Tuple = std::pair<std::string, std::string>;
using TupleSet = std::set<Tuple>;

/// Relation tuples over theory names, qualified constant names and slot
/// ids (`PL?and#tp`).
///   Includes(theory, included)    direct includes that resolve
///   Declares(theory, constant)
///   RefersTo(constant, constant)  constants occurring in either slot,
///                                 inferred parts included
///   DependsOn(slot, slot)         lookups made while validating
struct RelationalIndex {
  std::map<Relation, TupleSet> tuples;

  const TupleSet& of(Relation r) const;
};

RelationalIndex buildRelationalIndex(const ProjectCheck& pc);

class UnknownRelation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Relation algebra:
///   expr := Includes | Declares | RefersTo | DependsOn
///         | inverse(expr) | union(expr, expr, ...) | closure(expr)
///         | restrict(expr, Theory)
/// `restrict` keeps the tuples whose target is the theory or is declared
/// in it. Throws UnknownRelation on anything else.
TupleSet evaluate(const RelationalIndex& index, std::string_view expr);

/// Targets related to `node` by `expr`.
std::set<std::string> related(const RelationalIndex& index, const std::string& node, std::string_view expr);

/// One indexed subterm.
struct IndexEntry {
  SlotId slot;
  std::vector<std::size_t> path;  // from the slot's elaborated term
  TermPtr term;
  bool inferred = false;
  /// The subterm's own ref, or that of its nearest source-visible ancestor.
  SourceRef ref;
};

/// Every subterm of every validated term, in (file, offset) order.
class TermIndex {
 public:
  static TermIndex build(const ProjectCheck& pc);
  /// Adds the subterms of one term.
  void add(const SlotId& slot, const TermPtr& root, const SourceRef& slotRef);
  /// Restores (file, offset) order after `add`.
  void finish();

  const std::vector<IndexEntry>& entries() const { return entries_; }
  /// Entries whose term has the given head key (see `headKey`).
  std::vector<std::size_t> candidates(const std::string& key) const;

 private:
  std::vector<IndexEntry> entries_;
  std::map<std::string, std::vector<std::size_t>> byHead_;
};

/// Filter key: constant path, `$` for variables, `#head` for complex terms.
std::string headKey(const Term& t);

struct SearchQuery {
  std::vector<std::string> vars;
  TermPtr pattern;
};

class QueryParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Notation table of a synthetic theory including every theory of `docs`.
NotationTable queryTable(const std::vector<Document>& docs);

/// Parses `$x,$y: E` (or `: E` / `E` without variables) with the notations
/// of `table`. Meta-variables the parser inserts act as wildcards.
SearchQuery parseQuery(std::string_view text, const NotationTable& table);

struct Hit {
  const IndexEntry* entry = nullptr;
  Substitution sigma;
};

/// One-way matching modulo renaming of binders. Pattern variables may
/// repeat (all occurrences must match alpha-equal terms); they never
/// match terms mentioning variables bound inside the matched subterm.
std::optional<Substitution> match(const TermPtr& pattern, const std::vector<std::string>& vars, const TermPtr& t);

/// All hits in index order.
std::vector<Hit> search(const TermIndex& index, const SearchQuery& q);

/// True if the pattern contains parser wildcards.
bool hasWildcards(const TermPtr& pattern);

}  // namespace logon
