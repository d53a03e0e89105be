#pragma once

#include <map>
#include <string>
#include <vector>

#include "logon/lf.hpp"
#include "logon/solver.hpp"
#include "logon/structure_validator.hpp"

namespace logon {

/// Results of validated slots and the lookup policy other units see:
/// `c#tp` answers with the elaborated declared type, or with the type
/// solved while checking `c#def` when c has no type slot (depending on
/// both slots); `c#def` answers with the elaborated definiens. Terms that
/// still contain meta-variables are not handed out.
class SlotStore {
 public:
  void put(const SlotId& id, SolveResult result) { results_[id] = std::move(result); }
  void erase(const SlotId& id) { results_.erase(id); }
  const SolveResult* find(const SlotId& id) const;
  const std::map<SlotId, SolveResult>& results() const { return results_; }

  LookupResult lookup(const SlotId& id) const;

 private:
  std::map<SlotId, SolveResult> results_;
};

/// Solves one unit against the store, rendering logs with `table`.
SolveResult checkUnit(const ValidationUnit& unit, const RuleSet& rules, const SlotStore& store,
                      const NotationTable& table);

/// One notation table per theory, built from `docs`.
std::map<std::string, NotationTable> buildTables(const std::vector<Document>& docs);

/// A from-scratch check of a set of documents.
struct ProjectCheck {
  std::vector<Document> documents;  // including the builtin LF when needed
  ParsedSlots parsed;
  StructureResult structure;
  SlotStore store;
  std::map<std::string, NotationTable> tables;
  std::vector<Diagnostic> diagnostics;  // sorted

  std::size_t errorCount() const;
  const ValidationUnit* unit(const SlotId& id) const;
};

ProjectCheck checkDocuments(std::vector<Document> docs, const RuleSet& rules = lf::rules());

/// Diagnostics of the individual stages.
Diagnostic toDiagnostic(const StructureError& e);
Diagnostic toDiagnostic(const StructureIssue& e);
Diagnostic toDiagnostic(const ParseError& e);
std::vector<Diagnostic> solveDiagnostics(const ValidationUnit& unit, const SolveResult& r);

/// All diagnostics of a checked state, sorted.
std::vector<Diagnostic> collectDiagnostics(const std::vector<Document>& docs, const ParsedSlots& parsed,
                                           const StructureResult& structure, const SlotStore& store);

}  // namespace logon
