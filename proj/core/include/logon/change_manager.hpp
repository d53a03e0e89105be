#pragma once

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "logon/checker.hpp"
#include "logon/proof.hpp"

namespace logon {

/// The three layers of one term slot plus their hashes. Hashes ignore
/// source positions, so moving a slot does not count as a change.
struct SlotNode {
  SlotId id;
  std::string theory;
  SourceRef ref;
  std::string stringRep;  // slot text trimmed at the edges
  ParseResult parsed;
  std::optional<ValidationUnit> unit;  // absent if structure validation dropped it
  std::optional<SolveResult> validated;
  std::string stringHash, parsedHash, unitHash, validatedHash;
  /// validatedHash of each dependency when this slot was last validated
  std::map<SlotId, std::string> dependencyHashes;
  /// Fingerprint of the notation table that rendered the result's
  /// messages; empty if it has none.
  std::string printerHash;
};

struct EditPlan {
  std::set<SlotId> reparse;
  bool structural = false;
};

struct CheckStats {
  std::size_t reparsed = 0;
  std::size_t revalidated = 0;
  std::vector<SlotId> revalidatedSlots;  // in check order
};

struct DiagnosticsDelta {
  std::vector<Diagnostic> added;
  std::vector<Diagnostic> removed;
};

class CycleDetected : public std::runtime_error {
 public:
  explicit CycleDetected(const std::string& slot)
      : std::runtime_error("dependency cycle through " + slot) {}
};

/// The two-dimensional dependency graph: per-slot layers vertically,
/// lookups between slots horizontally.
class DepGraph {
 public:
  using RefKey = std::tuple<std::string, std::size_t, std::size_t>;
  using RefMap = std::map<RefKey, SourceRef>;

  explicit DepGraph(const RuleSet& rules = lf::rules());

  /// Checks everything from scratch.
  CheckStats load(std::vector<SourceFile> files);

  /// Replaces one file's text (adding the file if new) and updates the
  /// string and parse layers; validation is left to `checkIncremental`.
  EditPlan applyEdit(const std::string& file, std::string newText);

  /// applyEdit, then revalidates exactly the slots whose unit changed or
  /// one of whose dependencies changed its validated result.
  DiagnosticsDelta checkIncremental(const std::string& file, std::string newText);

  /// Removes a file; returns the diagnostics delta.
  DiagnosticsDelta removeFile(const std::string& file);

  const CheckStats& lastStats() const { return stats_; }
  const std::vector<Diagnostic>& diagnostics() const { return diagnostics_; }
  std::size_t errorCount() const;

  const std::map<SlotId, SlotNode>& nodes() const { return nodes_; }
  const SlotNode* node(const SlotId& id) const;
  /// Horizontal edges: dependent -> dependencies that exist as nodes.
  std::map<SlotId, std::set<SlotId>> edges() const;

  const std::vector<SourceFile>& files() const { return files_; }
  const SourceFile* file(const std::string& name) const;
  const std::vector<Document>& documents() const { return docs_; }
  const StructureResult& structure() const { return structure_; }
  const NotationTable* table(const std::string& theory) const;
  const SlotStore& store() const { return store_; }
  const RuleSet& rules() const { return *rules_; }

  /// A snapshot in the shape of a from-scratch check.
  ProjectCheck snapshot() const;

 private:
  void rebuildDocuments();
  EditPlan refresh(const std::set<std::string>& changedFiles);
  void revalidate();

  const RuleSet* rules_;
  std::vector<SourceFile> files_;
  std::vector<Document> docs_;
  std::map<std::string, NotationTable> tables_;
  std::map<SlotId, SlotNode> nodes_;
  StructureResult structure_;
  SlotStore store_;
  std::vector<Diagnostic> diagnostics_;
  CheckStats stats_;
  std::size_t pendingReparsed_ = 0;
  RefMap pendingRefs_;  // positions of kept slots, old -> new
};

/// Closure of the changed slots over reversed horizontal edges, in
/// dependency order. `revalidated` maps freshly revalidated slots to
/// whether their validated hash changed.
std::vector<SlotId> propagate(const std::map<SlotId, std::set<SlotId>>& edges,
                              const std::map<SlotId, bool>& revalidated);

/// Set difference of two sorted diagnostic lists.
DiagnosticsDelta diffDiagnostics(const std::vector<Diagnostic>& before, const std::vector<Diagnostic>& after);

}  // namespace logon
