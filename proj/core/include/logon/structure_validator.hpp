#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "logon/model.hpp"
#include "logon/term_parser.hpp"

namespace logon {

/// Parsed form of every term slot, keyed by slot.
using ParsedSlots = std::map<SlotId, ParseResult>;

/// Theory lookup over a list of documents; the first declaration of a
/// name wins.
TheoryResolver resolverFor(const std::vector<Document>& docs);

/// Appends the builtin LF document unless one of `docs` declares LF.
void addBuiltinLf(std::vector<Document>& docs);

/// Every term slot of every theory, parsed with its theory's notations.
ParsedSlots parseSlots(const std::vector<Document>& docs);

/// The source of one slot, or null.
const ParsingUnit* slotSource(const std::vector<Document>& docs, const SlotId& id);

enum class StructureErrorKind { DuplicateName, UnknownInclude, IncludeCycle, UnresolvedReference };
std::string_view structureErrorKindName(StructureErrorKind k);

struct StructureIssue {
  StructureErrorKind kind;
  SourceRef ref;
  std::string message;
};

struct StructureResult {
  /// Includes first, then declaration order; `c#tp` before `c#def`.
  std::vector<ValidationUnit> units;
  std::vector<StructureIssue> errors;
  /// Topological order of the include graph.
  std::vector<std::string> theoryOrder;
};

/// Checks names, includes and references and emits one unit per term
/// slot that is not affected by an error.
StructureResult validateStructure(const std::vector<Document>& docs, const ParsedSlots& parsed);

/// Meta-variables of a type slot reappear in the definiens unit under
/// this prefix so that the two units never share names.
inline constexpr std::string_view kTypeMetaPrefix = "/T";

}  // namespace logon
