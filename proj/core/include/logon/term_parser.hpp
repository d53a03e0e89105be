#pragma once

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "logon/model.hpp"

namespace logon {

struct TableEntry {
  std::string path;   // qualified name
  std::string name;   // local name
  std::optional<Notation> notation;
  /// Declared with a type or definiens; primitive heads (like LF's
  /// `Pi`) are untyped.
  bool typed = false;
};

/// Notations and names of every constant visible in one theory.
class NotationTable {
 public:
  /// Later additions never shadow earlier ones in name resolution.
  void add(TableEntry entry);

  const TableEntry* find(std::string_view path) const;
  /// Candidates for a local or qualified name, highest priority first.
  std::vector<const TableEntry*> resolve(std::string_view name) const;
  const std::vector<TableEntry>& entries() const { return entries_; }

  /// Entries whose notation starts with the delimiter.
  std::vector<const TableEntry*> prefixEntries(std::string_view delim) const;
  /// Entries whose notation is `arg delim ...`.
  std::vector<const TableEntry*> infixEntries(std::string_view delim) const;
  bool isDelimiter(std::string_view text) const { return delimiters_.count(std::string(text)) > 0; }
  const std::vector<std::string>& symbolicDelimiters() const { return symbolic_; }

  /// Head of the juxtaposition notation, if any.
  const TableEntry* applyEntry() const;
  int applyPrecedence() const;

  /// Changes whenever any notation (or typed-ness of a notated constant) changes.
  std::string notationFingerprint() const;

  /// Display name of a constant: its local name when that resolves back
  /// to it, otherwise the qualified name.
  std::string displayName(std::string_view path) const;

 private:
  std::vector<TableEntry> entries_;
  std::map<std::string, std::size_t, std::less<>> byPath_;
  std::map<std::string, std::vector<std::size_t>, std::less<>> byName_;
  std::map<std::string, std::vector<std::size_t>, std::less<>> prefix_;
  std::map<std::string, std::vector<std::size_t>, std::less<>> infix_;
  std::set<std::string> delimiters_;
  std::vector<std::string> symbolic_;
  std::optional<std::size_t> apply_;
};

using TheoryResolver = std::function<const TheoryDecl*(std::string_view)>;

/// Table for a theory: its own constants, then the transitively included
/// theories depth-first in include order.
NotationTable buildNotationTable(std::string_view theory, const TheoryResolver& resolve);

/// Names of all theories visible from `theory` (itself first).
std::vector<std::string> visibleTheories(std::string_view theory, const TheoryResolver& resolve);

struct ParseError {
  SourceRef ref;
  std::string message;
};

struct ParseResult {
  TermPtr term;
  Context metas;  // meta-variables, names start with '/'
  std::vector<ParseError> errors;
};

struct ParseOptions {
  /// Variables in scope around the unit (e.g. search-query variables).
  std::vector<std::string> scope;
  /// Prefix for fresh meta-variable names.
  std::string metaPrefix = "/X";
};

/// Meta-variables standing for unparseable regions use this prefix.
inline constexpr std::string_view kErrorMetaPrefix = "/E";
bool isErrorMeta(std::string_view name);

ParseResult parseTerm(const ParsingUnit& unit, const NotationTable& table,
                      const ParseOptions& options = {});

}  // namespace logon
