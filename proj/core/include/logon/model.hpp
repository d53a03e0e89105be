#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "logon/notation.hpp"
#include "logon/term.hpp"

namespace logon {

/// `theory?name`
std::string qualify(std::string_view theory, std::string_view name);
std::string_view theoryOf(std::string_view path);
std::string_view localNameOf(std::string_view path);

enum class Component { Type, Definiens };

/// A term slot: the type or the definiens of a constant.
struct SlotId {
  std::string constant;  // qualified name
  Component component = Component::Type;

  static SlotId type(std::string c) { return {std::move(c), Component::Type}; }
  static SlotId definiens(std::string c) { return {std::move(c), Component::Definiens}; }
  /// `PL?example#tp` / `PL?example#def`
  std::string str() const;
  static std::optional<SlotId> parse(std::string_view s);
  auto operator<=>(const SlotId&) const = default;
};

/// A term string awaiting the term parser.
struct ParsingUnit {
  std::string text;
  SourceRef ref;
  std::string theory;
  SlotId slot;
};

struct ConstantDecl {
  std::string name;
  SourceRef nameRef;
  SourceRef ref;  // the whole declaration
  std::optional<ParsingUnit> type;
  std::optional<ParsingUnit> definiens;
  std::optional<Notation> notation;
  std::optional<SourceRef> notationRef;
};

struct IncludeDecl {
  std::string theory;
  SourceRef ref;
};

struct TheoryDecl {
  std::string name;
  SourceRef nameRef;
  SourceRef ref;
  std::vector<IncludeDecl> includes;
  std::vector<ConstantDecl> constants;

  const ConstantDecl* find(std::string_view local) const;
};

struct StructureError {
  SourceRef ref;
  std::string message;
};

/// Result of structure parsing one file; term components stay unparsed.
struct Document {
  std::string file;
  std::vector<TheoryDecl> theories;
  std::vector<StructureError> errors;

  const TheoryDecl* findTheory(std::string_view name) const;
};

/// The three judgments a kernel decides.
struct Judgment {
  enum class Kind { Inhabitable, Typing, Equal };
  Kind kind = Kind::Typing;
  std::string theory;
  TermPtr subject;   // A for Inhabitable, E for Typing, E for Equal
  TermPtr type;      // A for Typing, E' for Equal
  TermPtr at;        // Equal only; may be null

  static Judgment inhabitable(std::string thy, TermPtr a) {
    return {Kind::Inhabitable, std::move(thy), std::move(a), nullptr, nullptr};
  }
  static Judgment typing(std::string thy, TermPtr e, TermPtr a) {
    return {Kind::Typing, std::move(thy), std::move(e), std::move(a), nullptr};
  }
  static Judgment equal(std::string thy, TermPtr e1, TermPtr e2, TermPtr at = nullptr) {
    return {Kind::Equal, std::move(thy), std::move(e1), std::move(e2), std::move(at)};
  }
};

/// A judgment to validate together with the meta-variables it may mention.
/// `ref` spans the term slot the unit came from.
struct ValidationUnit {
  SlotId id;
  std::string theory;
  Context metas;
  Judgment judgment;
  SourceRef ref;
};

enum class Severity { Error, Warning, Info };
std::string_view severityName(Severity s);

struct Diagnostic {
  SourceRef range;
  Severity severity = Severity::Error;
  std::string message;
  std::vector<std::string> log;
  auto operator<=>(const Diagnostic& o) const {
    if (auto c = range.file <=> o.range.file; c != 0) return c;
    if (auto c = range.start <=> o.range.start; c != 0) return c;
    if (auto c = range.end <=> o.range.end; c != 0) return c;
    if (auto c = message <=> o.message; c != 0) return c;
    return log <=> o.log;
  }
  bool operator==(const Diagnostic& o) const {
    return range == o.range && severity == o.severity && message == o.message && log == o.log;
  }
};

}  // namespace logon
