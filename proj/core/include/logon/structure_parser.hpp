#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "logon/model.hpp"

namespace logon {

// Separators. Each has an ASCII control character and a visible alias.
inline constexpr char kModuleDelimiter = '\x1c';
inline constexpr char kDeclarationDelimiter = '\x1d';
inline constexpr char kComponentDelimiter = '\x1e';
inline constexpr char kReservedDelimiter = '\x1f';
inline constexpr std::string_view kModuleAlias = "❚";
inline constexpr std::string_view kDeclarationAlias = "❙";
inline constexpr std::string_view kComponentAlias = "❘";

/// One declaration's text as seen by a keyword handler.
struct DeclarationSegment {
  std::string_view text;     // comment-blanked, trimmed
  std::string_view rawText;  // original bytes of the same range
  SourceRef ref;
  std::string_view keyword;  // first whitespace-delimited token
};

using KeywordHandler =
    std::function<void(const DeclarationSegment&, TheoryDecl&, std::vector<StructureError>&)>;

/// Dispatch table from the first token of a declaration to its handler.
/// `include` is built in; anything else is a constant declaration.
class KeywordRegistry {
 public:
  static const KeywordRegistry& standard();
  void add(std::string keyword, KeywordHandler handler);
  const KeywordHandler* find(std::string_view keyword) const;

 private:
  std::map<std::string, KeywordHandler, std::less<>> handlers_;
};

/// Splits a source file into theories and declarations. Never throws;
/// malformed declarations are reported and skipped.
Document parseDocument(std::string_view text, const std::string& file,
                       const KeywordRegistry& keywords = KeywordRegistry::standard());

/// Replaces `//` line comments by spaces, preserving byte offsets.
std::string blankComments(std::string_view text);

struct DeclarationLocation {
  std::string theory;
  std::string constant;  // local name
  enum class Part { None, Name, Type, Definiens, Notation };
  Part part = Part::None;
};

std::optional<DeclarationLocation> declarationAt(const Document& doc, std::size_t offset);

/// Writes a document back to source form using the visible separators.
std::string serializeDocument(const Document& doc);

}  // namespace logon
