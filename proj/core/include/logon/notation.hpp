#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace logon {

struct Marker {
  enum class Kind { Var, Arg, Delim };
  Kind kind = Kind::Delim;
  int index = 0;         // Var/Arg: 1-based, variables counted first
  std::string text;      // Delim
  bool sequence = false;

  static Marker var(int n, bool seq = false) { return {Kind::Var, n, {}, seq}; }
  static Marker arg(int n, bool seq = false) { return {Kind::Arg, n, {}, seq}; }
  static Marker delim(std::string s) { return {Kind::Delim, 0, std::move(s), false}; }
  bool isDelim() const { return kind == Kind::Delim; }
  bool operator==(const Marker&) const = default;
};

/// Mixfix template: markers interleaved with delimiters plus a precedence.
struct Notation {
  std::vector<Marker> markers;
  int precedence = 0;
  bool rightAssoc = false;

  /// Number of bound-variable markers.
  int varCount() const;
  /// Number of argument positions of the head (highest argument index
  /// minus the variable count); unmentioned positions are implicit.
  int arity() const;
  /// Argument positions (0-based) not mentioned by any marker.
  std::vector<int> implicitPositions() const;
  /// 0-based argument position of an Arg marker.
  int argPosition(const Marker& m) const { return m.index - varCount() - 1; }

  bool hasDelimiters() const;
  /// Notation with no delimiters and exactly two argument markers: juxtaposition.
  bool isJuxtaposition() const;
  bool startsWithDelim() const { return !markers.empty() && markers.front().isDelim(); }
  bool endsWithArg() const {
    return !markers.empty() && markers.back().kind == Marker::Kind::Arg;
  }
  /// Only delimiters, no markers: the notation denotes the constant itself.
  bool isConstantOnly() const;

  bool operator==(const Notation&) const = default;
};

struct NotationParseError {
  std::size_t offset = 0;  // relative to the notation text
  std::string message;
};

/// Parses the notation micro-syntax: whitespace-separated tokens, `n` is
/// an argument marker, `Vn` a variable marker, a marker directly followed
/// by `…` (or `...`) is a sequence, a trailing `prec <int>` sets the
/// precedence and a trailing `rassoc` makes infix chains associate right;
/// every other token is a delimiter.
std::optional<Notation> parseNotation(std::string_view text, NotationParseError* error = nullptr);

std::string formatNotation(const Notation& n);

}  // namespace logon
