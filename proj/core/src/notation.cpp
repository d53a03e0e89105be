#include "logon/notation.hpp"

#include <algorithm>
#include <charconv>
#include <set>

namespace logon {

int Notation::varCount() const {
  int n = 0;
  for (const auto& m : markers)
    if (m.kind == Marker::Kind::Var) n = std::max(n, m.index);
  return n;
}

int Notation::arity() const {
  int maxArg = 0;
  for (const auto& m : markers)
    if (m.kind == Marker::Kind::Arg) maxArg = std::max(maxArg, m.index);
  return std::max(0, maxArg - varCount());
}

std::vector<int> Notation::implicitPositions() const {
  std::set<int> mentioned;
  for (const auto& m : markers)
    if (m.kind == Marker::Kind::Arg) mentioned.insert(argPosition(m));
  std::vector<int> out;
  for (int i = 0; i < arity(); ++i)
    if (!mentioned.count(i)) out.push_back(i);
  return out;
}

bool Notation::hasDelimiters() const {
  return std::any_of(markers.begin(), markers.end(), [](const Marker& m) { return m.isDelim(); });
}

bool Notation::isJuxtaposition() const {
  return markers.size() == 2 && !hasDelimiters() && markers[0].kind == Marker::Kind::Arg &&
         markers[1].kind == Marker::Kind::Arg;
}

bool Notation::isConstantOnly() const {
  return !markers.empty() &&
         std::all_of(markers.begin(), markers.end(), [](const Marker& m) { return m.isDelim(); });
}

namespace {

struct RawToken {
  std::string text;
  std::size_t offset;
};

std::vector<RawToken> splitWhitespace(std::string_view s) {
  std::vector<RawToken> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    std::size_t start = i;
    while (i < s.size() && !std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    if (i > start) out.push_back({std::string(s.substr(start, i - start)), start});
  }
  return out;
}

std::optional<int> positiveInt(std::string_view s) {
  if (s.empty() || s.front() == '0') return std::nullopt;
  int v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size() || v <= 0) return std::nullopt;
  return v;
}

bool stripEllipsis(std::string& s) {
  static const std::string kUnicode = "…";
  if (s.size() > kUnicode.size() && s.ends_with(kUnicode)) {
    s.resize(s.size() - kUnicode.size());
    return true;
  }
  if (s.size() > 3 && s.ends_with("...")) {
    s.resize(s.size() - 3);
    return true;
  }
  return false;
}

}  // namespace

std::optional<Notation> parseNotation(std::string_view text, NotationParseError* error) {
  auto fail = [&](std::size_t off, std::string msg) -> std::optional<Notation> {
    if (error) *error = {off, std::move(msg)};
    return std::nullopt;
  };
  auto tokens = splitWhitespace(text);
  Notation n;
  std::size_t end = tokens.size();
  if (end > 0 && tokens[end - 1].text == "rassoc") {
    n.rightAssoc = true;
    --end;
  }
  if (end >= 2 && tokens[end - 2].text == "prec") {
    const auto& p = tokens[end - 1].text;
    int v = 0;
    auto [ptr, ec] = std::from_chars(p.data(), p.data() + p.size(), v);
    if (ec != std::errc() || ptr != p.data() + p.size())
      return fail(tokens[end - 1].offset, "precedence must be an integer");
    n.precedence = v;
    end -= 2;
  }
  std::set<std::pair<int, int>> seen;
  for (std::size_t i = 0; i < end; ++i) {
    std::string tok = tokens[i].text;
    bool seq = stripEllipsis(tok);
    Marker m;
    if (auto v = positiveInt(tok)) {
      m = Marker::arg(*v, seq);
    } else if (tok.size() > 1 && tok[0] == 'V' && positiveInt(std::string_view(tok).substr(1))) {
      m = Marker::var(*positiveInt(std::string_view(tok).substr(1)), seq);
    } else {
      m = Marker::delim(tokens[i].text);
    }
    if (!m.isDelim() && !seen.insert({static_cast<int>(m.kind), m.index}).second)
      return fail(tokens[i].offset, "duplicate marker index " + std::to_string(m.index));
    n.markers.push_back(std::move(m));
  }
  if (n.markers.empty()) return fail(0, "empty notation");
  // argument indices must lie after the variables
  int vars = n.varCount();
  for (const auto& m : n.markers)
    if (m.kind == Marker::Kind::Arg && m.index <= vars)
      return fail(0, "argument index " + std::to_string(m.index) +
                         " collides with a bound-variable index");
  return n;
}

std::string formatNotation(const Notation& n) {
  std::string out;
  for (const auto& m : n.markers) {
    if (!out.empty()) out += ' ';
    switch (m.kind) {
      case Marker::Kind::Var:
        out += "V" + std::to_string(m.index);
        break;
      case Marker::Kind::Arg:
        out += std::to_string(m.index);
        break;
      case Marker::Kind::Delim:
        out += m.text;
        break;
    }
    if (m.sequence) out += "…";
  }
  if (n.precedence != 0) out += " prec " + std::to_string(n.precedence);
  if (n.rightAssoc) out += " rassoc";
  return out;
}

}  // namespace logon
