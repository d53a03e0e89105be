#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include "logon/builtins.hpp"
#include "logon/structure_parser.hpp"
#include "logon/term_parser.hpp"

namespace logon::testing {

inline std::string readData(const std::string& name) {
  std::ifstream in(std::string(LOGON_DATA_DIR) + "/" + name, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// LF and PL parsed from the fixture files, with a resolver over both.
struct Fixtures {
  Document lf = parseDocument(readData("lf.mmt"), "lf.mmt");
  Document pl = parseDocument(readData("pl.mmt"), "pl.mmt");

  const TheoryDecl* theory(std::string_view name) const {
    if (auto* t = lf.findTheory(name)) return t;
    return pl.findTheory(name);
  }
  TheoryResolver resolver() const {
    return [this](std::string_view n) { return theory(n); };
  }
  NotationTable table(std::string_view thy) const { return buildNotationTable(thy, resolver()); }

  ParseResult parse(std::string_view thy, const std::string& text,
                    const ParseOptions& opts = {}) const {
    ParsingUnit u{text, SourceRef{"test", 0, text.size()}, std::string(thy), SlotId::type("T?t")};
    return parseTerm(u, table(thy), opts);
  }
};

}  // namespace logon::testing
