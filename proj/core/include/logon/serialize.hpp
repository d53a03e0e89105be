#pragma once

#include <nlohmann/json.hpp>
#include <string>
#include <string_view>

#include "logon/model.hpp"
#include "logon/solver.hpp"
#include "logon/term_parser.hpp"

namespace logon {

using Json = nlohmann::json;

/// Term encoding:
///   {"c": path} | {"v": name} | {"h": head, "b": [decl...], "a": [term...]}
/// with optional "r": [file, start, end] and "i": true (inferred).
/// A declaration is {"n": name} plus optional "t" and "d" terms.
Json toJson(const TermPtr& t, bool withRefs = true);
TermPtr termFromJson(const Json& j);

Json toJson(const Context& c, bool withRefs = true);
Context contextFromJson(const Json& j);

Json toJson(const SourceRef& r);
SourceRef sourceRefFromJson(const Json& j);

Json toJson(const ParseResult& p, bool withRefs = true);
ParseResult parseResultFromJson(const Json& j);

Json toJson(const SolveResult& r, bool withRefs = true);
SolveResult solveResultFromJson(const Json& j);

Json toJson(const Diagnostic& d);
Diagnostic diagnosticFromJson(const Json& j);

Json toJson(const Judgment& j, bool withRefs = true);

/// Structure of one file; term slots keep their source text and refs,
/// notations are stored in their textual form.
Json toJson(const Document& d);
Document documentFromJson(const Json& j);

/// Lower-case hex SHA-256.
std::string sha256Hex(std::string_view data);
/// Hash of the canonical (sorted-key, compact) dump.
std::string jsonHash(const Json& j);

}  // namespace logon
