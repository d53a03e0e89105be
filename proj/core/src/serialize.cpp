#include "logon/serialize.hpp"

#include <openssl/evp.h>

#include <stdexcept>

namespace logon {

namespace {

SolveErrorKind errorKindFromName(std::string_view s) {
  for (auto k : {SolveErrorKind::RuleMissing, SolveErrorKind::TypingFailed, SolveErrorKind::NonPatternConstraint,
                 SolveErrorKind::UnsolvedMeta, SolveErrorKind::DivergentRewrite})
    if (solveErrorKindName(k) == s) return k;
  throw std::runtime_error("unknown error kind " + std::string(s));
}

Severity severityFromName(std::string_view s) {
  for (auto k : {Severity::Error, Severity::Warning, Severity::Info})
    if (severityName(k) == s) return k;
  throw std::runtime_error("unknown severity " + std::string(s));
}

}  // namespace

Json toJson(const SourceRef& r) { return Json::array({r.file, r.start, r.end}); }

SourceRef sourceRefFromJson(const Json& j) {
  return {j.at(0).get<std::string>(), j.at(1).get<std::size_t>(), j.at(2).get<std::size_t>()};
}

Json toJson(const TermPtr& t, bool withRefs) {
  if (!t) return nullptr;
  Json j = Json::object();
  switch (t->kind()) {
    case TermKind::Constant:
      j["c"] = t->name();
      break;
    case TermKind::Variable:
      j["v"] = t->name();
      break;
    case TermKind::Complex: {
      j["h"] = t->name();
      j["b"] = toJson(t->bound(), withRefs);
      Json args = Json::array();
      for (const auto& a : t->args()) args.push_back(toJson(a, withRefs));
      j["a"] = std::move(args);
      break;
    }
  }
  if (withRefs && t->ref()) j["r"] = toJson(*t->ref());
  if (t->inferred()) j["i"] = true;
  return j;
}

TermPtr termFromJson(const Json& j) {
  if (j.is_null()) return nullptr;
  std::optional<SourceRef> ref;
  if (j.contains("r")) ref = sourceRefFromJson(j["r"]);
  bool inferred = j.value("i", false);
  if (j.contains("c")) return Term::constant(j["c"].get<std::string>(), ref, inferred);
  if (j.contains("v")) return Term::variable(j["v"].get<std::string>(), ref, inferred);
  std::vector<TermPtr> args;
  for (const auto& a : j.at("a")) args.push_back(termFromJson(a));
  return Term::complex(j.at("h").get<std::string>(), contextFromJson(j.at("b")), std::move(args), ref, inferred);
}

Json toJson(const Context& c, bool withRefs) {
  Json out = Json::array();
  for (const auto& d : c) {
    Json e{{"n", d.name}};
    if (d.type) e["t"] = toJson(d.type, withRefs);
    if (d.definiens) e["d"] = toJson(d.definiens, withRefs);
    out.push_back(std::move(e));
  }
  return out;
}

Context contextFromJson(const Json& j) {
  Context c;
  for (const auto& e : j)
    c.push_back({e.at("n").get<std::string>(), e.contains("t") ? termFromJson(e["t"]) : nullptr,
                 e.contains("d") ? termFromJson(e["d"]) : nullptr});
  return c;
}

Json toJson(const ParseResult& p, bool withRefs) {
  Json errs = Json::array();
  for (const auto& e : p.errors) {
    Json je{{"message", e.message}};
    if (withRefs) je["ref"] = toJson(e.ref);
    errs.push_back(std::move(je));
  }
  return {{"term", toJson(p.term, withRefs)}, {"metas", toJson(p.metas, withRefs)}, {"errors", std::move(errs)}};
}

ParseResult parseResultFromJson(const Json& j) {
  ParseResult p;
  p.term = termFromJson(j.at("term"));
  p.metas = contextFromJson(j.at("metas"));
  for (const auto& e : j.at("errors"))
    p.errors.push_back({e.contains("ref") ? sourceRefFromJson(e["ref"]) : SourceRef{}, e.at("message")});
  return p;
}

Json toJson(const SolveResult& r, bool withRefs) {
  Json subst = Json::object();
  for (const auto& [k, v] : r.substitution) subst[k] = toJson(v, withRefs);
  Json solved = Json::object();
  for (const auto& [k, v] : r.solved) solved[k] = v;
  Json errs = Json::array();
  for (const auto& e : r.errors) {
    Json je{{"kind", solveErrorKindName(e.kind)}, {"message", e.message}, {"log", e.log}};
    if (withRefs && e.ref) je["ref"] = toJson(*e.ref);
    errs.push_back(std::move(je));
  }
  Json deps = Json::array();
  for (const auto& d : r.dependencies) deps.push_back(d.str());
  return {{"substitution", std::move(subst)},
          {"solved", std::move(solved)},
          {"errors", std::move(errs)},
          {"warnings", r.warnings},
          {"dependencies", std::move(deps)},
          {"elaboratedSubject", toJson(r.elaboratedSubject, withRefs)},
          {"elaboratedType", toJson(r.elaboratedType, withRefs)},
          {"stuckGoals", r.stuckGoals}};
}

SolveResult solveResultFromJson(const Json& j) {
  SolveResult r;
  for (const auto& [k, v] : j.at("substitution").items()) r.substitution[k] = termFromJson(v);
  for (const auto& [k, v] : j.at("solved").items()) r.solved[k] = v.get<bool>();
  for (const auto& e : j.at("errors")) {
    SolveError se;
    se.kind = errorKindFromName(e.at("kind").get<std::string>());
    se.message = e.at("message");
    se.log = e.at("log").get<std::vector<std::string>>();
    if (e.contains("ref")) se.ref = sourceRefFromJson(e["ref"]);
    r.errors.push_back(std::move(se));
  }
  r.warnings = j.at("warnings").get<std::vector<std::string>>();
  for (const auto& d : j.at("dependencies"))
    if (auto id = SlotId::parse(d.get<std::string>())) r.dependencies.insert(*id);
  r.elaboratedSubject = termFromJson(j.at("elaboratedSubject"));
  r.elaboratedType = termFromJson(j.at("elaboratedType"));
  r.stuckGoals = j.at("stuckGoals");
  return r;
}

Json toJson(const Diagnostic& d) {
  return {{"range", toJson(d.range)},
          {"severity", severityName(d.severity)},
          {"message", d.message},
          {"log", d.log}};
}

Diagnostic diagnosticFromJson(const Json& j) {
  return {sourceRefFromJson(j.at("range")), severityFromName(j.at("severity").get<std::string>()),
          j.at("message"), j.at("log").get<std::vector<std::string>>()};
}

Json toJson(const Judgment& j, bool withRefs) {
  static constexpr const char* kinds[] = {"Inhabitable", "Typing", "Equal"};
  return {{"kind", kinds[static_cast<int>(j.kind)]},
          {"theory", j.theory},
          {"subject", toJson(j.subject, withRefs)},
          {"type", toJson(j.type, withRefs)},
          {"at", toJson(j.at, withRefs)}};
}

namespace {

Json toJson(const ParsingUnit& u) {
  return {{"text", u.text}, {"ref", toJson(u.ref)}, {"theory", u.theory}, {"slot", u.slot.str()}};
}

ParsingUnit parsingUnitFromJson(const Json& j) {
  auto slot = SlotId::parse(j.at("slot").get<std::string>());
  if (!slot) throw std::runtime_error("bad slot id " + j.at("slot").dump());
  return {j.at("text"), sourceRefFromJson(j.at("ref")), j.at("theory"), *slot};
}

Notation notationFromText(const std::string& text) {
  NotationParseError err;
  auto n = parseNotation(text, &err);
  if (!n) throw std::runtime_error("bad notation '" + text + "': " + err.message);
  return *n;
}

}  // namespace

Json toJson(const Document& d) {
  Json theories = Json::array();
  for (const auto& t : d.theories) {
    Json includes = Json::array();
    for (const auto& i : t.includes) includes.push_back({{"theory", i.theory}, {"ref", toJson(i.ref)}});
    Json constants = Json::array();
    for (const auto& c : t.constants) {
      Json jc{{"name", c.name}, {"nameRef", toJson(c.nameRef)}, {"ref", toJson(c.ref)}};
      if (c.type) jc["type"] = toJson(*c.type);
      if (c.definiens) jc["definiens"] = toJson(*c.definiens);
      if (c.notation) jc["notation"] = formatNotation(*c.notation);
      if (c.notationRef) jc["notationRef"] = toJson(*c.notationRef);
      constants.push_back(std::move(jc));
    }
    theories.push_back({{"name", t.name},
                        {"nameRef", toJson(t.nameRef)},
                        {"ref", toJson(t.ref)},
                        {"includes", std::move(includes)},
                        {"constants", std::move(constants)}});
  }
  Json errors = Json::array();
  for (const auto& e : d.errors) errors.push_back({{"ref", toJson(e.ref)}, {"message", e.message}});
  return {{"file", d.file}, {"theories", std::move(theories)}, {"errors", std::move(errors)}};
}

Document documentFromJson(const Json& j) {
  Document d;
  d.file = j.at("file");
  for (const auto& jt : j.at("theories")) {
    TheoryDecl t;
    t.name = jt.at("name");
    t.nameRef = sourceRefFromJson(jt.at("nameRef"));
    t.ref = sourceRefFromJson(jt.at("ref"));
    for (const auto& ji : jt.at("includes")) t.includes.push_back({ji.at("theory"), sourceRefFromJson(ji.at("ref"))});
    for (const auto& jc : jt.at("constants")) {
      ConstantDecl c;
      c.name = jc.at("name");
      c.nameRef = sourceRefFromJson(jc.at("nameRef"));
      c.ref = sourceRefFromJson(jc.at("ref"));
      if (jc.contains("type")) c.type = parsingUnitFromJson(jc["type"]);
      if (jc.contains("definiens")) c.definiens = parsingUnitFromJson(jc["definiens"]);
      if (jc.contains("notation")) c.notation = notationFromText(jc["notation"]);
      if (jc.contains("notationRef")) c.notationRef = sourceRefFromJson(jc["notationRef"]);
      t.constants.push_back(std::move(c));
    }
    d.theories.push_back(std::move(t));
  }
  for (const auto& je : j.at("errors")) d.errors.push_back({sourceRefFromJson(je.at("ref")), je.at("message")});
  return d;
}

std::string sha256Hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (!EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr))
    throw std::runtime_error("sha256 failed");
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned i = 0; i < len; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 15];
  }
  return out;
}

std::string jsonHash(const Json& j) { return sha256Hex(j.dump()); }

}  // namespace logon
