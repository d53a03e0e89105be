#include "logon/structure_parser.hpp"

#include <cctype>

namespace logon {

namespace {

enum class Sep { Module, Declaration, Component, Reserved };

struct SepHit {
  Sep kind;
  std::size_t start;
  std::size_t end;
};

std::optional<SepHit> separatorAt(std::string_view s, std::size_t i) {
  switch (s[i]) {
    case kModuleDelimiter:
      return SepHit{Sep::Module, i, i + 1};
    case kDeclarationDelimiter:
      return SepHit{Sep::Declaration, i, i + 1};
    case kComponentDelimiter:
      return SepHit{Sep::Component, i, i + 1};
    case kReservedDelimiter:
      return SepHit{Sep::Reserved, i, i + 1};
    default:
      break;
  }
  auto is = [&](std::string_view alias) { return s.substr(i).starts_with(alias); };
  if (is(kModuleAlias)) return SepHit{Sep::Module, i, i + kModuleAlias.size()};
  if (is(kDeclarationAlias)) return SepHit{Sep::Declaration, i, i + kDeclarationAlias.size()};
  if (is(kComponentAlias)) return SepHit{Sep::Component, i, i + kComponentAlias.size()};
  return std::nullopt;
}

bool isSpace(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

struct Range {
  std::size_t start;
  std::size_t end;
};

Range trim(std::string_view s, Range r) {
  while (r.start < r.end && isSpace(s[r.start])) ++r.start;
  while (r.end > r.start && isSpace(s[r.end - 1])) --r.end;
  return r;
}

bool blankOnly(std::string_view s, Range r) {
  for (auto i = r.start; i < r.end; ++i)
    if (!isSpace(s[i])) return false;
  return true;
}

class StructureParser {
 public:
  StructureParser(std::string_view raw, const std::string& file, const KeywordRegistry& kw)
      : raw_(raw), blank_(blankComments(raw)), file_(file), keywords_(kw) {
    doc_.file = file;
  }

  Document run() {
    std::size_t moduleStart = 0;
    for (std::size_t i = 0; i < blank_.size();) {
      auto hit = separatorAt(blank_, i);
      if (hit && hit->kind == Sep::Module) {
        parseModule({moduleStart, hit->start}, true);
        moduleStart = hit->end;
        i = hit->end;
      } else {
        i += hit ? hit->end - hit->start : 1;
      }
    }
    if (!blankOnly(blank_, {moduleStart, blank_.size()})) parseModule({moduleStart, blank_.size()}, false);
    return std::move(doc_);
  }

 private:
  SourceRef ref(Range r) const { return SourceRef{file_, r.start, r.end}; }

  void error(Range r, std::string msg) { doc_.errors.push_back({ref(r), std::move(msg)}); }

  // Splits [r) at separators of the given kind; other separators stay inside.
  std::vector<Range> split(Range r, Sep kind) const {
    std::vector<Range> out;
    std::size_t start = r.start;
    for (std::size_t i = r.start; i < r.end;) {
      auto hit = separatorAt(blank_, i);
      if (hit && hit->kind == kind) {
        out.push_back({start, hit->start});
        start = hit->end;
        i = hit->end;
      } else {
        i += hit ? hit->end - hit->start : 1;
      }
    }
    out.push_back({start, r.end});
    return out;
  }

  std::size_t tokenEnd(std::size_t i, std::size_t end, std::string_view stops) const {
    while (i < end && !isSpace(blank_[i]) && stops.find(blank_[i]) == std::string_view::npos &&
           !separatorAt(blank_, i))
      ++i;
    return i;
  }

  void parseModule(Range r, bool terminated) {
    auto decls = split(r, Sep::Declaration);
    Range head = trim(blank_, decls.front());
    if (head.start == head.end) {
      error(trim(blank_, r).start < trim(blank_, r).end ? trim(blank_, r) : r,
            "module does not start with 'theory'");
      return;
    }
    std::size_t kwEnd = tokenEnd(head.start, head.end, "");
    if (std::string_view(blank_).substr(head.start, kwEnd - head.start) != "theory") {
      error({head.start, kwEnd}, "expected keyword 'theory'");
      return;
    }
    std::size_t i = kwEnd;
    while (i < head.end && isSpace(blank_[i])) ++i;
    std::size_t nameEnd = tokenEnd(i, head.end, "=");
    if (nameEnd == i) {
      error({head.start, kwEnd}, "theory missing name");
      return;
    }
    TheoryDecl thy;
    thy.name = std::string(blank_.substr(i, nameEnd - i));
    thy.nameRef = ref({i, nameEnd});
    Range whole = trim(blank_, r);
    thy.ref = ref(whole);
    std::size_t j = nameEnd;
    while (j < head.end && isSpace(blank_[j])) ++j;
    if (j >= head.end || blank_[j] != '=') {
      error({i, nameEnd}, "expected '=' after theory name");
      return;
    }
    if (!terminated) error({head.start, kwEnd}, "theory '" + thy.name + "' is missing its module delimiter");
    decls.front() = {j + 1, decls.front().end};
    for (auto d : decls) parseDeclaration(d, thy);
    doc_.theories.push_back(std::move(thy));
  }

  void parseDeclaration(Range r, TheoryDecl& thy) {
    Range t = trim(blank_, r);
    if (t.start == t.end) return;
    for (std::size_t i = t.start; i < t.end; ++i)
      if (auto hit = separatorAt(blank_, i); hit && hit->kind == Sep::Reserved) {
        error(t, "reserved separator (ASCII 31) inside declaration");
        return;
      }
    std::size_t kwEnd = tokenEnd(t.start, t.end, ":=#");
    DeclarationSegment seg{std::string_view(blank_).substr(t.start, t.end - t.start),
                           raw_.substr(t.start, t.end - t.start), ref(t),
                           std::string_view(blank_).substr(t.start, kwEnd - t.start)};
    if (const auto* handler = keywords_.find(seg.keyword)) {
      (*handler)(seg, thy, doc_.errors);
      return;
    }
    if (seg.keyword == "theory") {
      error({t.start, kwEnd}, "nested theories are not supported");
      return;
    }
    parseConstant(t, kwEnd, thy);
  }

  void parseConstant(Range t, std::size_t nameEnd, TheoryDecl& thy) {
    if (nameEnd == t.start) {
      error(t, "declaration missing name");
      return;
    }
    ConstantDecl c;
    c.name = std::string(blank_.substr(t.start, nameEnd - t.start));
    c.nameRef = ref({t.start, nameEnd});
    c.ref = ref(t);
    if (c.name.find('?') != std::string::npos || Term::isMetaName(c.name)) {
      error({t.start, nameEnd}, "invalid constant name '" + c.name + "'");
      return;
    }
    auto comps = split(t, Sep::Component);
    comps.front().start = nameEnd;
    for (auto comp : comps) {
      Range ct = trim(blank_, comp);
      if (ct.start == ct.end) continue;
      char marker = blank_[ct.start];
      Range body = trim(blank_, {ct.start + 1, ct.end});
      // term slots keep comment bytes, so trim on the raw text
      Range rawBody = trim(raw_, {ct.start + 1, ct.end});
      if (marker == ':' || marker == '=') {
        auto& slot = marker == ':' ? c.type : c.definiens;
        if (slot) {
          error(ct, std::string("duplicate ") + (marker == ':' ? "type" : "definiens") + " component");
          continue;
        }
        if (body.start == body.end) {
          error(ct, std::string("empty ") + (marker == ':' ? "type" : "definiens"));
          continue;
        }
        std::string path = qualify(thy.name, c.name);
        slot = ParsingUnit{std::string(raw_.substr(rawBody.start, rawBody.end - rawBody.start)),
                           ref(rawBody), thy.name,
                           marker == ':' ? SlotId::type(path) : SlotId::definiens(path)};
      } else if (marker == '#') {
        if (c.notation) {
          error(ct, "duplicate notation component");
          continue;
        }
        NotationParseError err;
        auto n = parseNotation(std::string_view(blank_).substr(body.start, body.end - body.start), &err);
        if (!n) {
          error(body, "bad notation: " + err.message);
          continue;
        }
        c.notation = std::move(*n);
        c.notationRef = ref(body);
      } else {
        error(ct, "component must start with ':', '=' or '#'");
      }
    }
    thy.constants.push_back(std::move(c));
  }

  std::string_view raw_;
  std::string blank_;
  const std::string& file_;
  const KeywordRegistry& keywords_;
  Document doc_;
};

}  // namespace

std::string blankComments(std::string_view text) {
  std::string out(text);
  for (std::size_t i = 0; i + 1 < out.size(); ++i) {
    if (out[i] == '/' && out[i + 1] == '/') {
      while (i < out.size() && out[i] != '\n') out[i++] = ' ';
    }
  }
  return out;
}

const KeywordRegistry& KeywordRegistry::standard() {
  static const KeywordRegistry registry = [] {
    KeywordRegistry r;
    r.add("include", [](const DeclarationSegment& seg, TheoryDecl& thy,
                        std::vector<StructureError>& errors) {
      auto rest = seg.text.substr(seg.keyword.size());
      std::size_t b = 0;
      while (b < rest.size() && isSpace(rest[b])) ++b;
      std::size_t e = rest.size();
      while (e > b && isSpace(rest[e - 1])) --e;
      auto name = rest.substr(b, e - b);
      if (name.empty() || name.find_first_of(" \t\n\r") != std::string_view::npos) {
        errors.push_back({seg.ref, "include expects exactly one theory name"});
        return;
      }
      std::size_t off = seg.ref.start + seg.keyword.size() + b;
      thy.includes.push_back({std::string(name), SourceRef{seg.ref.file, off, off + name.size()}});
    });
    return r;
  }();
  return registry;
}

void KeywordRegistry::add(std::string keyword, KeywordHandler handler) {
  handlers_[std::move(keyword)] = std::move(handler);
}

const KeywordHandler* KeywordRegistry::find(std::string_view keyword) const {
  auto it = handlers_.find(keyword);
  return it == handlers_.end() ? nullptr : &it->second;
}

Document parseDocument(std::string_view text, const std::string& file,
                       const KeywordRegistry& keywords) {
  return StructureParser(text, file, keywords).run();
}

std::optional<DeclarationLocation> declarationAt(const Document& doc, std::size_t offset) {
  auto in = [&](const SourceRef& r) { return r.start <= offset && offset < r.end; };
  for (const auto& thy : doc.theories) {
    for (const auto& c : thy.constants) {
      if (!in(c.ref)) continue;
      DeclarationLocation loc{thy.name, c.name, DeclarationLocation::Part::None};
      if (in(c.nameRef))
        loc.part = DeclarationLocation::Part::Name;
      else if (c.type && in(c.type->ref))
        loc.part = DeclarationLocation::Part::Type;
      else if (c.definiens && in(c.definiens->ref))
        loc.part = DeclarationLocation::Part::Definiens;
      else if (c.notationRef && in(*c.notationRef))
        loc.part = DeclarationLocation::Part::Notation;
      return loc;
    }
  }
  return std::nullopt;
}

std::string serializeDocument(const Document& doc) {
  std::string out;
  for (const auto& thy : doc.theories) {
    out += "theory " + thy.name + " =\n";
    for (const auto& inc : thy.includes) out += "  include " + inc.theory + " " + std::string(kDeclarationAlias) + "\n";
    for (const auto& c : thy.constants) {
      out += "  " + c.name;
      if (c.type) out += " : " + c.type->text;
      if (c.definiens) out += " " + std::string(kComponentAlias) + " = " + c.definiens->text;
      if (c.notation) out += " " + std::string(kComponentAlias) + " # " + formatNotation(*c.notation);
      out += " " + std::string(kDeclarationAlias) + "\n";
    }
    out += std::string(kModuleAlias) + "\n";
  }
  return out;
}

}  // namespace logon
