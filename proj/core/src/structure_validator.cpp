#include "logon/structure_validator.hpp"

#include <functional>
#include <set>

#include "logon/builtins.hpp"
#include "logon/structure_parser.hpp"

namespace logon {

std::string_view structureErrorKindName(StructureErrorKind k) {
  switch (k) {
    case StructureErrorKind::DuplicateName: return "DuplicateName";
    case StructureErrorKind::UnknownInclude: return "UnknownInclude";
    case StructureErrorKind::IncludeCycle: return "IncludeCycle";
    case StructureErrorKind::UnresolvedReference: return "UnresolvedReference";
  }
  return "?";
}

TheoryResolver resolverFor(const std::vector<Document>& docs) {
  return [&docs](std::string_view name) -> const TheoryDecl* {
    for (const auto& d : docs)
      if (auto* t = d.findTheory(name)) return t;
    return nullptr;
  };
}

void addBuiltinLf(std::vector<Document>& docs) {
  for (const auto& d : docs)
    if (d.findTheory(lf::kTheory)) return;
  docs.push_back(parseDocument(builtinLfSource(), std::string(kBuiltinLfFile)));
}

ParsedSlots parseSlots(const std::vector<Document>& docs) {
  ParsedSlots out;
  auto resolve = resolverFor(docs);
  for (const auto& doc : docs) {
    for (const auto& thy : doc.theories) {
      if (resolve(thy.name) != &thy) continue;  // shadowed duplicate
      NotationTable table = buildNotationTable(thy.name, resolve);
      for (const auto& c : thy.constants) {
        for (const auto* slot : {&c.type, &c.definiens})
          if (*slot) out.try_emplace((*slot)->slot, parseTerm(**slot, table));
      }
    }
  }
  return out;
}

const ParsingUnit* slotSource(const std::vector<Document>& docs, const SlotId& id) {
  const TheoryDecl* thy = resolverFor(docs)(theoryOf(id.constant));
  if (!thy) return nullptr;
  std::string_view local = std::string_view(id.constant).substr(theoryOf(id.constant).size() + 1);
  const ConstantDecl* c = thy->find(local);
  if (!c) return nullptr;
  const auto& slot = id.component == Component::Type ? c->type : c->definiens;
  return slot ? &*slot : nullptr;
}

namespace {

struct TheoryInfo {
  const TheoryDecl* decl;
  // local name -> declaration index, first declaration only
  std::map<std::string, std::size_t, std::less<>> position;
  std::set<std::size_t> excluded;
};

std::string renameTypeMeta(const std::string& name) {
  if (isErrorMeta(name)) return "/ET" + name.substr(2);
  return std::string(kTypeMetaPrefix) + name.substr(2);
}

}  // namespace

StructureResult validateStructure(const std::vector<Document>& docs, const ParsedSlots& parsed) {
  StructureResult res;
  auto report = [&](StructureErrorKind k, SourceRef ref, std::string msg) {
    res.errors.push_back({k, std::move(ref), std::move(msg)});
  };

  // theories, first declaration wins
  std::map<std::string, TheoryInfo, std::less<>> theories;
  std::vector<std::string> declared;
  for (const auto& doc : docs) {
    for (const auto& thy : doc.theories) {
      if (theories.count(thy.name)) {
        report(StructureErrorKind::DuplicateName, thy.nameRef, "duplicate theory " + thy.name);
        continue;
      }
      TheoryInfo info{&thy, {}, {}};
      for (std::size_t i = 0; i < thy.constants.size(); ++i) {
        const auto& c = thy.constants[i];
        if (!info.position.emplace(c.name, i).second) {
          report(StructureErrorKind::DuplicateName, c.nameRef,
                 "duplicate declaration " + c.name + " in " + thy.name);
          info.excluded.insert(i);
        }
      }
      theories.emplace(thy.name, std::move(info));
      declared.push_back(thy.name);
    }
  }

  // include graph: unknown targets and cycles drop the edge
  std::map<std::string, std::vector<std::string>> edges;
  for (const auto& name : declared) {
    for (const auto& inc : theories.find(name)->second.decl->includes) {
      if (!theories.count(inc.theory)) {
        report(StructureErrorKind::UnknownInclude, inc.ref, "unknown theory " + inc.theory);
        continue;
      }
      edges[name].push_back(inc.theory);
    }
  }
  std::map<std::string, int> color;  // 0 new, 1 active, 2 done
  std::set<std::pair<std::string, std::string>> backEdges;
  std::function<void(const std::string&)> visit = [&](const std::string& n) {
    color[n] = 1;
    for (const auto& m : edges[n]) {
      if (color[m] == 1) {
        backEdges.insert({n, m});
        for (const auto& inc : theories.find(n)->second.decl->includes)
          if (inc.theory == m)
            report(StructureErrorKind::IncludeCycle, inc.ref, "include cycle through " + m);
        continue;
      }
      if (color[m] == 0) visit(m);
    }
    color[n] = 2;
    res.theoryOrder.push_back(n);
  };
  for (const auto& n : declared)
    if (color[n] == 0) visit(n);

  std::map<std::string, std::set<std::string>> visible;
  for (const auto& n : res.theoryOrder) {
    std::set<std::string> v{n};
    for (const auto& m : edges[n])
      if (!backEdges.count({n, m})) v.insert(visible[m].begin(), visible[m].end());
    visible[n] = std::move(v);
  }

  // references: visible theory, and earlier in the same theory
  auto checkRefs = [&](const std::string& thy, std::size_t index, const ParsingUnit& unit) {
    auto it = parsed.find(unit.slot);
    if (it == parsed.end() || !it->second.term) return true;
    bool ok = true;
    forEachSubterm(it->second.term, [&](const TermPtr& t, const std::vector<std::size_t>&) {
      if (t->isVariable()) return;
      const std::string& path = t->name();
      std::string_view owner = theoryOf(path);
      std::string_view local = std::string_view(path).substr(std::min(path.size(), owner.size() + 1));
      auto th = theories.find(owner);
      bool resolved = false;
      if (th != theories.end() && visible[thy].count(std::string(owner))) {
        auto pos = th->second.position.find(local);
        resolved = pos != th->second.position.end() && (owner != thy || pos->second < index);
      }
      if (!resolved) {
        ok = false;
        std::string why = owner == thy ? " (not declared before use)" : "";
        report(StructureErrorKind::UnresolvedReference, t->ref().value_or(unit.ref),
               "unresolved reference " + path + why);
      }
    });
    return ok;
  };

  for (const auto& thyName : res.theoryOrder) {
    const TheoryInfo& info = theories.find(thyName)->second;
    const TheoryDecl& thy = *info.decl;
    for (std::size_t i = 0; i < thy.constants.size(); ++i) {
      if (info.excluded.count(i)) continue;
      const ConstantDecl& c = thy.constants[i];
      const ParseResult* tp = nullptr;
      const ParseResult* df = nullptr;
      if (c.type)
        if (auto it = parsed.find(c.type->slot); it != parsed.end()) tp = &it->second;
      if (c.definiens)
        if (auto it = parsed.find(c.definiens->slot); it != parsed.end()) df = &it->second;
      bool typeOk = !c.type || checkRefs(thyName, i, *c.type);
      bool defOk = !c.definiens || checkRefs(thyName, i, *c.definiens);
      std::string path = qualify(thyName, c.name);

      if (tp && typeOk)
        res.units.push_back({SlotId::type(path), thyName, tp->metas,
                             Judgment::inhabitable(thyName, tp->term), c.type->ref});
      if (!df || !defOk || !typeOk) continue;

      Context metas;
      TermPtr type;
      if (tp) {
        Substitution rename;
        for (const auto& m : tp->metas) {
          std::string fresh = renameTypeMeta(m.name);
          rename[m.name] = Term::variable(fresh, std::nullopt, true);
          metas.push_back({fresh, m.type ? substitute(m.type, rename) : nullptr, nullptr});
        }
        type = substitute(tp->term, rename);
      } else {
        std::string fresh = std::string(kTypeMetaPrefix);
        metas.push_back({fresh, nullptr, nullptr});
        type = Term::variable(fresh, std::nullopt, true);
      }
      metas.insert(metas.end(), df->metas.begin(), df->metas.end());
      res.units.push_back({SlotId::definiens(path), thyName, std::move(metas),
                           Judgment::typing(thyName, df->term, type), c.definiens->ref});
    }
  }
  return res;
}

}  // namespace logon
