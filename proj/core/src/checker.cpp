#include "logon/checker.hpp"

#include <algorithm>

#include "logon/render.hpp"

namespace logon {

namespace {

bool hasMetas(const TermPtr& t) {
  for (const auto& v : freeVariables(t))
    if (Term::isMetaName(v)) return true;
  return false;
}

TermPtr usable(const TermPtr& t) { return t && !hasMetas(t) ? t : nullptr; }

}  // namespace

const SolveResult* SlotStore::find(const SlotId& id) const {
  auto it = results_.find(id);
  return it == results_.end() ? nullptr : &it->second;
}

LookupResult SlotStore::lookup(const SlotId& id) const {
  if (auto* r = find(id)) return {usable(r->elaboratedSubject), {id}};
  if (id.component == Component::Definiens) return {nullptr, {id}};
  // no type slot: the type solved for the definiens, which changes if a
  // type slot appears
  SlotId def = SlotId::definiens(id.constant);
  if (auto* r = find(def)) return {usable(r->elaboratedType), {id, def}};
  return {nullptr, {id}};
}

SolveResult checkUnit(const ValidationUnit& unit, const RuleSet& rules, const SlotStore& store,
                      const NotationTable& table) {
  SolveOptions opts;
  opts.printer = [&table](const TermPtr& t) { return renderText(t, table); };
  return solve(unit, rules, [&store](const SlotId& id) { return store.lookup(id); }, opts);
}

std::map<std::string, NotationTable> buildTables(const std::vector<Document>& docs) {
  std::map<std::string, NotationTable> out;
  auto resolve = resolverFor(docs);
  for (const auto& d : docs)
    for (const auto& t : d.theories)
      if (!out.count(t.name)) out.emplace(t.name, buildNotationTable(t.name, resolve));
  return out;
}

Diagnostic toDiagnostic(const StructureError& e) { return {e.ref, Severity::Error, e.message, {}}; }

Diagnostic toDiagnostic(const StructureIssue& e) {
  return {e.ref, Severity::Error, std::string(structureErrorKindName(e.kind)) + ": " + e.message, {}};
}

Diagnostic toDiagnostic(const ParseError& e) { return {e.ref, Severity::Error, e.message, {}}; }

std::vector<Diagnostic> solveDiagnostics(const ValidationUnit& unit, const SolveResult& r) {
  std::vector<Diagnostic> out;
  for (const auto& e : r.errors)
    out.push_back({e.ref.value_or(unit.ref), Severity::Error, e.message, e.log});
  for (const auto& w : r.warnings) out.push_back({unit.ref, Severity::Warning, w, {}});
  return out;
}

std::vector<Diagnostic> collectDiagnostics(const std::vector<Document>& docs, const ParsedSlots& parsed,
                                           const StructureResult& structure, const SlotStore& store) {
  std::vector<Diagnostic> out;
  for (const auto& d : docs)
    for (const auto& e : d.errors) out.push_back(toDiagnostic(e));
  for (const auto& [id, p] : parsed)
    for (const auto& e : p.errors) out.push_back(toDiagnostic(e));
  for (const auto& e : structure.errors) out.push_back(toDiagnostic(e));
  for (const auto& u : structure.units)
    if (auto* r = store.find(u.id))
      for (auto& d : solveDiagnostics(u, *r)) out.push_back(std::move(d));
  std::sort(out.begin(), out.end());
  return out;
}

std::size_t ProjectCheck::errorCount() const {
  return std::count_if(diagnostics.begin(), diagnostics.end(),
                       [](const Diagnostic& d) { return d.severity == Severity::Error; });
}

const ValidationUnit* ProjectCheck::unit(const SlotId& id) const {
  for (const auto& u : structure.units)
    if (u.id == id) return &u;
  return nullptr;
}

ProjectCheck checkDocuments(std::vector<Document> docs, const RuleSet& rules) {
  ProjectCheck pc;
  addBuiltinLf(docs);
  pc.documents = std::move(docs);
  pc.parsed = parseSlots(pc.documents);
  pc.structure = validateStructure(pc.documents, pc.parsed);
  pc.tables = buildTables(pc.documents);
  for (const auto& u : pc.structure.units)
    pc.store.put(u.id, checkUnit(u, rules, pc.store, pc.tables.at(u.theory)));
  pc.diagnostics = collectDiagnostics(pc.documents, pc.parsed, pc.structure, pc.store);
  return pc;
}

}  // namespace logon
