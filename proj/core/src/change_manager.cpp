#include "logon/change_manager.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <tuple>

#include "logon/serialize.hpp"
#include "logon/structure_parser.hpp"

namespace logon {

namespace {

using RefKey = DepGraph::RefKey;
using RefMap = DepGraph::RefMap;

RefKey key(const SourceRef& r) { return {r.file, r.start, r.end}; }

bool isSpace(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; }

/// (trimmed text, offset of its first byte within the slot text)
std::pair<std::string, std::size_t> trimmed(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && isSpace(s[b])) ++b;
  while (e > b && isSpace(s[e - 1])) --e;
  return {s.substr(b, e - b), b};
}

std::string parsedHashOf(const ParseResult& p) {
  Json errs = Json::array();
  for (const auto& e : p.errors) errs.push_back(e.message);
  return jsonHash({{"term", toJson(p.term, false)}, {"metas", toJson(p.metas, false)}, {"errors", errs}});
}

std::string unitHashOf(const ValidationUnit& u) {
  return jsonHash({{"id", u.id.str()}, {"judgment", toJson(u.judgment, false)}, {"metas", toJson(u.metas, false)}});
}

std::string validatedHashOf(const SolveResult& r) { return jsonHash(toJson(r, false)); }

Context mapContextRefs(const Context& c, const std::function<SourceRef(const SourceRef&)>& f) {
  Context out;
  for (const auto& d : c) out.push_back({d.name, mapRefs(d.type, f), mapRefs(d.definiens, f)});
  return out;
}

ParseResult shiftParse(ParseResult p, std::ptrdiff_t delta) {
  if (delta == 0) return p;
  auto f = [delta](const SourceRef& r) {
    return SourceRef{r.file, static_cast<std::size_t>(static_cast<std::ptrdiff_t>(r.start) + delta),
                     static_cast<std::size_t>(static_cast<std::ptrdiff_t>(r.end) + delta)};
  };
  p.term = mapRefs(p.term, f);
  p.metas = mapContextRefs(p.metas, f);
  for (auto& e : p.errors) e.ref = f(e.ref);
  return p;
}

/// Pairs the references of two terms of the same shape.
void zipRefs(const TermPtr& a, const TermPtr& b, RefMap& out) {
  if (!a || !b) return;
  if (a->ref() && b->ref()) out.emplace(key(*a->ref()), *b->ref());
  auto ka = children(*a);
  auto kb = children(*b);
  for (std::size_t i = 0; i < ka.size() && i < kb.size(); ++i) zipRefs(ka[i], kb[i], out);
}

SolveResult remapResult(SolveResult r, const RefMap& m) {
  if (m.empty()) return r;
  auto f = [&m](const SourceRef& ref) {
    auto it = m.find(key(ref));
    return it == m.end() ? ref : it->second;
  };
  for (auto& [k, v] : r.substitution) v = mapRefs(v, f);
  r.elaboratedSubject = mapRefs(r.elaboratedSubject, f);
  r.elaboratedType = mapRefs(r.elaboratedType, f);
  for (auto& e : r.errors)
    if (e.ref) e.ref = f(*e.ref);
  return r;
}

/// What a theory's table resolves each name to, and its notations.
struct TableSummary {
  std::string notations;
  std::map<std::string, std::string> names;
};

TableSummary summarize(const NotationTable& t) {
  TableSummary s{t.notationFingerprint(), {}};
  for (const auto& e : t.entries()) {
    for (const auto& n : {e.name, e.path}) {
      auto r = t.resolve(n);
      s.names[n] = r.empty() ? "" : r.front()->path + (r.front()->typed ? "|t" : "|u");
    }
  }
  return s;
}

std::string tableFingerprint(const NotationTable& t) {
  TableSummary s = summarize(t);
  std::string all = s.notations;
  for (const auto& [n, p] : s.names) all += "\n" + n + "=" + p;
  return sha256Hex(all);
}

std::string declarationSignature(const std::vector<Document>& docs) {
  std::string out;
  for (const auto& d : docs) {
    for (const auto& t : d.theories) {
      out += "T " + t.name + "\n";
      for (const auto& i : t.includes) out += " I " + i.theory + "\n";
      for (const auto& c : t.constants)
        out += " C " + c.name + (c.type ? " :" : "") + (c.definiens ? " =" : "") +
               (c.notation ? " # " + formatNotation(*c.notation) : "") + "\n";
    }
  }
  return out;
}

}  // namespace

DepGraph::DepGraph(const RuleSet& rules) : rules_(&rules) {}

const SlotNode* DepGraph::node(const SlotId& id) const {
  auto it = nodes_.find(id);
  return it == nodes_.end() ? nullptr : &it->second;
}

const SourceFile* DepGraph::file(const std::string& name) const {
  for (const auto& f : files_)
    if (f.file == name) return &f;
  return nullptr;
}

const NotationTable* DepGraph::table(const std::string& theory) const {
  auto it = tables_.find(theory);
  return it == tables_.end() ? nullptr : &it->second;
}

std::size_t DepGraph::errorCount() const {
  return std::count_if(diagnostics_.begin(), diagnostics_.end(),
                       [](const Diagnostic& d) { return d.severity == Severity::Error; });
}

std::map<SlotId, std::set<SlotId>> DepGraph::edges() const {
  std::map<SlotId, std::set<SlotId>> out;
  for (const auto& [id, n] : nodes_) {
    if (!n.validated) continue;
    auto& deps = out[id];
    for (const auto& d : n.validated->dependencies)
      if (d != id && nodes_.count(d)) deps.insert(d);
  }
  return out;
}

void DepGraph::rebuildDocuments() {
  docs_.clear();
  for (const auto& f : files_) docs_.push_back(parseDocument(f.text, f.file));
  addBuiltinLf(docs_);
  tables_ = buildTables(docs_);
}

CheckStats DepGraph::load(std::vector<SourceFile> files) {
  files_ = std::move(files);
  nodes_.clear();
  store_ = {};
  std::set<std::string> all;
  for (const auto& f : files_) all.insert(f.file);
  refresh(all);
  revalidate();
  return stats_;
}

EditPlan DepGraph::applyEdit(const std::string& file, std::string newText) {
  auto it = std::find_if(files_.begin(), files_.end(), [&](const SourceFile& f) { return f.file == file; });
  if (it == files_.end())
    files_.push_back({file, std::move(newText)});
  else
    it->text = std::move(newText);
  return refresh({file});
}

DiagnosticsDelta DepGraph::checkIncremental(const std::string& file, std::string newText) {
  auto before = diagnostics_;
  applyEdit(file, std::move(newText));
  revalidate();
  return diffDiagnostics(before, diagnostics_);
}

DiagnosticsDelta DepGraph::removeFile(const std::string& file) {
  auto before = diagnostics_;
  files_.erase(std::remove_if(files_.begin(), files_.end(), [&](const SourceFile& f) { return f.file == file; }),
               files_.end());
  refresh({file});
  revalidate();
  return diffDiagnostics(before, diagnostics_);
}

namespace {

bool identChar(unsigned char c) { return std::isalnum(c) || c == '_' || c == '\'' || c == '?'; }

/// Whole-token occurrence; non-ASCII neighbours count as boundaries so
/// names next to symbolic delimiters are still found.
bool occursAsWord(const std::string& text, const std::string& name) {
  for (auto at = text.find(name); at != std::string::npos; at = text.find(name, at + 1)) {
    bool left = at == 0 || !identChar(static_cast<unsigned char>(text[at - 1]));
    std::size_t end = at + name.size();
    bool right = end == text.size() || !identChar(static_cast<unsigned char>(text[end]));
    if (left && right) return true;
  }
  return false;
}

}  // namespace

EditPlan DepGraph::refresh(const std::set<std::string>& changedFiles) {
  EditPlan plan;
  std::string oldSignature = declarationSignature(docs_);
  std::map<std::string, TableSummary> oldTables;
  for (const auto& [name, t] : tables_) oldTables.emplace(name, summarize(t));

  rebuildDocuments();
  plan.structural = declarationSignature(docs_) != oldSignature;

  // per theory: did notations change, and which names resolve differently
  std::map<std::string, bool> notationsChanged;
  std::map<std::string, std::vector<std::string>> changedNames;
  for (const auto& [name, t] : tables_) {
    TableSummary now = summarize(t);
    auto old = oldTables.find(name);
    if (old == oldTables.end()) {
      notationsChanged[name] = true;
      continue;
    }
    notationsChanged[name] = now.notations != old->second.notations;
    for (const auto& [n, p] : now.names)
      if (auto o = old->second.names.find(n); o == old->second.names.end() || o->second != p)
        changedNames[name].push_back(n);
    for (const auto& [n, p] : old->second.names)
      if (!now.names.count(n)) changedNames[name].push_back(n);
  }
  auto tableAffects = [&](const std::string& theory, const std::string& text) {
    if (notationsChanged[theory]) return true;
    for (const auto& n : changedNames[theory])
      if (occursAsWord(text, n)) return true;
    return false;
  };

  RefMap moved;
  std::map<SlotId, SlotNode> next;
  auto resolve = resolverFor(docs_);
  for (const auto& doc : docs_) {
    for (const auto& thy : doc.theories) {
      if (resolve(thy.name) != &thy) continue;
      const NotationTable& table = tables_.at(thy.name);
      for (const auto& c : thy.constants) {
        for (const auto* slot : {&c.type, &c.definiens}) {
          if (!*slot) continue;
          const ParsingUnit& pu = **slot;
          if (next.count(pu.slot)) continue;  // duplicate declaration
          auto [text, lead] = trimmed(pu.text);
          SourceRef ref{pu.ref.file, pu.ref.start + lead, pu.ref.start + lead + text.size()};

          auto old = nodes_.find(pu.slot);
          bool fileTouched = changedFiles.count(pu.ref.file) > 0;
          bool reparse = old == nodes_.end() || old->second.stringRep != text ||
                         old->second.ref.file != ref.file || old->second.theory != thy.name ||
                         tableAffects(thy.name, text);
          SlotNode n;
          if (old != nodes_.end()) n = old->second;
          n.id = pu.slot;
          n.theory = thy.name;
          n.stringRep = text;
          n.stringHash = sha256Hex(text);
          if (reparse) {
            n.parsed = parseTerm(pu, table);
            n.parsedHash = parsedHashOf(n.parsed);
            plan.reparse.insert(pu.slot);
          } else if (fileTouched) {
            n.parsed = shiftParse(old->second.parsed,
                                  static_cast<std::ptrdiff_t>(ref.start) - static_cast<std::ptrdiff_t>(old->second.ref.start));
          }
          if (old != nodes_.end() && (reparse || fileTouched) && n.parsedHash == old->second.parsedHash) {
            zipRefs(old->second.parsed.term, n.parsed.term, moved);
            for (std::size_t i = 0; i < n.parsed.metas.size() && i < old->second.parsed.metas.size(); ++i)
              zipRefs(old->second.parsed.metas[i].type, n.parsed.metas[i].type, moved);
          }
          n.ref = ref;
          next.emplace(pu.slot, std::move(n));
        }
      }
    }
  }
  nodes_ = std::move(next);
  pendingReparsed_ += plan.reparse.size();
  // stored results still carry the positions from before the first
  // unvalidated edit, so chain the moves
  RefMap chained;
  for (const auto& [from, to] : pendingRefs_) {
    auto m = moved.find({to.file, to.start, to.end});
    chained.emplace(from, m == moved.end() ? to : m->second);
  }
  for (const auto& [from, to] : moved)
    if (!pendingRefs_.count(from)) chained.emplace(from, to);
  pendingRefs_ = std::move(chained);
  return plan;
}

void DepGraph::revalidate() {
  stats_ = {};
  stats_.reparsed = pendingReparsed_;
  pendingReparsed_ = 0;

  ParsedSlots parsed;
  for (const auto& [id, n] : nodes_) parsed.emplace(id, n.parsed);
  structure_ = validateStructure(docs_, parsed);

  for (auto& [id, n] : nodes_) n.unit.reset();
  for (const auto& u : structure_.units) nodes_.at(u.id).unit = u;

  // drop results of slots that vanished or are no longer validated
  for (auto it = store_.results().begin(); it != store_.results().end();) {
    const SlotId id = it->first;
    ++it;
    auto n = nodes_.find(id);
    if (n == nodes_.end() || !n->second.unit) store_.erase(id);
  }
  for (auto& [id, n] : nodes_) {
    if (n.unit) continue;
    n.validated.reset();
    n.validatedHash.clear();
    n.unitHash.clear();
    n.dependencyHashes.clear();
    n.printerHash.clear();
  }

  auto currentHash = [this](const SlotId& d) -> std::string {
    auto it = nodes_.find(d);
    if (it == nodes_.end() || !it->second.validated) return "";
    return it->second.validatedHash;
  };

  // messages are rendered with the theory's notations, so results that
  // carry any are redone when those change
  std::map<std::string, std::string> printers;
  auto printerOf = [&](const std::string& theory) -> const std::string& {
    auto it = printers.find(theory);
    if (it == printers.end()) it = printers.emplace(theory, tableFingerprint(tables_.at(theory))).first;
    return it->second;
  };

  for (const auto& u : structure_.units) {
    SlotNode& n = nodes_.at(u.id);
    std::string uh = unitHashOf(u);
    bool need = !n.validated || n.unitHash != uh || (!n.printerHash.empty() && n.printerHash != printerOf(u.theory));
    for (const auto& [d, h] : n.dependencyHashes)
      if (need || currentHash(d) != h) {
        need = true;
        break;
      }
    if (need) {
      SolveResult r = checkUnit(u, *rules_, store_, tables_.at(u.theory));
      n.validatedHash = validatedHashOf(r);
      n.dependencyHashes.clear();
      for (const auto& d : r.dependencies) n.dependencyHashes[d] = currentHash(d);
      n.printerHash = r.errors.empty() && r.warnings.empty() ? "" : printerOf(u.theory);
      n.validated = std::move(r);
      n.unitHash = uh;
      ++stats_.revalidated;
      stats_.revalidatedSlots.push_back(u.id);
    } else {
      n.validated = remapResult(std::move(*n.validated), pendingRefs_);
    }
    store_.put(u.id, *n.validated);
  }
  pendingRefs_.clear();
  diagnostics_ = collectDiagnostics(docs_, parsed, structure_, store_);
}

ProjectCheck DepGraph::snapshot() const {
  ProjectCheck pc;
  pc.documents = docs_;
  for (const auto& [id, n] : nodes_) pc.parsed.emplace(id, n.parsed);
  pc.structure = structure_;
  pc.store = store_;
  pc.tables = tables_;
  pc.diagnostics = diagnostics_;
  return pc;
}

std::vector<SlotId> propagate(const std::map<SlotId, std::set<SlotId>>& edges,
                              const std::map<SlotId, bool>& revalidated) {
  std::map<SlotId, std::set<SlotId>> dependents;
  for (const auto& [from, deps] : edges)
    for (const auto& d : deps) dependents[d].insert(from);

  std::set<SlotId> reached;
  std::vector<SlotId> work;
  for (const auto& [id, changed] : revalidated)
    if (changed) work.push_back(id);
  while (!work.empty()) {
    SlotId s = work.back();
    work.pop_back();
    for (const auto& d : dependents[s])
      if (reached.insert(d).second) work.push_back(d);
  }

  // dependencies first; a cycle anywhere in the reached part is a bug
  std::vector<SlotId> order;
  std::map<SlotId, int> state;
  std::function<void(const SlotId&)> visit = [&](const SlotId& s) {
    int& st = state[s];
    if (st == 2) return;
    if (st == 1) throw CycleDetected(s.str());
    st = 1;
    if (auto e = edges.find(s); e != edges.end())
      for (const auto& d : e->second)
        if (reached.count(d) || revalidated.count(d)) visit(d);
    state[s] = 2;
    if (reached.count(s)) order.push_back(s);
  };
  for (const auto& s : reached) visit(s);
  return order;
}

DiagnosticsDelta diffDiagnostics(const std::vector<Diagnostic>& before, const std::vector<Diagnostic>& after) {
  DiagnosticsDelta d;
  std::set_difference(after.begin(), after.end(), before.begin(), before.end(), std::back_inserter(d.added));
  std::set_difference(before.begin(), before.end(), after.begin(), after.end(), std::back_inserter(d.removed));
  return d;
}

}  // namespace logon
