#include "logon/proof.hpp"

#include <algorithm>

#include "logon/render.hpp"
#include "logon/structure_parser.hpp"

namespace logon {

namespace {

void walkHoles(const TermPtr& t, Context& ctx, std::vector<std::size_t>& path, std::vector<HoleSite>& out) {
  if (lf::isHole(t)) {
    out.push_back({path, t->ref(), t->args()[0], ctx});
    return;
  }
  if (!t->isComplex()) return;
  std::size_t idx = 0;
  std::size_t pushed = 0;
  for (const auto& d : t->bound()) {
    for (const auto* part : {&d.type, &d.definiens}) {
      if (!*part) continue;
      path.push_back(idx++);
      walkHoles(*part, ctx, path, out);
      path.pop_back();
    }
    ctx.push_back({d.name, d.type, nullptr});
    ++pushed;
  }
  for (const auto& a : t->args()) {
    path.push_back(idx++);
    walkHoles(a, ctx, path, out);
    path.pop_back();
  }
  ctx.resize(ctx.size() - pushed);
}

std::size_t declIndex(const TheoryDecl* thy, std::string_view local) {
  if (!thy) return 0;
  for (std::size_t i = 0; i < thy->constants.size(); ++i)
    if (thy->constants[i].name == local) return i;
  return thy->constants.size();
}

std::string_view localName(std::string_view path) {
  auto q = path.find('?');
  return q == std::string_view::npos ? path : path.substr(q + 1);
}

}  // namespace

std::vector<HoleSite> findHoles(const TermPtr& t) {
  std::vector<HoleSite> out;
  if (!t) return out;
  Context ctx;
  std::vector<std::size_t> path;
  walkHoles(t, ctx, path, out);
  return out;
}

std::vector<std::string> constantsInScope(const ProjectCheck& pc, const ValidationUnit& unit) {
  std::vector<std::string> out;
  auto tbl = pc.tables.find(unit.theory);
  if (tbl == pc.tables.end()) return out;
  const TheoryDecl* thy = resolverFor(pc.documents)(unit.theory);
  std::size_t self = declIndex(thy, localName(unit.id.constant));
  for (const auto& e : tbl->second.entries()) {
    if (!e.typed || theoryOf(e.path) == lf::kTheory) continue;
    if (theoryOf(e.path) == unit.theory && declIndex(thy, e.name) >= self) continue;
    out.push_back(e.path);
  }
  return out;
}

std::vector<Hint> hintsFor(const ProjectCheck& pc, const ValidationUnit& unit, const HoleSite& hole,
                           const RuleSet& rules) {
  HintRequest req;
  req.expected = hole.expected;
  req.ctx = hole.ctx;
  if (auto* r = pc.store.find(unit.id)) {
    for (const auto& m : unit.metas) {
      auto s = r->solved.find(m.name);
      if (s == r->solved.end() || !s->second) req.metas.push_back(m);
    }
  }
  req.constants = constantsInScope(pc, unit);
  req.table = &pc.tables.at(unit.theory);
  req.rules = &rules;
  req.lookup = [&pc](const SlotId& id) { return pc.store.lookup(id); };
  return collectHints(req);
}

GreedyResult greedyComplete(std::vector<SourceFile> files, const SlotId& slot, int maxRounds,
                            const RuleSet& rules) {
  GreedyResult res;
  for (;;) {
    std::vector<Document> docs;
    for (const auto& f : files) docs.push_back(parseDocument(f.text, f.file));
    ProjectCheck pc = checkDocuments(std::move(docs), rules);
    const ValidationUnit* unit = pc.unit(slot);
    const SolveResult* r = pc.store.find(slot);
    if (!unit || !r || !r->elaboratedSubject) break;
    auto file = std::find_if(files.begin(), files.end(),
                             [&](const SourceFile& f) { return f.file == unit->ref.file; });
    if (file == files.end()) break;
    std::string current = file->text.substr(unit->ref.start, unit->ref.length());
    res.texts.push_back(current);
    res.finalText = current;
    res.errors = pc.errorCount();

    auto holes = findHoles(r->elaboratedSubject);
    if (holes.empty()) {
      res.holeFree = true;
      break;
    }
    if (res.rounds >= maxRounds) break;
    TermPtr term = r->elaboratedSubject;
    bool stuck = false;
    for (auto it = holes.rbegin(); it != holes.rend(); ++it) {
      auto hints = hintsFor(pc, *unit, *it, rules);
      if (hints.empty()) {
        stuck = true;
        break;
      }
      term = replaceAt(term, it->path, hints.front().insertion);
    }
    if (stuck) break;
    std::string next = renderText(term, pc.tables.at(unit->theory));
    file->text.replace(unit->ref.start, unit->ref.length(), next);
    ++res.rounds;
  }
  return res;
}

}  // namespace logon
