#include "logon/server.hpp"

#include <algorithm>
#include <istream>
#include <ostream>

#include "logon/builtins.hpp"
#include "logon/render.hpp"

namespace logon {

namespace {

[[noreturn]] void invalid(const std::string& what) { throw ProtocolError(errc::kInvalidParams, what); }

std::string str(const Json& p, const char* key) {
  if (!p.is_object() || !p.contains(key) || !p[key].is_string()) invalid(std::string("missing string '") + key + "'");
  return p[key].get<std::string>();
}

long integer(const Json& p, const char* key) {
  if (!p.is_object() || !p.contains(key) || !p[key].is_number_integer())
    invalid(std::string("missing integer '") + key + "'");
  return p[key].get<long>();
}

std::size_t offsetParam(const Json& p, const char* key) {
  long v = integer(p, key);
  if (v < 0) invalid(std::string("negative '") + key + "'");
  return static_cast<std::size_t>(v);
}

Json location(const SourceRef& r) { return {{"file", r.file}, {"start", r.start}, {"end", r.end}}; }

Json diagnosticsFor(const DepGraph& g, const std::string& uri) {
  Json out = Json::array();
  for (const auto& d : g.diagnostics())
    if (d.range.file == uri) out.push_back(toJson(d));
  return out;
}

/// The smallest slot containing `offset`, edges included.
const SlotNode* slotAt(const DepGraph& g, const std::string& uri, std::size_t offset) {
  const SlotNode* best = nullptr;
  for (const auto& [id, n] : g.nodes())
    if (n.ref.file == uri && n.ref.start <= offset && offset <= n.ref.end)
      if (!best || n.ref.length() < best->ref.length()) best = &n;
  return best;
}

TermPtr termOf(const SlotNode& n) {
  if (n.validated && n.validated->elaboratedSubject) return n.validated->elaboratedSubject;
  return n.parsed.term;
}

/// Bound variables in scope at `path`, outermost first.
Context contextAlong(const TermPtr& root, const std::vector<std::size_t>& path) {
  Context ctx;
  TermPtr t = root;
  for (std::size_t idx : path) {
    if (!t || !t->isComplex()) break;
    std::size_t k = 0;
    TermPtr next;
    const auto& bound = t->bound();
    for (std::size_t i = 0; i < bound.size() && !next; ++i) {
      for (const auto& part : {bound[i].type, bound[i].definiens}) {
        if (!part) continue;
        if (k++ == idx) {
          ctx.insert(ctx.end(), bound.begin(), bound.begin() + i);
          next = part;
          break;
        }
      }
    }
    if (!next) {
      ctx.insert(ctx.end(), bound.begin(), bound.end());
      next = t->args().at(idx - k);
    }
    t = next;
  }
  return ctx;
}

bool isSpace(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; }

bool isLfPrimitive(std::string_view head) {
  for (auto p : {lf::kPi, lf::kLambda, lf::kApply, lf::kArrow, lf::kHole})
    if (head == p) return true;
  return false;
}

struct Decl {
  const TheoryDecl* theory = nullptr;
  const ConstantDecl* constant = nullptr;
};

Decl findDecl(const DepGraph& g, const std::string& path) {
  auto resolve = resolverFor(g.documents());
  const TheoryDecl* thy = resolve(theoryOf(path));
  if (!thy) return {};
  return {thy, thy->find(localNameOf(path))};
}

/// Constant or theory named at `offset`: a declaration name or a
/// constant occurrence in a term.
std::optional<std::string> nameAt(const DepGraph& g, const std::string& uri, std::size_t offset) {
  for (const auto& d : g.documents()) {
    if (d.file != uri) continue;
    for (const auto& t : d.theories) {
      if (t.nameRef.start <= offset && offset < t.nameRef.end) return t.name;
      for (const auto& c : t.constants)
        if (c.nameRef.start <= offset && offset < c.nameRef.end) return qualify(t.name, c.name);
    }
  }
  const SlotNode* n = slotAt(g, uri, offset);
  if (!n) return std::nullopt;
  TermPtr root = termOf(*n);
  if (!root) return std::nullopt;
  auto m = logon::subtermAt(root, SourceRef{uri, offset, offset + 1});
  if (!m) return std::nullopt;
  if (m->term->isConstant()) return m->term->name();
  if (m->term->isComplex() && !isLfPrimitive(m->term->name())) return m->term->name();
  return std::nullopt;
}

std::optional<SourceRef> declarationRef(const DepGraph& g, const std::string& name) {
  if (auto id = SlotId::parse(name))
    if (const auto* n = g.node(*id)) return n->ref;
  auto resolve = resolverFor(g.documents());
  if (const TheoryDecl* t = resolve(name)) return t->ref;
  if (auto d = findDecl(g, name); d.constant) return d.constant->ref;
  return std::nullopt;
}

Json hitJson(const Hit& h, const NotationTable& table) {
  Json sigma = Json::object();
  for (const auto& [k, v] : h.sigma) sigma[k] = renderText(v, table);
  Json path = h.entry->path;
  return {{"slot", h.entry->slot.str()}, {"location", location(h.entry->ref)}, {"inferred", h.entry->inferred},
          {"path", std::move(path)}, {"text", renderText(h.entry->term, table)}, {"substitution", std::move(sigma)}};
}

Json statsJson(const CheckStats& s) {
  Json slots = Json::array();
  for (const auto& id : s.revalidatedSlots) slots.push_back(id.str());
  return {{"reparsed", s.reparsed}, {"revalidated", s.revalidated}, {"revalidatedSlots", std::move(slots)}};
}

}  // namespace

Session::Session(std::optional<fs::path> projectRoot) {
  if (projectRoot) {
    BuildOptions opts;
    opts.html = false;
    project_ = buildProject(ProjectConfig::load(*projectRoot), opts);
  }
}

const std::vector<std::string>& Session::methods() {
  static const std::vector<std::string> m{"initialize", "didOpen",     "didChange", "didClose", "typeAt",
                                          "completionsAt", "definitionAt", "related", "search",  "astOf",
                                          "subtermAt",  "stats"};
  return m;
}

std::vector<Json> Session::drainNotifications() {
  std::lock_guard lock(mutex_);
  return std::exchange(notifications_, {});
}

Json Session::handle(const Json& request) {
  Json id = request.is_object() && request.contains("id") ? request["id"] : Json(nullptr);
  try {
    if (!request.is_object() || !request.contains("method") || !request["method"].is_string())
      throw ProtocolError(errc::kInvalidRequest, "request needs a string 'method'");
    Json params = request.value("params", Json::object());
    return {{"id", id}, {"result", call(request["method"].get<std::string>(), params)}};
  } catch (const ProtocolError& e) {
    return {{"id", id}, {"error", {{"code", e.code}, {"message", e.what()}}}};
  } catch (const Json::exception& e) {
    return {{"id", id}, {"error", {{"code", errc::kInvalidParams}, {"message", e.what()}}}};
  }
}

Json Session::call(const std::string& method, const Json& params) {
  {
    std::lock_guard lock(mutex_);
    ++requests_;
    if (method != "initialize" && !initialized_)
      throw ProtocolError(errc::kNotInitialized, "initialize must come first");
  }
  if (method == "initialize") return initialize(params);
  if (method == "didOpen") return didOpen(params);
  if (method == "didChange") return didChange(params);
  if (method == "didClose") return didClose(params);
  if (method == "typeAt") return typeAt(params);
  if (method == "completionsAt") return completionsAt(params);
  if (method == "definitionAt") return definitionAt(params);
  if (method == "related") return related(params);
  if (method == "search") return search(params);
  if (method == "astOf") return astOf(params);
  if (method == "subtermAt") return subtermAt(params);
  if (method == "stats") return stats(params);
  throw ProtocolError(errc::kMethodNotFound, "unknown method " + method);
}

std::shared_ptr<const DocumentState> Session::doc(const std::string& uri) const {
  std::lock_guard lock(mutex_);
  auto it = docs_.find(uri);
  if (it == docs_.end()) throw ProtocolError(errc::kNotFound, "document not open: " + uri);
  return it->second;
}

std::vector<SourceFile> Session::filesWith(const std::string& uri, const std::string& text) const {
  std::vector<SourceFile> files;
  if (project_)
    for (const auto& f : project_->files)
      if (f.file != uri) files.push_back(f);
  files.push_back({uri, text});
  return files;
}

Json Session::initialize(const Json& p) {
  long v = integer(p, "protocolVersion");
  if (v != kProtocolVersion)
    throw ProtocolError(errc::kProtocolVersionMismatch,
                        "client speaks version " + std::to_string(v) + ", server " + std::to_string(kProtocolVersion));
  std::lock_guard lock(mutex_);
  initialized_ = true;
  Json files = Json::array();
  if (project_)
    for (const auto& f : project_->files) files.push_back(f.file);
  return {{"protocolVersion", kProtocolVersion}, {"server", "logon"}, {"methods", methods()},
          {"projectFiles", std::move(files)}};
}

Json Session::didOpen(const Json& p) {
  std::string uri = str(p, "uri"), text = str(p, "text");
  long version = integer(p, "version");
  auto g = std::make_shared<DepGraph>();
  CheckStats st = g->load(filesWith(uri, text));
  auto state = std::make_shared<DocumentState>(DocumentState{uri, version, text, g, st});
  std::lock_guard lock(mutex_);
  docs_[uri] = state;
  lastVersion_[uri] = version;
  ++generation_[uri];
  return {{"uri", uri}, {"version", version}, {"diagnostics", diagnosticsFor(*g, uri)}};
}

Json Session::didChange(const Json& p) {
  std::string uri = str(p, "uri"), text = str(p, "text");
  long version = integer(p, "version");
  std::shared_ptr<const DocumentState> base;
  std::uint64_t gen;
  {
    std::lock_guard lock(mutex_);
    auto it = docs_.find(uri);
    if (it == docs_.end()) throw ProtocolError(errc::kNotFound, "document not open: " + uri);
    if (version <= lastVersion_[uri])
      throw ProtocolError(errc::kStaleVersion, "version " + std::to_string(version) + " is not newer than " +
                                                   std::to_string(lastVersion_[uri]));
    lastVersion_[uri] = version;
    gen = ++generation_[uri];
    base = it->second;
  }
  auto g = std::make_shared<DepGraph>(*base->graph);
  g->checkIncremental(uri, text);
  if (beforeCommit) beforeCommit(uri);
  std::lock_guard lock(mutex_);
  if (generation_[uri] != gen) throw ProtocolError(errc::kCancelled, "superseded by a newer change");
  docs_[uri] = std::make_shared<DocumentState>(DocumentState{uri, version, text, g, g->lastStats()});
  return {{"uri", uri}, {"version", version}, {"diagnostics", diagnosticsFor(*g, uri)}};
}

Json Session::didClose(const Json& p) {
  std::string uri = str(p, "uri");
  std::lock_guard lock(mutex_);
  if (!docs_.erase(uri)) throw ProtocolError(errc::kNotFound, "document not open: " + uri);
  ++generation_[uri];
  return {{"uri", uri}};
}

Json Session::typeAt(const Json& p) {
  auto d = doc(str(p, "uri"));
  std::size_t offset = offsetParam(p, "offset");
  Json out{{"uri", d->uri}, {"version", d->version}, {"type", nullptr}, {"term", nullptr}};
  const DepGraph& g = *d->graph;
  if (offset >= d->text.size() || isSpace(d->text[offset])) return out;

  auto typeOfConstant = [&](const std::string& path) -> TermPtr {
    return g.store().lookup(SlotId::type(path)).term;
  };
  TermPtr type;
  const NotationTable* table = nullptr;
  std::string theory;
  // declaration names
  for (const auto& doc : g.documents())
    if (doc.file == d->uri)
      for (const auto& t : doc.theories)
        for (const auto& c : t.constants)
          if (c.nameRef.start <= offset && offset < c.nameRef.end) {
            type = typeOfConstant(qualify(t.name, c.name));
            theory = t.name;
          }
  if (!type) {
    const SlotNode* n = slotAt(g, d->uri, offset);
    if (!n) return out;
    TermPtr root = termOf(*n);
    if (!root) return out;
    auto m = logon::subtermAt(root, SourceRef{d->uri, offset, offset + 1});
    if (!m) return out;
    theory = n->theory;
    Context ctx = contextAlong(root, m->path);
    const TermPtr& t = m->term;
    if (t->isVariable()) {
      for (auto it = ctx.rbegin(); it != ctx.rend(); ++it)
        if (it->name == t->name()) {
          type = it->type;
          break;
        }
    } else if (t->isConstant()) {
      type = typeOfConstant(t->name());
    } else {
      type = inferType(t, ctx, {}, g.rules(), [&g](const SlotId& id) { return g.store().lookup(id); });
    }
  }
  table = g.table(theory);
  if (!type || !table) return out;
  out["type"] = renderText(type, *table);
  out["term"] = toJson(type);
  return out;
}

Json Session::completionsAt(const Json& p) {
  auto d = doc(str(p, "uri"));
  std::size_t offset = offsetParam(p, "offset");
  Json items = Json::array();
  Json out{{"uri", d->uri}, {"version", d->version}, {"items", nullptr}};
  const DepGraph& g = *d->graph;
  const SlotNode* n = slotAt(g, d->uri, offset);
  if (!n || !n->unit) {
    out["items"] = std::move(items);
    return out;
  }
  const NotationTable& table = *g.table(n->theory);
  TermPtr root = termOf(*n);
  SourceRef here{d->uri, offset, offset};

  if (n->validated && n->validated->elaboratedSubject) {
    ProjectCheck pc = g.snapshot();
    for (const auto& hole : findHoles(n->validated->elaboratedSubject)) {
      if (!hole.ref || !hole.ref->contains(here)) continue;
      for (const auto& h : hintsFor(pc, *n->unit, hole, g.rules()))
        items.push_back({{"label", h.headName == "lambda" ? "λ" : table.displayName(h.headName)},
                         {"kind", "hint"},
                         {"insertText", h.renderedText},
                         {"remainingGoals", h.remainingGoals},
                         {"range", location(*hole.ref)}});
      break;
    }
  }
  std::set<std::string> seen;
  if (root)
    if (auto m = logon::subtermAt(root, here)) {
      Context ctx = contextAlong(root, m->path);
      for (auto it = ctx.rbegin(); it != ctx.rend(); ++it)
        if (seen.insert(it->name).second)
          items.push_back({{"label", it->name}, {"kind", "scope"}, {"insertText", it->name}, {"detail", "variable"}});
    }
  for (const auto& e : table.entries()) {
    std::string label = table.displayName(e.path);
    if (seen.insert(label).second)
      items.push_back({{"label", label}, {"kind", "scope"}, {"insertText", label}, {"detail", e.path}});
  }
  out["items"] = std::move(items);
  return out;
}

Json Session::definitionAt(const Json& p) {
  auto d = doc(str(p, "uri"));
  std::size_t offset = offsetParam(p, "offset");
  auto name = nameAt(*d->graph, d->uri, offset);
  if (!name) throw ProtocolError(errc::kNotFound, "no constant at offset " + std::to_string(offset));
  auto ref = declarationRef(*d->graph, *name);
  if (!ref) throw ProtocolError(errc::kNotFound, "no declaration of " + *name);
  Json loc = location(*ref);
  if (p.value("open", false)) {
    std::lock_guard lock(mutex_);
    notifications_.push_back({{"method", "openLocation"}, {"params", loc}});
  }
  return {{"uri", d->uri}, {"version", d->version}, {"name", *name}, {"location", std::move(loc)}};
}

Json Session::related(const Json& p) {
  auto d = doc(str(p, "uri"));
  std::size_t offset = offsetParam(p, "offset");
  std::string expr = str(p, "relation");
  auto name = nameAt(*d->graph, d->uri, offset);
  if (!name) throw ProtocolError(errc::kNotFound, "no constant at offset " + std::to_string(offset));
  ProjectCheck pc = d->graph->snapshot();
  RelationalIndex ix = buildRelationalIndex(pc);
  std::set<std::string> targets;
  try {
    targets = logon::related(ix, *name, expr);
  } catch (const UnknownRelation& e) {
    throw ProtocolError(errc::kUnknownRelation, e.what());
  }
  Json locs = Json::array();
  for (const auto& t : targets) {
    Json e{{"name", t}, {"location", nullptr}};
    if (auto r = declarationRef(*d->graph, t)) e["location"] = location(*r);
    locs.push_back(std::move(e));
  }
  return {{"uri", d->uri}, {"version", d->version}, {"name", *name}, {"related", std::move(locs)}};
}

Json Session::search(const Json& p) {
  std::string query = str(p, "query");
  Json out = Json::object();
  auto run = [&](const TermIndex& index, const NotationTable& table) {
    SearchQuery q;
    try {
      q = parseQuery(query, table);
    } catch (const QueryParseError& e) {
      throw ProtocolError(errc::kQueryParseError, e.what());
    }
    Json hits = Json::array();
    for (const auto& h : logon::search(index, q)) hits.push_back(hitJson(h, table));
    out["hits"] = std::move(hits);
  };
  if (p.contains("uri")) {
    auto d = doc(str(p, "uri"));
    ProjectCheck pc = d->graph->snapshot();
    run(TermIndex::build(pc), queryTable(pc.documents));
    out["uri"] = d->uri;
    out["version"] = d->version;
  } else if (project_) {
    run(project_->terms, project_->queryTable());
  } else {
    throw ProtocolError(errc::kNotFound, "no project; pass a uri");
  }
  return out;
}

Json Session::astOf(const Json& p) {
  auto d = doc(str(p, "uri"));
  const DepGraph& g = *d->graph;
  Json document;
  for (const auto& doc : g.documents())
    if (doc.file == d->uri) document = toJson(doc);
  Json slots = Json::object();
  for (const auto& [id, n] : g.nodes()) {
    if (n.ref.file != d->uri) continue;
    Json s{{"range", location(n.ref)}, {"parsed", toJson(n.parsed.term)}, {"elaborated", nullptr}};
    if (n.validated && n.validated->elaboratedSubject) s["elaborated"] = toJson(n.validated->elaboratedSubject);
    slots[id.str()] = std::move(s);
  }
  return {{"uri", d->uri}, {"version", d->version}, {"document", std::move(document)}, {"slots", std::move(slots)}};
}

Json Session::subtermAt(const Json& p) {
  auto d = doc(str(p, "uri"));
  std::size_t start = offsetParam(p, "start"), end = offsetParam(p, "end");
  if (end < start) invalid("end before start");
  const DepGraph& g = *d->graph;
  const SlotNode* best = nullptr;
  for (const auto& [id, n] : g.nodes())
    if (n.ref.file == d->uri && n.ref.start <= start && end <= n.ref.end)
      if (!best || n.ref.length() < best->ref.length()) best = &n;
  if (!best || !termOf(*best)) throw ProtocolError(errc::kNotFound, "no term at the range");
  auto m = logon::subtermAt(termOf(*best), SourceRef{d->uri, start, end});
  if (!m || !m->term->ref()) throw ProtocolError(errc::kNotFound, "no term at the range");
  Json path = m->path;
  return {{"uri", d->uri},
          {"version", d->version},
          {"slot", best->id.str()},
          {"path", std::move(path)},
          {"range", location(*m->term->ref())}};
}

Json Session::stats(const Json& p) {
  Json out{{"protocolVersion", kProtocolVersion}};
  {
    std::lock_guard lock(mutex_);
    out["openDocuments"] = docs_.size();
    out["requests"] = requests_;
  }
  if (p.contains("uri")) {
    auto d = doc(str(p, "uri"));
    out["uri"] = d->uri;
    out["version"] = d->version;
    out["last"] = statsJson(d->stats);
  }
  return out;
}

void serveStdio(Session& session, std::istream& in, std::ostream& out) {
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    Json response;
    try {
      response = session.handle(Json::parse(line));
    } catch (const Json::parse_error& e) {
      response = {{"id", nullptr}, {"error", {{"code", errc::kParseError}, {"message", e.what()}}}};
    }
    for (const auto& n : session.drainNotifications()) out << n.dump() << '\n';
    out << response.dump() << '\n';
    out.flush();
  }
}

}  // namespace logon
