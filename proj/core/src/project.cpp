#include "logon/project.hpp"

#include <fnmatch.h>

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>

#include "logon/builtins.hpp"
#include "logon/render.hpp"
#include "logon/structure_parser.hpp"

namespace logon {

namespace {

std::string readFile(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw ProjectError("cannot read " + p.string());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string trim(std::string s) {
  auto b = s.find_first_not_of(" \t\r");
  auto e = s.find_last_not_of(" \t\r");
  return b == std::string::npos ? "" : s.substr(b, e - b + 1);
}

std::string unquote(const std::string& v, const fs::path& file, int line) {
  if (v.size() >= 2 && (v.front() == '"' || v.front() == '\'') && v.back() == v.front())
    return v.substr(1, v.size() - 2);
  throw ProjectError(file.string() + ":" + std::to_string(line) + ": expected a quoted string");
}

// key = "value" | key = ["a", "b"]; '#' starts a comment
std::map<std::string, std::vector<std::string>> readKeyValues(const fs::path& file) {
  std::map<std::string, std::vector<std::string>> out;
  std::istringstream in(readFile(file));
  std::string line;
  int no = 0;
  while (std::getline(in, line)) {
    ++no;
    if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) throw ProjectError(file.string() + ":" + std::to_string(no) + ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    std::string val = trim(line.substr(eq + 1));
    std::vector<std::string> vals;
    if (!val.empty() && val.front() == '[') {
      if (val.back() != ']') throw ProjectError(file.string() + ":" + std::to_string(no) + ": unterminated list");
      std::istringstream items(val.substr(1, val.size() - 2));
      std::string item;
      while (std::getline(items, item, ','))
        if (!trim(item).empty()) vals.push_back(unquote(trim(item), file, no));
    } else {
      vals.push_back(unquote(val, file, no));
    }
    out[key] = std::move(vals);
  }
  return out;
}

bool within(const fs::path& root, const fs::path& p) {
  auto r = fs::weakly_canonical(root), q = fs::weakly_canonical(p);
  auto [a, b] = std::mismatch(r.begin(), r.end(), q.begin(), q.end());
  return a == r.end();
}

double millisSince(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

std::string entryName(const std::string& file) {
  std::string s = file;
  std::replace(s.begin(), s.end(), '/', '~');
  return "entries/" + s + ".json";
}

std::string htmlEscape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string pathAttr(const std::vector<std::size_t>& path) {
  std::string s;
  for (auto i : path) s += (s.empty() ? "" : ".") + std::to_string(i);
  return s;
}

// nested spans (pre-order) turned into nested <span data-path>
std::string htmlTerm(const Rendered& r) {
  std::string out;
  std::vector<std::size_t> open;
  std::size_t next = 0;
  for (std::size_t i = 0; i <= r.text.size(); ++i) {
    while (!open.empty() && open.back() == i) {
      out += "</span>";
      open.pop_back();
    }
    while (next < r.spans.size() && r.spans[next].start == i) {
      const auto& s = r.spans[next++];
      out += "<span class=\"t" + std::string(s.inferred ? " inf" : "") + "\" data-path=\"" + pathAttr(s.path) + "\">";
      if (s.end == i)
        out += "</span>";
      else
        open.push_back(s.end);
    }
    if (i < r.text.size()) out += htmlEscape(std::string_view(&r.text[i], 1));
  }
  for (std::size_t k = 0; k < open.size(); ++k) out += "</span>";
  return out;
}

}  // namespace

ProjectConfig ProjectConfig::load(const fs::path& rootIn) {
  ProjectConfig c;
  if (!fs::is_directory(rootIn)) throw ProjectError("not a directory: " + rootIn.string());
  c.root = fs::weakly_canonical(rootIn);
  std::map<std::string, std::vector<std::string>> kv;
  if (fs::exists(c.root / "project.toml")) kv = readKeyValues(c.root / "project.toml");
  auto one = [&](const std::string& key) -> std::optional<std::string> {
    auto it = kv.find(key);
    if (it == kv.end()) return std::nullopt;
    if (it->second.size() != 1) throw ProjectError("project.toml: '" + key + "' takes one value");
    return it->second.front();
  };
  for (const auto& [k, v] : kv)
    if (k != "source" && k != "cache" && k != "html" && k != "include")
      throw ProjectError("project.toml: unknown key '" + k + "'");

  if (auto s = one("source"))
    c.sourceDir = c.root / *s;
  else
    c.sourceDir = fs::is_directory(c.root / "source") ? c.root / "source" : c.root;
  if (const char* env = std::getenv("LOGON_CACHE"); env && *env)
    c.cacheDir = fs::absolute(env);
  else
    c.cacheDir = c.root / one("cache").value_or(".cache");
  c.htmlDir = c.cacheDir / one("html").value_or("html");
  if (auto it = kv.find("include"); it != kv.end()) c.include = it->second;

  if (!within(c.root, c.sourceDir)) throw ProjectError("source dir outside the project root");
  return c;
}

std::vector<SourceFile> collectSources(const ProjectConfig& config) {
  std::vector<SourceFile> out;
  if (!fs::is_directory(config.sourceDir)) throw ProjectError("missing source dir " + config.sourceDir.string());
  auto cache = fs::weakly_canonical(config.cacheDir);
  for (auto it = fs::recursive_directory_iterator(config.sourceDir); it != fs::recursive_directory_iterator(); ++it) {
    if (it->is_directory() && fs::weakly_canonical(it->path()) == cache) {
      it.disable_recursion_pending();
      continue;
    }
    if (!it->is_regular_file()) continue;
    std::string rel = fs::relative(it->path(), config.sourceDir).generic_string();
    bool match = std::any_of(config.include.begin(), config.include.end(),
                             [&](const std::string& g) { return fnmatch(g.c_str(), rel.c_str(), 0) == 0; });
    if (match) out.push_back({rel, readFile(it->path())});
  }
  std::sort(out.begin(), out.end(), [](const SourceFile& a, const SourceFile& b) { return a.file < b.file; });
  return out;
}

std::vector<std::string> fileOrder(const std::vector<Document>& docs) {
  auto resolve = resolverFor(docs);
  std::map<std::string, std::set<std::string>> deps;
  std::map<const TheoryDecl*, std::string> fileOf;
  for (const auto& d : docs)
    for (const auto& t : d.theories) fileOf[&t] = d.file;
  for (const auto& d : docs) {
    auto& ds = deps[d.file];
    for (const auto& t : d.theories)
      for (const auto& inc : t.includes)
        if (const auto* target = resolve(inc.theory); target && fileOf[target] != d.file) ds.insert(fileOf[target]);
  }
  std::vector<std::string> order;
  std::set<std::string> done, active;
  std::function<void(const std::string&)> visit = [&](const std::string& f) {
    if (done.count(f) || active.count(f)) return;
    active.insert(f);
    for (const auto& g : deps[f]) visit(g);
    active.erase(f);
    done.insert(f);
    order.push_back(f);
  };
  for (const auto& d : docs) visit(d.file);
  return order;
}

std::string dumpStable(const Json& j) { return j.dump(1) + "\n"; }

void writeAtomic(const fs::path& path, const std::string& content) {
  fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ProjectError("cannot write " + tmp.string());
    out << content;
    if (!out.flush()) throw ProjectError("cannot write " + tmp.string());
  }
  fs::rename(tmp, path);
}

namespace {

void writeIfChanged(const fs::path& path, const std::string& content) {
  std::error_code ec;
  if (fs::exists(path, ec)) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    if (s.str() == content) return;
  }
  writeAtomic(path, content);
}

Json tuplesJson(const TupleSet& ts) {
  Json a = Json::array();
  for (const auto& [x, y] : ts) a.push_back({x, y});
  return a;
}

Json termEntryJson(const IndexEntry& e, bool withTerm) {
  Json path = e.path;
  Json j{{"slot", e.slot.str()}, {"path", std::move(path)}, {"ref", toJson(e.ref)}, {"inferred", e.inferred}};
  if (withTerm) j["term"] = toJson(e.term, false);
  return j;
}

std::string fileOfSlot(const std::vector<Document>& docs, const SlotId& id) {
  const ParsingUnit* pu = slotSource(docs, id);
  return pu ? pu->ref.file : std::string();
}

std::string fileOfNode(const std::vector<Document>& docs, const std::string& node) {
  // theory name, constant path or slot id
  if (auto id = SlotId::parse(node)) return fileOfSlot(docs, *id);
  auto resolve = resolverFor(docs);
  const TheoryDecl* t = resolve(theoryOf(node).empty() ? node : theoryOf(node));
  if (!t) t = resolve(node);
  if (!t) return "";
  for (const auto& d : docs)
    for (const auto& th : d.theories)
      if (&th == t) return d.file;
  return "";
}

}  // namespace

Json BuildReport::toJson() const {
  Json fs = Json::array();
  for (const auto& f : files)
    fs.push_back({{"file", f.file},
                  {"status", f.skipped ? "skipped" : "built"},
                  {"errors", f.errors},
                  {"warnings", f.warnings},
                  {"millis", f.millis}});
  Json diags = Json::array();
  for (const auto& d : diagnostics) diags.push_back(logon::toJson(d));
  return {{"files", std::move(fs)},   {"errors", errors}, {"built", built},
          {"skipped", skipped},       {"millis", millis}, {"diagnostics", std::move(diags)}};
}

NotationTable Project::queryTable() const { return logon::queryTable(check.documents); }

Json cacheEntry(const Project& p, const std::string& file, const std::string& contentHash,
                const std::string& inputsHash) {
  const auto& pc = p.check;
  Json doc;
  for (const auto& d : pc.documents)
    if (d.file == file) doc = toJson(d);
  Json slots = Json::object();
  for (const auto& [id, parsed] : pc.parsed) {
    if (fileOfSlot(pc.documents, id) != file) continue;
    Json s{{"parsed", toJson(parsed)}};
    const auto* r = pc.store.find(id);
    s["result"] = r ? toJson(*r) : Json(nullptr);
    slots[id.str()] = std::move(s);
  }
  Json relations = Json::object();
  for (const auto& [rel, ts] : p.relations.tuples) {
    TupleSet mine;
    for (const auto& t : ts)
      if (fileOfNode(pc.documents, t.first) == file) mine.insert(t);
    relations[std::string(relationName(rel))] = tuplesJson(mine);
  }
  Json terms = Json::array();
  for (const auto& e : p.terms.entries())
    if (e.ref.file == file) terms.push_back(termEntryJson(e, false));
  Json diags = Json::array();
  for (const auto& d : pc.diagnostics)
    if (d.range.file == file) diags.push_back(toJson(d));
  return {{"format", kCacheFormat},  {"file", file},           {"contentHash", contentHash},
          {"inputsHash", inputsHash}, {"document", std::move(doc)}, {"slots", std::move(slots)},
          {"relations", std::move(relations)}, {"terms", std::move(terms)}, {"diagnostics", std::move(diags)}};
}

Json indexJson(const RelationalIndex& relations, const TermIndex& terms) {
  Json rel = Json::object();
  for (const auto& [r, ts] : relations.tuples) rel[std::string(relationName(r))] = tuplesJson(ts);
  Json ts = Json::array();
  for (const auto& e : terms.entries()) ts.push_back(termEntryJson(e, true));
  return {{"format", kCacheFormat}, {"relations", std::move(rel)}, {"terms", std::move(ts)}};
}

Project buildProject(const ProjectConfig& config, const BuildOptions& options) {
  auto t0 = std::chrono::steady_clock::now();
  Project p;
  p.config = config;
  p.files = collectSources(config);

  std::vector<Document> docs;
  std::map<std::string, std::string> contentHash;
  for (const auto& f : p.files) {
    docs.push_back(parseDocument(f.text, f.file));
    contentHash[f.file] = sha256Hex(f.text);
  }
  addBuiltinLf(docs);
  p.order = fileOrder(docs);
  p.order.erase(std::remove(p.order.begin(), p.order.end(), std::string(kBuiltinLfFile)), p.order.end());

  // inputs of a file: its text plus how each include resolves
  auto resolve = resolverFor(docs);
  std::map<const TheoryDecl*, std::string> fileOf;
  for (const auto& d : docs)
    for (const auto& t : d.theories) fileOf[&t] = d.file;
  std::map<std::string, std::string> inputsHash;
  inputsHash[std::string(kBuiltinLfFile)] = sha256Hex(builtinLfSource());
  for (const auto& f : p.order) {
    std::string in = std::string(kCacheFormat) + "\n" + contentHash[f] + "\n";
    for (const auto& d : docs)
      if (d.file == f)
        for (const auto& t : d.theories)
          for (const auto& inc : t.includes) {
            const auto* target = resolve(inc.theory);
            std::string how = !target ? "missing" : fileOf[target] == f ? "local" : inputsHash[fileOf[target]];
            in += inc.theory + "=" + how + "\n";
          }
    inputsHash[f] = sha256Hex(in);
  }

  // reusable cache entries
  std::map<std::string, Json> cached;
  if (!options.force) {
    try {
      Json manifest = Json::parse(readFile(config.cacheDir / "manifest.json"));
      if (manifest.at("format") == kCacheFormat)
        for (const auto& e : manifest.at("files")) {
          std::string f = e.at("file");
          if (!inputsHash.count(f) || e.at("inputsHash") != inputsHash[f]) continue;
          Json entry = Json::parse(readFile(config.cacheDir / e.at("entry").get<std::string>()));
          if (entry.at("format") == kCacheFormat && entry.at("inputsHash") == inputsHash[f]) cached[f] = std::move(entry);
        }
    } catch (const std::exception&) {
      // no usable manifest: build everything
    }
  }

  ProjectCheck& pc = p.check;
  pc.documents = std::move(docs);
  pc.tables = buildTables(pc.documents);
  pc.parsed = parseSlots(pc.documents);
  std::map<SlotId, SolveResult> cachedResults;
  for (const auto& [f, entry] : cached)
    for (const auto& [k, s] : entry.at("slots").items()) {
      auto id = SlotId::parse(k);
      if (!id) continue;
      pc.parsed[*id] = parseResultFromJson(s.at("parsed"));
      if (!s.at("result").is_null()) cachedResults.emplace(*id, solveResultFromJson(s.at("result")));
    }
  pc.structure = validateStructure(pc.documents, pc.parsed);

  std::map<std::string, double> millis;
  for (const auto& u : pc.structure.units) {
    const std::string& f = u.ref.file;
    if (cached.count(f))
      if (auto it = cachedResults.find(u.id); it != cachedResults.end()) {
        pc.store.put(u.id, it->second);
        continue;
      }
    auto t = std::chrono::steady_clock::now();
    pc.store.put(u.id, checkUnit(u, lf::rules(), pc.store, pc.tables.at(u.theory)));
    millis[f] += millisSince(t);
  }
  pc.diagnostics = collectDiagnostics(pc.documents, pc.parsed, pc.structure, pc.store);
  p.relations = buildRelationalIndex(pc);
  p.terms = TermIndex::build(pc);

  auto& rep = p.report;
  rep.diagnostics = pc.diagnostics;
  for (const auto& f : p.order) {
    FileReport fr{f, cached.count(f) > 0, 0, 0, millis[f]};
    for (const auto& d : pc.diagnostics) {
      if (d.range.file != f) continue;
      if (d.severity == Severity::Error) ++fr.errors;
      if (d.severity == Severity::Warning) ++fr.warnings;
    }
    (fr.skipped ? rep.skipped : rep.built)++;
    rep.files.push_back(fr);
  }
  rep.errors = pc.errorCount();

  if (options.writeCache) {
    Json files = Json::array();
    for (const auto& f : p.order) {
      std::string name = entryName(f);
      if (!cached.count(f))
        writeIfChanged(config.cacheDir / name, dumpStable(cacheEntry(p, f, contentHash[f], inputsHash[f])));
      files.push_back({{"file", f}, {"contentHash", contentHash[f]}, {"inputsHash", inputsHash[f]}, {"entry", name}});
    }
    writeIfChanged(config.cacheDir / "manifest.json",
                   dumpStable({{"format", kCacheFormat}, {"files", std::move(files)}, {"order", p.order}}));
    writeIfChanged(config.cacheDir / "index.json", dumpStable(indexJson(p.relations, p.terms)));
  }
  if (options.html) renderHtml(p);
  rep.millis = millisSince(t0);
  return p;
}

std::string htmlPage(const Project& p, const std::string& file) {
  const auto& pc = p.check;
  std::ostringstream h;
  h << "<!DOCTYPE html>\n<html><head><meta charset=\"utf-8\"><title>" << htmlEscape(file) << "</title>\n"
    << "<style>.inferred{display:none}.show .inferred{display:inline}.show .plain{display:none}"
       ".t.folded>*{display:none}.t.folded::after{content:\"…\"}</style>\n"
    << "</head><body>\n<h1>" << htmlEscape(file) << "</h1>\n";
  auto resolve = resolverFor(pc.documents);
  RenderOptions plain;
  plain.parenthesize = true;
  RenderOptions full = plain;
  full.showInferred = true;
  for (const auto& d : pc.documents) {
    if (d.file != file) continue;
    for (const auto& thy : d.theories) {
      if (resolve(thy.name) != &thy) continue;
      const NotationTable& table = pc.tables.at(thy.name);
      h << "<section class=\"theory\" id=\"" << htmlEscape(thy.name) << "\">\n<h2>theory " << htmlEscape(thy.name)
        << "</h2>\n";
      for (const auto& c : thy.constants) {
        std::string path = qualify(thy.name, c.name);
        h << "<div class=\"decl\" id=\"" << htmlEscape(path) << "\"><span class=\"name\">" << htmlEscape(c.name)
          << "</span>";
        for (const auto* slot : {&c.type, &c.definiens}) {
          if (!*slot) continue;
          SlotId id = (*slot)->slot;
          TermPtr t;
          if (const auto* r = pc.store.find(id)) t = r->elaboratedSubject;
          if (!t)
            if (auto it = pc.parsed.find(id); it != pc.parsed.end()) t = it->second.term;
          if (!t) continue;
          h << (id.component == Component::Type ? " : " : " = ") << "<span class=\"slot\" data-slot=\""
            << htmlEscape(id.str()) << "\"><span class=\"plain\">" << htmlTerm(render(t, table, plain))
            << "</span><span class=\"inferred\">" << htmlTerm(render(t, table, full)) << "</span></span>";
        }
        if (c.notation) h << " <span class=\"notation\"># " << htmlEscape(formatNotation(*c.notation)) << "</span>";
        h << " <button class=\"toggle\">inferred</button></div>\n";
      }
      h << "</section>\n";
    }
  }
  h << "<script>\n"
       "document.querySelectorAll('.toggle').forEach(b => b.onclick = () => b.parentElement.classList.toggle('show'));\n"
       "document.querySelectorAll('.t').forEach(s => s.ondblclick = e => { e.stopPropagation(); "
       "s.classList.toggle('folded'); });\n"
       "</script>\n</body></html>\n";
  return h.str();
}

std::string htmlIndex(const Project& p) {
  std::ostringstream h;
  h << "<!DOCTYPE html>\n<html><head><meta charset=\"utf-8\"><title>project</title></head><body>\n"
    << "<h1>Files</h1>\n<ul class=\"files\">\n";
  for (const auto& f : p.order) {
    std::size_t decls = 0;
    for (const auto& d : p.check.documents)
      if (d.file == f)
        for (const auto& t : d.theories) decls += t.constants.size();
    h << "<li><a href=\"" << htmlEscape(f) << ".html\">" << htmlEscape(f) << "</a> (" << decls
      << " declarations)</li>\n";
  }
  h << "</ul>\n</body></html>\n";
  return h.str();
}

void renderHtml(const Project& p) {
  for (const auto& f : p.order) writeIfChanged(p.config.htmlDir / (f + ".html"), htmlPage(p, f));
  writeIfChanged(p.config.htmlDir / "index.html", htmlIndex(p));
}

}  // namespace logon
