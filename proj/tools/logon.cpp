#include <CLI11.hpp>
#include <httplib.h>

#include <fstream>
#include <iostream>
#include <sstream>

#include "logon/project.hpp"
#include "logon/serialize.hpp"
#include "logon/server.hpp"
#include "logon/structure_parser.hpp"

using namespace logon;

namespace {

std::string readFile(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + p.string());
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

void printDiagnostics(const std::vector<Diagnostic>& diags, const std::map<std::string, std::string>& texts) {
  for (const auto& d : diags) {
    auto it = texts.find(d.range.file);
    std::string where = d.range.file;
    if (it != texts.end()) {
      auto lc = lineColumnOf(it->second, d.range.start);
      where += ":" + std::to_string(lc.line) + ":" + std::to_string(lc.column);
    }
    std::cout << where << ": " << severityName(d.severity) << ": " << d.message << "\n";
    for (const auto& line : d.log) std::cout << "    " << line << "\n";
  }
}

std::map<std::string, std::string> textsOf(const std::vector<SourceFile>& files) {
  std::map<std::string, std::string> m;
  for (const auto& f : files) m[f.file] = f.text;
  return m;
}

int build(const fs::path& dir, bool json, bool force, bool html) {
  auto cfg = ProjectConfig::load(dir);
  BuildOptions opts;
  opts.force = force;
  opts.html = html;
  Project p = buildProject(cfg, opts);
  if (json) {
    std::cout << p.report.toJson().dump(2) << "\n";
  } else {
    printDiagnostics(p.report.diagnostics, textsOf(p.files));
    for (const auto& f : p.report.files)
      std::cout << (f.skipped ? "  cached " : "  built  ") << f.file << "  " << f.errors << " error(s)\n";
    std::cout << p.report.files.size() << " file(s), " << p.report.built << " built, " << p.report.skipped
              << " cached, " << p.report.errors << " error(s) in " << p.report.millis << " ms\n";
  }
  return p.report.errors == 0 ? 0 : 1;
}

// Checks one file; the other sources next to it provide its includes.
int check(const fs::path& file, bool json) {
  std::vector<SourceFile> files;
  const std::string name = file.filename().string();
  files.push_back({name, readFile(file)});
  fs::path dir = file.has_parent_path() ? file.parent_path() : fs::path(".");
  for (const auto& e : fs::directory_iterator(dir))
    if (e.is_regular_file() && e.path().extension() == ".mmt" && e.path().filename() != file.filename())
      files.push_back({e.path().filename().string(), readFile(e.path())});
  std::vector<Document> docs;
  for (const auto& f : files) docs.push_back(parseDocument(f.text, f.file));
  ProjectCheck pc = checkDocuments(std::move(docs));
  std::vector<Diagnostic> mine;
  for (const auto& d : pc.diagnostics)
    if (d.range.file == name) mine.push_back(d);
  std::size_t errors = 0;
  for (const auto& d : mine) errors += d.severity == Severity::Error;
  if (json) {
    Json ds = Json::array();
    for (const auto& d : mine) ds.push_back(toJson(d));
    std::cout << Json{{"file", name}, {"errors", errors}, {"diagnostics", std::move(ds)}}.dump(2) << "\n";
  } else {
    printDiagnostics(mine, textsOf(files));
    std::cout << name << ": " << errors << " error(s)\n";
  }
  return errors == 0 ? 0 : 1;
}

int searchCommand(const fs::path& dir, const std::string& query, bool json) {
  Session s(dir);
  s.call("initialize", {{"protocolVersion", kProtocolVersion}});
  Json r;
  try {
    r = s.call("search", {{"query", query}});
  } catch (const ProtocolError& e) {
    std::cerr << "logon: " << e.code << ": " << e.what() << "\n";
    return 2;
  }
  if (json) {
    std::cout << r.dump(2) << "\n";
    return 0;
  }
  auto texts = textsOf(s.project()->files);
  for (const auto& h : r["hits"]) {
    const auto& loc = h["location"];
    std::string file = loc["file"];
    auto lc = lineColumnOf(texts[file], loc["start"].get<std::size_t>());
    std::cout << file << ":" << lc.line << ":" << lc.column << ": " << h["text"].get<std::string>()
              << (h["inferred"].get<bool>() ? "  (inferred)" : "") << "  [" << h["slot"].get<std::string>() << "]";
    for (const auto& [k, v] : h["substitution"].items()) std::cout << "  " << k << " := " << v.get<std::string>();
    std::cout << "\n";
  }
  std::cout << r["hits"].size() << " hit(s)\n";
  return 0;
}

// One POST route per method; the body is the request envelope (or just
// its params) and the reply is the response envelope.
void serveHttp(Session& session, int port) {
  httplib::Server server;
  for (const auto& m : Session::methods()) {
    server.Post("/" + m, [&session, m](const httplib::Request& req, httplib::Response& res) {
      Json request;
      try {
        Json body = req.body.empty() ? Json::object() : Json::parse(req.body);
        if (body.contains("method") || body.contains("params")) {
          request = body;
          request["method"] = m;
        } else {
          request = {{"id", nullptr}, {"method", m}, {"params", body}};
        }
      } catch (const Json::parse_error& e) {
        res.status = 400;
        res.set_content(Json{{"id", nullptr}, {"error", {{"code", errc::kParseError}, {"message", e.what()}}}}.dump(),
                        "application/json");
        return;
      }
      res.set_content(session.handle(request).dump(), "application/json");
    });
  }
  server.Post("/notifications", [&session](const httplib::Request&, httplib::Response& res) {
    res.set_content(Json(session.drainNotifications()).dump(), "application/json");
  });
  server.Get("/", [](const httplib::Request&, httplib::Response& res) {
    res.set_content(Json{{"server", "logon"}, {"protocolVersion", kProtocolVersion}, {"methods", Session::methods()}}
                        .dump(),
                    "application/json");
  });
  std::cerr << "logon: listening on http://127.0.0.1:" << port << "\n";
  if (!server.listen("127.0.0.1", port)) throw std::runtime_error("cannot listen on port " + std::to_string(port));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"logon: proof-language kernel and IDE backend"};
  app.require_subcommand(1);
  bool json = false;
  app.add_flag("--json", json, "machine-readable output");

  std::string dir, file, query;
  bool force = false, noHtml = false;
  int port = 0;

  auto* buildCmd = app.add_subcommand("build", "check a project, write its cache and HTML");
  buildCmd->add_option("dir", dir, "project directory")->required()->check(CLI::ExistingDirectory);
  buildCmd->add_flag("--force", force, "ignore cached entries");
  buildCmd->add_flag("--no-html", noHtml, "skip the HTML pages");
  buildCmd->add_flag("--json", json, "machine-readable output");

  auto* checkCmd = app.add_subcommand("check", "check one file");
  checkCmd->add_option("file", file, "source file")->required()->check(CLI::ExistingFile);
  checkCmd->add_flag("--json", json, "machine-readable output");

  auto* searchCmd = app.add_subcommand("search", "search a project for a term pattern");
  searchCmd->add_option("dir", dir, "project directory")->required()->check(CLI::ExistingDirectory);
  searchCmd->add_option("query", query, "query, e.g. '$x: x∧x'")->required();
  searchCmd->add_flag("--json", json, "machine-readable output");

  auto* serveCmd = app.add_subcommand("serve", "IDE server: NDJSON on stdio, or HTTP with --port");
  serveCmd->add_option("dir", dir, "project directory")->required()->check(CLI::ExistingDirectory);
  serveCmd->add_option("--port", port, "HTTP port")->check(CLI::Range(1, 65535));

  CLI11_PARSE(app, argc, argv);
  try {
    if (*buildCmd) return build(dir, json, force, !noHtml);
    if (*checkCmd) return check(file, json);
    if (*searchCmd) return searchCommand(dir, query, json);
    if (*serveCmd) {
      Session session{fs::path(dir)};
      if (port)
        serveHttp(session, port);
      else
        serveStdio(session, std::cin, std::cout);
      return 0;
    }
  } catch (const ProjectError& e) {
    std::cerr << "logon: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "logon: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
