// Drives a session through every endpoint and prints one JSON line per
// exchange: {"method", "params", "result"} or {"method", "params", "error"}.
// Notifications are printed as they are drained.
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "logon/server.hpp"

using namespace logon;

namespace {

std::string readFile(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: protocol_transcript <project-dir>\n";
    return 2;
  }
  fs::path root = argv[1];
  // keep the fixture directory free of cache files
  std::string tmpl = (fs::temp_directory_path() / "logon-proto-XXXXXX").string();
  fs::path cache = mkdtemp(tmpl.data());
  setenv("LOGON_CACHE", cache.c_str(), 1);

  Session session(root);
  long id = 0;
  auto send = [&](const std::string& method, const Json& params) {
    Json resp = session.handle({{"id", ++id}, {"method", method}, {"params", params}});
    Json rec{{"method", method}, {"params", params}};
    if (resp.contains("result"))
      rec["result"] = resp["result"];
    else
      rec["error"] = resp["error"];
    std::cout << rec.dump() << "\n";
    for (const auto& n : session.drainNotifications()) std::cout << n.dump() << "\n";
    return resp;
  };

  std::string pl = readFile(root / "pl.mmt");
  auto at = [&](const std::string& needle, std::size_t delta = 0) { return pl.find(needle) + delta; };

  send("stats", Json::object());
  send("initialize", {{"protocolVersion", kProtocolVersion + 1}});
  send("initialize", {{"protocolVersion", kProtocolVersion}});
  send("didOpen", {{"uri", "pl.mmt"}, {"version", 1}, {"text", pl}});
  send("typeAt", {{"uri", "pl.mmt"}, {"offset", at("andI p p", 5)}});
  send("typeAt", {{"uri", "pl.mmt"}, {"offset", at("andI p p", 4)}});
  send("completionsAt", {{"uri", "pl.mmt"}, {"offset", at("andI p p", 5)}});
  send("definitionAt", {{"uri", "pl.mmt"}, {"offset", at("andI p p")}, {"open", true}});
  send("definitionAt", {{"uri", "pl.mmt"}, {"offset", 0}});
  send("related", {{"uri", "pl.mmt"}, {"offset", at("  and ", 2)}, {"relation", "inverse(RefersTo)"}});
  send("related", {{"uri", "pl.mmt"}, {"offset", at("  and ", 2)}, {"relation", "Bogus"}});
  send("search", {{"query", "$x: x∧x"}});
  send("search", {{"query", "$x,$y,$z: x⟹(y∧z)"}, {"uri", "pl.mmt"}});
  send("search", {{"query", "$x: ∧∧"}});
  send("astOf", {{"uri", "pl.mmt"}});
  send("subtermAt", {{"uri", "pl.mmt"}, {"start", at("(A∧A)", 2)}, {"end", at("(A∧A)", 3)}});
  std::string hole = pl;
  hole.replace(pl.find("[A] impI [p] andI p p"), std::string("[A] impI [p] andI p p").size(), "[A] ⟨ded (A⟹(A∧A))⟩");
  send("didChange", {{"uri", "pl.mmt"}, {"version", 2}, {"text", hole}});
  send("completionsAt", {{"uri", "pl.mmt"}, {"offset", hole.find("⟨") + 3}});
  send("didChange", {{"uri", "pl.mmt"}, {"version", 2}, {"text", pl}});
  send("didChange", {{"uri", "pl.mmt"}, {"version", 3}, {"text", pl}});
  send("stats", {{"uri", "pl.mmt"}});
  send("frobnicate", Json::object());
  send("didClose", {{"uri", "pl.mmt"}});
  send("typeAt", {{"uri", "pl.mmt"}, {"offset", 0}});
  fs::remove_all(cache);
  return 0;
}
