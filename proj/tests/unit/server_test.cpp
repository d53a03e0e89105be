#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "fixtures.hpp"
#include "logon/server.hpp"

using namespace logon;
using logon::testing::readData;

namespace {

class ServerTest : public ::testing::Test {
 protected:
  void SetUp() override {
    std::string tmpl = (fs::temp_directory_path() / "logon-server-XXXXXX").string();
    root_ = mkdtemp(tmpl.data());
    std::ofstream(root_ / "lf.mmt", std::ios::binary) << readData("lf.mmt");
    std::ofstream(root_ / "pl.mmt", std::ios::binary) << pl_;
    session_ = std::make_unique<Session>(root_);
    call("initialize", {{"protocolVersion", kProtocolVersion}});
  }
  void TearDown() override { fs::remove_all(root_); }

  Json call(const std::string& method, Json params) { return session_->call(method, params); }

  std::string errorCode(const std::string& method, Json params) {
    Json r = session_->handle({{"id", 1}, {"method", method}, {"params", std::move(params)}});
    return r.contains("error") ? r["error"]["code"].get<std::string>() : "";
  }

  Json open(const std::string& text) {
    text_ = text;
    return call("didOpen", {{"uri", "pl.mmt"}, {"version", version_}, {"text", text}});
  }
  Json change(const std::string& text) {
    text_ = text;
    return call("didChange", {{"uri", "pl.mmt"}, {"version", ++version_}, {"text", text}});
  }
  /// Offset of the n-th occurrence of `needle` plus `delta`.
  std::size_t at(std::string_view needle, int n = 0, std::size_t delta = 0) const {
    std::size_t pos = text_.find(needle);
    while (n-- > 0) pos = text_.find(needle, pos + 1);
    EXPECT_NE(pos, std::string::npos) << needle;
    return pos + delta;
  }

  static std::string withEquiv(std::string_view body) {
    std::string pl = readData("pl.mmt");
    auto end = pl.rfind("❚");
    return pl.substr(0, end) + "  equiv : prop → prop → prop ❘ = " + std::string(body) + " ❙\n" + pl.substr(end);
  }
  static std::string withExample(std::string_view def) {
    std::string pl = readData("pl.mmt");
    auto at = pl.find("[A] impI [p] andI p p");
    return pl.replace(at, std::string_view("[A] impI [p] andI p p").size(), def);
  }

  fs::path root_;
  std::string pl_ = readData("pl.mmt");
  std::string text_;
  long version_ = 1;
  std::unique_ptr<Session> session_;
};

}  // namespace

TEST(ServerHandshakeTest, InitializeFirst) {
  Session s;
  Json r = s.handle({{"id", 7}, {"method", "stats"}});
  EXPECT_EQ(r["error"]["code"], errc::kNotInitialized);
  EXPECT_EQ(r["id"], 7);
  r = s.handle({{"id", 8}, {"method", "initialize"}, {"params", {{"protocolVersion", 99}}}});
  EXPECT_EQ(r["error"]["code"], errc::kProtocolVersionMismatch);
  r = s.handle({{"id", 9}, {"method", "initialize"}, {"params", {{"protocolVersion", kProtocolVersion}}}});
  EXPECT_EQ(r["result"]["protocolVersion"], kProtocolVersion);
  EXPECT_EQ(s.handle({{"id", 10}, {"method", "nope"}})["error"]["code"], errc::kMethodNotFound);
  EXPECT_EQ(s.handle({{"id", 11}, {"method", "typeAt"}, {"params", {{"uri", 3}}}})["error"]["code"],
            errc::kInvalidParams);
}

TEST_F(ServerTest, ErrorLifecycle) {
  EXPECT_TRUE(open(pl_)["diagnostics"].empty());
  Json r = change(withEquiv("[x,y] (x⟹y) ∧ ded"));
  ASSERT_EQ(r["diagnostics"].size(), 1u);
  auto log = r["diagnostics"][0]["log"].get<std::vector<std::string>>();
  EXPECT_NE(std::find(log.begin(), log.end(), "ded : prop"), log.end());
  EXPECT_EQ(r["version"], version_);

  // identical text: same diagnostics, nothing revalidated
  Json same = change(text_);
  EXPECT_EQ(same["diagnostics"], r["diagnostics"]);
  EXPECT_EQ(call("stats", {{"uri", "pl.mmt"}})["last"]["revalidated"], 0);

  EXPECT_EQ(errorCode("didChange", {{"uri", "pl.mmt"}, {"version", version_}, {"text", pl_}}), errc::kStaleVersion);

  Json fixed = change(withEquiv("[x,y] (x⟹y) ∧ (y⟹x)"));
  EXPECT_TRUE(fixed["diagnostics"].empty());
  EXPECT_EQ(call("stats", {{"uri", "pl.mmt"}})["last"]["revalidatedSlots"], Json::array({"PL?equiv#def"}));
}

TEST_F(ServerTest, TypeAt) {
  open(pl_);
  // the last p in example's definiens
  Json r = call("typeAt", {{"uri", "pl.mmt"}, {"offset", at("andI p p", 0, 7)}});
  EXPECT_EQ(r["type"], "ded A");
  r = call("typeAt", {{"uri", "pl.mmt"}, {"offset", at("and :")}});
  EXPECT_EQ(r["type"], "prop→prop→prop");
  r = call("typeAt", {{"uri", "pl.mmt"}, {"offset", at("andI p p", 0, 4)}});
  EXPECT_TRUE(r["type"].is_null());
  // a compound subterm gets its inferred type
  r = call("typeAt", {{"uri", "pl.mmt"}, {"offset", at("andI p p")}});
  EXPECT_EQ(r["type"], "ded (A∧A)");
}

TEST_F(ServerTest, CompletionsInHole) {
  open(withExample("[A] ⟨ded (A⟹(A∧A))⟩"));
  Json items = call("completionsAt", {{"uri", "pl.mmt"}, {"offset", at("⟨", 0, 3)}})["items"];
  ASSERT_FALSE(items.empty());
  EXPECT_EQ(items[0]["kind"], "hint");
  EXPECT_EQ(items[0]["label"], "impI");
  EXPECT_EQ(items[0]["insertText"], "impI ⟨ded A → ded (A∧A)⟩");
  bool sawScope = false;
  for (const auto& it : items) {
    if (it["kind"] == "scope") sawScope = true;
    if (sawScope) EXPECT_EQ(it["kind"], "scope");
  }
  EXPECT_TRUE(sawScope);
}

TEST_F(ServerTest, ScopeCompletions) {
  open(pl_);
  Json items = call("completionsAt", {{"uri", "pl.mmt"}, {"offset", at("andI p p", 0, 5)}})["items"];
  std::set<std::string> labels;
  for (const auto& it : items) {
    EXPECT_EQ(it["kind"], "scope");
    labels.insert(it["label"].get<std::string>());
  }
  for (auto n : {"prop", "ded", "imp", "and", "andI", "impI", "example", "type", "A", "p"})
    EXPECT_TRUE(labels.count(n)) << n;

  call("didOpen", {{"uri", "empty.mmt"}, {"version", 1}, {"text", ""}});
  EXPECT_TRUE(call("completionsAt", {{"uri", "empty.mmt"}, {"offset", 0}})["items"].empty());
}

TEST_F(ServerTest, Navigation) {
  open(pl_);
  Json r = call("definitionAt", {{"uri", "pl.mmt"}, {"offset", at("andI p p", 0, 1)}});
  EXPECT_EQ(r["name"], "PL?andI");
  EXPECT_EQ(r["location"]["file"], "pl.mmt");
  EXPECT_EQ(r["location"]["start"], at("andI :"));
  // LF lives in a file that is not open
  r = call("definitionAt", {{"uri", "pl.mmt"}, {"offset", at("prop : type", 0, 7)}, {"open", true}});
  EXPECT_EQ(r["location"]["file"], "lf.mmt");
  auto notes = session_->drainNotifications();
  ASSERT_EQ(notes.size(), 1u);
  EXPECT_EQ(notes[0]["method"], "openLocation");
  EXPECT_EQ(errorCode("definitionAt", {{"uri", "pl.mmt"}, {"offset", 0}}), errc::kNotFound);

  r = call("related", {{"uri", "pl.mmt"}, {"offset", at("and :")}, {"relation", "inverse(RefersTo)"}});
  std::set<std::string> names;
  for (const auto& e : r["related"]) names.insert(e["name"].get<std::string>());
  EXPECT_EQ(names, (std::set<std::string>{"PL?andI", "PL?example"}));
  EXPECT_EQ(errorCode("related", {{"uri", "pl.mmt"}, {"offset", at("and :")}, {"relation", "Bogus"}}),
            errc::kUnknownRelation);
}

TEST_F(ServerTest, Search) {
  open(pl_);
  Json r = call("search", {{"query", "$x: x∧x"}});
  ASSERT_EQ(r["hits"].size(), 2u);
  EXPECT_EQ(r["hits"][1]["inferred"], true);
  EXPECT_EQ(r["hits"][0]["substitution"]["x"], "A");
  EXPECT_EQ(call("search", {{"query", "$x: x∧x"}, {"uri", "pl.mmt"}})["hits"].size(), 2u);
  EXPECT_EQ(errorCode("search", {{"query", "$x x"}}), errc::kQueryParseError);
}

TEST_F(ServerTest, AstAndSubterm) {
  open(pl_);
  Json ast = call("astOf", {{"uri", "pl.mmt"}});
  EXPECT_EQ(ast["document"]["theories"][0]["name"], "PL");
  EXPECT_TRUE(ast["slots"].contains("PL?example#def"));
  EXPECT_FALSE(ast["slots"]["PL?example#def"]["elaborated"].is_null());

  // double-click on ∧ in example's type selects A∧A
  std::size_t wedge = at("(A∧A)", 0, 2);
  Json r = call("subtermAt", {{"uri", "pl.mmt"}, {"start", wedge}, {"end", wedge + 1}});
  EXPECT_EQ(r["range"]["start"], wedge - 2);
  EXPECT_EQ(r["slot"], "PL?example#tp");
  EXPECT_EQ(errorCode("subtermAt", {{"uri", "pl.mmt"}, {"start", 0}, {"end", 1}}), errc::kNotFound);
}

TEST_F(ServerTest, NewerChangeCancelsOlder) {
  open(pl_);
  std::string bad = withEquiv("[x,y] (x⟹y) ∧ ded");
  bool nested = false;
  session_->beforeCommit = [&](const std::string&) {
    if (nested) return;
    nested = true;
    Json inner = call("didChange", {{"uri", "pl.mmt"}, {"version", 10}, {"text", bad}});
    EXPECT_EQ(inner["diagnostics"].size(), 1u);
  };
  EXPECT_EQ(errorCode("didChange", {{"uri", "pl.mmt"}, {"version", 5}, {"text", pl_ + "\n"}}), errc::kCancelled);
  session_->beforeCommit = nullptr;
  // the snapshot is the newer edit
  EXPECT_EQ(call("stats", {{"uri", "pl.mmt"}})["version"], 10);
  EXPECT_EQ(call("astOf", {{"uri", "pl.mmt"}})["slots"].count("PL?equiv#def"), 1u);
}

TEST_F(ServerTest, ReplayIsDeterministic) {
  std::vector<Json> log{
      {{"id", 1}, {"method", "initialize"}, {"params", {{"protocolVersion", kProtocolVersion}}}},
      {{"id", 2}, {"method", "didOpen"}, {"params", {{"uri", "pl.mmt"}, {"version", 1}, {"text", pl_}}}},
      {{"id", 3}, {"method", "search"}, {"params", {{"query", "$x,$y,$z: x⟹(y∧z)"}}}},
      {{"id", 4}, {"method", "didChange"}, {"params", {{"uri", "pl.mmt"}, {"version", 2}, {"text", withEquiv("ded")}}}},
      {{"id", 5}, {"method", "astOf"}, {"params", {{"uri", "pl.mmt"}}}},
      {{"id", 6}, {"method", "stats"}, {"params", {{"uri", "pl.mmt"}}}},
  };
  auto run = [&] {
    Session s(root_);
    std::string out;
    for (const auto& r : log) out += s.handle(r).dump() + "\n";
    return out;
  };
  EXPECT_EQ(run(), run());
}

TEST_F(ServerTest, Stdio) {
  std::istringstream in(
      "{\"id\":1,\"method\":\"stats\"}\n"
      "not json\n"
      "\n"
      "{\"id\":2,\"method\":\"didOpen\",\"params\":{\"uri\":\"x.mmt\",\"version\":1,\"text\":\"\"}}\n");
  std::ostringstream out;
  serveStdio(*session_, in, out);
  std::istringstream lines(out.str());
  std::string line;
  std::vector<Json> rs;
  while (std::getline(lines, line)) rs.push_back(Json::parse(line));
  ASSERT_EQ(rs.size(), 3u);
  EXPECT_TRUE(rs[0].contains("result"));
  EXPECT_EQ(rs[1]["error"]["code"], errc::kParseError);
  EXPECT_EQ(rs[2]["result"]["uri"], "x.mmt");
}
