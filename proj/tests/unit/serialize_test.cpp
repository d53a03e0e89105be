#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "logon/checker.hpp"
#include "logon/serialize.hpp"

using namespace logon;
using logon::testing::readData;

namespace {

ProjectCheck fixtures() {
  std::vector<Document> docs{parseDocument(readData("lf.mmt"), "lf.mmt"), parseDocument(readData("pl.mmt"), "pl.mmt")};
  return checkDocuments(std::move(docs));
}

}  // namespace

TEST(SerializeTest, TermRoundTripKeepsRefsAndFlags) {
  auto pc = fixtures();
  for (const auto& [id, p] : pc.parsed) {
    Json j = toJson(p.term);
    TermPtr back = termFromJson(j);
    EXPECT_TRUE(equalsStructural(back, p.term)) << id.str();
    EXPECT_EQ(toJson(back).dump(), j.dump());
  }
}

TEST(SerializeTest, SolveResultRoundTrip) {
  auto pc = fixtures();
  for (const auto& [id, r] : pc.store.results()) {
    Json j = toJson(r);
    EXPECT_EQ(toJson(solveResultFromJson(j)).dump(), j.dump()) << id.str();
  }
}

TEST(SerializeTest, WithoutRefsIgnoresPositions) {
  auto a = Term::constant("PL?prop", SourceRef{"f", 1, 5});
  auto b = Term::constant("PL?prop", SourceRef{"f", 7, 11});
  EXPECT_NE(jsonHash(toJson(a)), jsonHash(toJson(b)));
  EXPECT_EQ(jsonHash(toJson(a, false)), jsonHash(toJson(b, false)));
}

TEST(SerializeTest, Sha256KnownAnswer) {
  EXPECT_EQ(sha256Hex(""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  EXPECT_EQ(sha256Hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(SerializeTest, DiagnosticRoundTrip) {
  Diagnostic d{{"pl.mmt", 3, 9}, Severity::Warning, "msg", {"a", "b"}};
  EXPECT_EQ(diagnosticFromJson(toJson(d)), d);
}
