#include <gtest/gtest.h>

#include <json.hpp>

#include "fusionkit/fusion.h"
#include "fusionkit/report.h"
#include "test_util.h"

namespace fusionkit {
namespace {

using testing::Share;
using testing::SignatureFrom;
using testing::StructureFrom;

struct Pq {
  FiniteStructure s;
  LanguageFamily fam;
};

Pq MakePq() {
  Signature sig = SignatureFrom("sort V\nrel P : V\nrel Q : V\n");
  return {StructureFrom("structure M\nsort V = {a, b}\nrel P : V = {(a)}\nrel Q : V = {(b)}\n"),
          LanguageFamily({{"L1", sig.Restrict({"P"})}, {"L2", sig.Restrict({"Q"})}})};
}

size_t CountLines(const std::string& text, const std::string& prefix) {
  size_t n = 0, pos = 0;
  while (pos < text.size()) {
    size_t end = text.find('\n', pos);
    if (text.compare(pos, prefix.size(), prefix) == 0) ++n;
    if (end == std::string::npos) break;
    pos = end + 1;
  }
  return n;
}

TEST(RenderTest, EmptyReport) {
  Report r;
  EXPECT_EQ(RenderReport(r, RenderMode::kText), "OK\n");
  EXPECT_EQ(RenderReport(r, RenderMode::kJson), "{\"schema\":1,\"verdict\":\"ok\"}\n");
  r.failed = true;
  EXPECT_EQ(RenderReport(r, RenderMode::kText), "FAIL\n");
}

TEST(RenderTest, PqViolationIsOneLine) {
  auto pq = MakePq();
  auto rep = MakeReport(CheckInterpolative(pq.s, pq.fam, {}));
  std::string text = RenderReport(rep, RenderMode::kText);
  EXPECT_EQ(CountLines(text, "VIOLATION "), 1u);
  EXPECT_NE(text.find("VIOLATION family=[P(x), Q(x)]"), std::string::npos) << text;
  EXPECT_NE(text.find("params={} intersection=EMPTY separation=NONE"), std::string::npos);
  EXPECT_EQ(CountLines(text, "OK"), 0u);

  auto j = nlohmann::json::parse(RenderReport(rep, RenderMode::kJson));
  EXPECT_EQ(j["schema"], 1);
  EXPECT_EQ(j["verdict"], "violation");
  ASSERT_EQ(j["records"].size(), 1u);
  EXPECT_EQ(j["records"][0]["family"], (std::vector<std::string>{"P(x)", "Q(x)"}));
  EXPECT_EQ(j["records"][0]["separation"], "NONE");
}

TEST(RenderTest, DeterministicAcrossRuns) {
  auto pq = MakePq();
  InterpolativeOptions opt;
  opt.dedup = false;
  opt.max_arity = 2;
  std::string first;
  for (int i = 0; i < 3; ++i) {
    for (auto mode : {RenderMode::kText, RenderMode::kJson}) {
      std::string out = RenderReport(MakeReport(CheckInterpolative(pq.s, pq.fam, opt)), mode);
      if (i == 0 && mode == RenderMode::kText) first = out;
      if (mode == RenderMode::kText) EXPECT_EQ(out, first);
    }
  }
}

TEST(RenderTest, NotesAndStats) {
  Report r;
  r.notes.push_back("approximate");
  r.stats.push_back({"sets_checked", "4"});
  EXPECT_EQ(RenderReport(r, RenderMode::kText), "OK\nNOTE approximate\nSTATS sets_checked=4\n");
  auto j = nlohmann::json::parse(RenderReport(r, RenderMode::kJson));
  EXPECT_EQ(j["stats"]["sets_checked"], "4");
  EXPECT_EQ(j["notes"][0], "approximate");
}

TEST(RenderTest, TupleSets) {
  auto s = StructureFrom("structure M\nsort V = {a, b, c}\n");
  TupleSet t(9);
  t.Insert(1);
  t.Insert(5);
  EXPECT_EQ(PrintTupleSet(s, {"V", "V"}, t), "{(a,b), (b,c)}");
  EXPECT_EQ(PrintTupleSet(s, {"V"}, TupleSet(3)), "{}");
}

TEST(RenderTest, GenericPredicateFailureLines) {
  auto m = StructureFrom("structure M\nsort V = {a, b, c}\nrel P : V = {(a)}\n");
  DefinabilityClass cls;
  cls.signature = SignatureFrom("sort V\n");
  auto rep = MakeReport(GenericPredicateCheck(m, "P", cls, 2), "P");
  std::string text = RenderReport(rep, RenderMode::kText);
  EXPECT_FALSE(rep.ok());
  EXPECT_GT(CountLines(text, "NOT_GENERIC n=2"), 0u) << text;
  EXPECT_EQ(CountLines(text, "NOT_GENERIC n=1"), 0u) << text;
  EXPECT_NE(text.find("missing=[P, P]"), std::string::npos) << text;
}

}  // namespace
}  // namespace fusionkit
