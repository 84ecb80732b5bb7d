#include <gtest/gtest.h>
#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <json.hpp>
#include <string>

#include "fusionkit/models.h"
#include "fusionkit/parse.h"
#include "fusionkit/structure.h"

namespace fusionkit {
namespace {

struct Run {
  int code = -1;
  std::string out;
};

std::string Data(const std::string& name) { return std::string(FUSIONKIT_DATA) + "/" + name; }

Run Invoke(const std::string& args) {
  std::string cmd = std::string(FUSIONKIT_CLI) + " " + args + " 2>&1";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  std::array<char, 4096> buf;
  size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string TempPath(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / "fusionkit_cli_test";
  std::filesystem::create_directories(dir);
  return (dir / name).string();
}

TEST(CliTest, NormalizeEflat) {
  auto r = Invoke("normalize --pass eflat --formula \"R(f(x))\" --sig " + Data("fun.fsig"));
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "exists _w0:V. (f(x)=_w0 & R(_w0))\n");
}

TEST(CliTest, NormalizeOtherPasses) {
  auto dnf = Invoke("normalize --pass dnf --formula \"R(x) & (R(y) | x = y)\" --sig " +
                    Data("fun.fsig"));
  EXPECT_EQ(dnf.code, 0);
  EXPECT_NE(dnf.out.find("|"), std::string::npos);
  auto rel = Invoke("normalize --pass relationalize --formula \"R(f(x))\" --sig " +
                    Data("fun.fsig"));
  EXPECT_EQ(rel.code, 0);
  EXPECT_EQ(rel.out.find("fun "), std::string::npos) << rel.out;
  auto mor = Invoke("normalize --pass morleyize --qrank 0 --sig " + Data("pq.fsig"));
  EXPECT_EQ(mor.code, 0);
  EXPECT_NE(mor.out.find("D_L1_"), std::string::npos);
  EXPECT_NE(mor.out.find("D_L2_"), std::string::npos);
}

TEST(CliTest, InterpolativePqViolation) {
  auto r = Invoke("check interpolative --struct " + Data("pq.fst") + " --family " +
                  Data("pq.fsig") + " --qrank 0 --params none --max-family 2");
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("VIOLATION family=[P(x), Q(x)]"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("intersection=EMPTY separation=NONE"), std::string::npos);
  auto full = Invoke("check interpolative --struct " + Data("pq.fst") + " --family " +
                     Data("pq.fsig") + " --params all");
  EXPECT_EQ(full.code, 0);
  EXPECT_EQ(full.out.rfind("OK\n", 0), 0u) << full.out;
}

TEST(CliTest, JsonReportsParse) {
  auto r = Invoke("--json check interpolative --struct " + Data("pq.fst") + " --family " +
                  Data("pq.fsig"));
  EXPECT_EQ(r.code, 1);
  auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["schema"], 1);
  EXPECT_EQ(j["verdict"], "violation");
  EXPECT_EQ(j["records"].size(), 1u);
  auto late = Invoke("check interpolative --struct " + Data("pq.fst") + " --family " +
                     Data("pq.fsig") + " --json");
  EXPECT_EQ(late.out, r.out);
}

TEST(CliTest, TextReportsAreDeterministic) {
  std::string args = "check approx --struct " + Data("pq.fst") + " --family " + Data("pq.fsig") +
                     " --rank threshold:0 --no-dedup";
  auto first = Invoke(args);
  EXPECT_EQ(first.code, 1);
  for (int i = 0; i < 3; ++i) EXPECT_EQ(Invoke(args).out, first.out);
}

FiniteStructure Load(const std::string& path) { return LoadStructure(path); }

TEST(CliTest, EncodeDecodeRoundTrips) {
  struct Case {
    std::string kind, input, extra;
  };
  for (const auto& c : {Case{"random-graph", "path.fst", ""},
                        Case{"automorphism", "rot.fst", ""},
                        Case{"skolem", "skolem.fst", " --phi \"R(x, y)\""}}) {
    std::string enc = TempPath(c.kind + ".enc.fst"), dec = TempPath(c.kind + ".dec.fst");
    auto e = Invoke("encode " + c.kind + " " + Data(c.input) + " " + enc + c.extra);
    ASSERT_EQ(e.code, 0) << e.out;
    auto d = Invoke("decode " + c.kind + " " + enc + " " + dec);
    ASSERT_EQ(d.code, 0) << d.out;
    auto source = Load(Data(c.input));
    auto back = Load(dec);
    EXPECT_EQ(IsomorphismKey(back), IsomorphismKey(source)) << c.kind;
    EXPECT_EQ(back, source) << c.kind;
  }
}

TEST(CliTest, SkolemViolationIsInputError) {
  auto r = Invoke("encode skolem " + Data("skolem.fst") + " " + TempPath("bad.fst") +
                  " --phi \"~R(x, y)\"");
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.out.find("violates"), std::string::npos);
}

TEST(CliTest, GenericPredicate) {
  auto ok = Invoke("check generic-predicate --struct " + Data("generic.fst") +
                   " --pred P --qrank 0 --nmax 2");
  EXPECT_EQ(ok.code, 0) << ok.out;
  auto bad = Invoke("check generic-predicate --struct " + Data("generic.fst") +
                    " --pred P --qrank 0 --nmax 3");
  EXPECT_EQ(bad.code, 1);
  EXPECT_NE(bad.out.find("NOT_GENERIC n=3"), std::string::npos);
}

TEST(CliTest, DimCompatible) {
  std::string base = "check dim-compatible --struct " + Data("chain.fst") +
                     " --basis \"x:V ; y:V ; Le(x, y)\"";
  auto r = Invoke(base + " --rank threshold:1");
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("kind=frontier"), std::string::npos);
  auto d = Invoke("check dim-compatible --struct " + Data("chain.fst") +
                  " --basis \"x:V ; y:V ; x = y\" --rank threshold:1 --seed 3");
  EXPECT_EQ(d.code, 0) << d.out;
}

TEST(CliTest, JcpAndApprox) {
  auto j = Invoke("check jcp --struct " + Data("pq.fst") + " --family " + Data("pq.fsig") +
                  " --max-base 2");
  EXPECT_EQ(j.code, 0) << j.out;
  auto a = Invoke("check approx --struct " + Data("pq.fst") + " --family " + Data("pq.fsig") +
                  " --rank threshold:0");
  EXPECT_EQ(a.code, 1);
  EXPECT_NE(a.out.find("pseudo_dense=ALL"), std::string::npos);
}

TEST(CliTest, EmitAxioms) {
  auto r = Invoke("emit-axioms --schema " + Data("schema.txt") + " --struct " +
                  Data("generic.fst") + " --rank threshold:1");
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_EQ(r.out.rfind("forall y:V. forall z1:V.", 0), 0u) << r.out;
  EXPECT_NE(r.out.find("# holds: true"), std::string::npos);
  auto sym = Invoke("emit-axioms --schema " + Data("schema_delta.txt") + " --sig " +
                    Data("pq.fsig"));
  EXPECT_EQ(sym.code, 0) << sym.out;
  EXPECT_EQ(sym.out, "forall z1:V. (Q(z1) -> exists x:V. (P(x) | x=z1))\n");
}

TEST(CliTest, Interpolate) {
  auto r = Invoke("interpolate --sig " + Data("inconsistent.fsig") +
                  " --formula \"forall x:V. (P(x) & R(x))\" --formula \"exists x:V. (Q(x) & ~R(x))\"");
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_EQ(r.out.rfind("L1: ", 0), 0u);
  auto consistent = Invoke("interpolate --sig " + Data("inconsistent.fsig") +
                           " --formula \"exists x:V. P(x)\" --formula \"exists x:V. Q(x)\"");
  EXPECT_EQ(consistent.code, 1);
  EXPECT_NE(consistent.out.find("CONSISTENT"), std::string::npos);
}

TEST(CliTest, ParseAndFmt) {
  auto p = Invoke("parse --formula \"forall x:V. exists y:V. f(x) = y\" --sig " +
                  Data("fun.fsig"));
  EXPECT_EQ(p.code, 0);
  EXPECT_NE(p.out.find("qrank: 2"), std::string::npos);
  auto f = Invoke("fmt --struct " + Data("pq.fst"));
  EXPECT_EQ(f.code, 0);
  EXPECT_EQ(f.out, ReadFile(Data("pq.fst")));
  auto s = Invoke("fmt --sig " + Data("pq.fsig"));
  EXPECT_EQ(s.out, ReadFile(Data("pq.fsig")));
}

TEST(CliTest, UsageAndInputErrorsExitTwo) {
  EXPECT_EQ(Invoke("").code, 2);
  EXPECT_EQ(Invoke("bogus").code, 2);
  EXPECT_EQ(Invoke("normalize --pass nope --formula x=x --sig " + Data("pq.fsig")).code, 2);
  auto missing = Invoke("parse --struct " + Data("missing.fst"));
  EXPECT_EQ(missing.code, 2);
  EXPECT_NE(missing.out.find("missing.fst"), std::string::npos);
  auto syntax = Invoke("parse --formula \"P(x\" --sig " + Data("pq.fsig"));
  EXPECT_EQ(syntax.code, 2);
  EXPECT_NE(syntax.out.find("line 1, column"), std::string::npos);
  auto bad_file = Invoke("parse --struct " + Data("malformed.fst"));
  EXPECT_EQ(bad_file.code, 2);
  EXPECT_NE(bad_file.out.find("malformed.fst: line 3"), std::string::npos) << bad_file.out;
  EXPECT_EQ(Invoke("--help").code, 0);
}

}  // namespace
}  // namespace fusionkit
