#include <gtest/gtest.h>

#include <random>

#include "fusionkit/fusion.h"
#include "fusionkit/models.h"
#include "fusionkit/parse.h"
#include "test_util.h"

namespace fusionkit {
namespace {

using testing::PureSet;
using testing::Share;
using testing::SignatureFrom;
using testing::StructureFrom;

DefinabilityClass EqualityClass(ParameterSpec p, int rank = 0) {
  DefinabilityClass c;
  c.signature = SignatureFrom("sort V\n");
  c.params = p;
  c.max_rank = rank;
  return c;
}

TupleSet Set1(size_t n, std::vector<size_t> members) {
  TupleSet t(n);
  for (size_t m : members) t.Insert(m);
  return t;
}

TEST(SeparationTest, Examples) {
  auto host = Share(PureSet(2));
  DefinableAlgebra all(host, EqualityClass(ParameterSpec::All()), {{"x", "V"}});
  auto cert = FindSeparation({Set1(2, {0}), Set1(2, {1})}, all);
  ASSERT_TRUE(cert.has_value());
  EXPECT_EQ(cert->sets[0].extension, Set1(2, {0}));
  EXPECT_EQ(cert->sets[1].extension, Set1(2, {1}));
  EXPECT_FALSE(FindSeparation({Set1(2, {0, 1}), Set1(2, {1})}, all).has_value());
  auto single = FindSeparation({TupleSet(2)}, all);
  ASSERT_TRUE(single.has_value());
  EXPECT_TRUE(single->sets[0].Empty());
  DefinableAlgebra none(host, EqualityClass(ParameterSpec::None()), {{"x", "V"}});
  EXPECT_FALSE(FindSeparation({Set1(2, {0}), Set1(2, {1})}, none).has_value());
  EXPECT_THROW(FindSeparation({Set1(4, {0})}, all), Error);
}

TEST(SeparationTest, DefinableSetOverloadChecksSorts) {
  Signature sig = SignatureFrom("sort V\nsort W\nrel P : V\n");
  auto host = Share(StructureFrom("structure M\nsort V = {a, b}\nsort W = {c}\nrel P : V = {(a)}\n"));
  DefinabilityClass cls;
  cls.signature = sig;
  auto p = MakeDefinable(host, ParseFormula("P(x)", sig, {{"x", "V"}}), {{"x", "V"}});
  auto q = MakeDefinable(host, ParseFormula("~P(x)", sig, {{"x", "V"}}), {{"x", "V"}});
  auto w = MakeDefinable(host, Formula::True(), {{"x", "W"}});
  auto cert = FindSeparation(std::vector<DefinableSet>{p, q}, cls);
  ASSERT_TRUE(cert.has_value());
  EXPECT_TRUE(VerifySeparation({p.extension, q.extension}, *cert));
  EXPECT_THROW(FindSeparation(std::vector<DefinableSet>{p, w}, cls), Error);
}

// Exhaustive search over all families of class-definable sets.
bool BruteSeparable(const std::vector<TupleSet>& xs, const DefinableAlgebra& alg) {
  const auto& sets = alg.Sets();
  std::vector<size_t> pick(xs.size(), 0);
  while (true) {
    bool ok = true;
    TupleSet inter = TupleSet::Full(alg.space().Count());
    for (size_t i = 0; i < xs.size() && ok; ++i) {
      ok = xs[i].SubsetOf(sets[pick[i]].extension);
      inter = inter & sets[pick[i]].extension;
    }
    if (ok && inter.Empty()) return true;
    size_t k = 0;
    while (k < pick.size() && ++pick[k] == sets.size()) pick[k++] = 0;
    if (k == pick.size()) return false;
  }
}

TEST(SeparationTest, AgreesWithExhaustiveSearch) {
  Signature sig = SignatureFrom("sort V\nrel E : V V\nrel R : V\n");
  std::mt19937 rng(21);
  for (int trial = 0; trial < 60; ++trial) {
    auto host = Share(RandomStructure(sig, {static_cast<int>(rng() % 4) + 1}, rng, 0.4));
    DefinabilityClass cls;
    cls.signature = sig.Restrict({"R"});
    cls.max_rank = static_cast<int>(rng() % 2);
    DefinableAlgebra alg(host, cls, {{"x", "V"}});
    size_t n = alg.space().Count();
    for (int k = 0; k < 10; ++k) {
      std::vector<TupleSet> xs;
      for (int i = 0; i < 2 + static_cast<int>(rng() % 2); ++i) {
        TupleSet t(n);
        for (size_t c = 0; c < n; ++c) {
          if (rng() % 3 == 0) t.Insert(c);
        }
        xs.push_back(t);
      }
      auto cert = FindSeparation(xs, alg);
      EXPECT_EQ(cert.has_value(), BruteSeparable(xs, alg));
      if (cert) {
        EXPECT_TRUE(VerifySeparation(xs, *cert));
        TupleSet inter = TupleSet::Full(n);
        for (const auto& x : xs) inter = inter & x;
        EXPECT_TRUE(inter.Empty());
      }
    }
  }
}

struct PqExample {
  FiniteStructure s;
  LanguageFamily fam;
};

PqExample MakePq() {
  Signature sig = SignatureFrom("sort V\nrel P : V\nrel Q : V\n");
  return {StructureFrom("structure M\nsort V = {a, b}\nrel P : V = {(a)}\nrel Q : V = {(b)}\n"),
          LanguageFamily({{"L1", sig.Restrict({"P"})}, {"L2", sig.Restrict({"Q"})}})};
}

TEST(InterpolativeTest, PqViolation) {
  auto pq = MakePq();
  InterpolativeOptions opt;
  auto report = CheckInterpolative(pq.s, pq.fam, opt);
  ASSERT_EQ(report.violations.size(), 1u);
  const auto& v = report.violations[0];
  EXPECT_EQ(v.indices, (std::vector<int>{0, 1}));
  EXPECT_EQ(Print(v.sets[0].formula), "P(x)");
  EXPECT_EQ(Print(v.sets[1].formula), "Q(x)");
  opt.dedup = false;
  EXPECT_EQ(CheckInterpolative(pq.s, pq.fam, opt).violations.size(), 2u);
  opt.max_family = 0;
  EXPECT_TRUE(CheckInterpolative(pq.s, pq.fam, opt).interpolative());
}

TEST(InterpolativeTest, FullParametersAreInterpolative) {
  Signature sig = SignatureFrom("sort V\nrel P : V\nrel Q : V\nrel E : V V\n");
  LanguageFamily fam({{"L1", sig.Restrict({"P", "E"})}, {"L2", sig.Restrict({"Q"})}});
  std::mt19937 rng(22);
  for (int i = 0; i < 20; ++i) {
    auto s = RandomStructure(sig, {static_cast<int>(rng() % 4) + 1}, rng);
    InterpolativeOptions opt;
    opt.common = EqualityClass(ParameterSpec::All());
    opt.per_index = {DefinabilityClass{}, DefinabilityClass{}};
    opt.max_arity = 2;
    EXPECT_TRUE(CheckInterpolative(s, fam, opt).interpolative());
  }
}

TEST(InterpolativeTest, MonotoneInCommonClass) {
  Signature sig = SignatureFrom("sort V\nrel P : V\nrel Q : V\nrel R : V\n");
  LanguageFamily fam({{"L1", sig.Restrict({"P", "R"})}, {"L2", sig.Restrict({"Q", "R"})}});
  std::mt19937 rng(23);
  for (int i = 0; i < 30; ++i) {
    auto s = RandomStructure(sig, {static_cast<int>(rng() % 4) + 1}, rng);
    auto violations = [&](ParameterSpec p, int rank) {
      InterpolativeOptions opt;
      opt.common.params = p;
      opt.common.max_rank = rank;
      opt.per_index = {DefinabilityClass{}, DefinabilityClass{}};
      opt.dedup = false;
      std::set<std::vector<TupleSet>> out;
      for (const auto& v : CheckInterpolative(s, fam, opt).violations) {
        std::vector<TupleSet> key;
        for (const auto& x : v.sets) key.push_back(x.extension);
        out.insert(key);
      }
      return out;
    };
    auto weak = violations(ParameterSpec::None(), 0);
    auto strong = violations(ParameterSpec::None(), 1);
    auto all = violations(ParameterSpec::All(), 1);
    for (const auto& v : strong) EXPECT_TRUE(weak.count(v));
    for (const auto& v : all) EXPECT_TRUE(strong.count(v));
    EXPECT_TRUE(all.empty());
  }
}

TEST(InterpolativeTest, ViolationsCarryEvidence) {
  auto pq = MakePq();
  InterpolativeOptions opt;
  opt.dedup = false;
  for (const auto& v : CheckInterpolative(pq.s, pq.fam, opt).violations) {
    TupleSet inter = TupleSet::Full(2);
    for (const auto& x : v.sets) inter = inter & x.extension;
    EXPECT_TRUE(inter.Empty());
    for (size_t i = 0; i < v.sets.size(); ++i) {
      EXPECT_TRUE(v.sets[i].extension.SubsetOf(v.hulls[i]));
      EXPECT_TRUE(v.hulls[i].Contains(v.common_point[0]));
    }
  }
}

TEST(ExtensionProbeTest, PqIntersectionRealizedAtRankZero) {
  auto pq = MakePq();
  auto report = CheckInterpolative(pq.s, pq.fam, {});
  ASSERT_EQ(report.violations.size(), 1u);
  auto ext = ProbeExtension(pq.s, pq.fam, report.violations[0], 1, 0);
  ASSERT_TRUE(ext.has_value());
  EXPECT_EQ(ext->Size("V"), 3);
  EXPECT_TRUE(ext->Holds("P", {2}));
  EXPECT_TRUE(ext->Holds("Q", {2}));
}

Signature Toy() { return SignatureFrom("sort V\nrel P : V\nrel R1 : V\nrel R2 : V\nrel R3 : V\n"); }

LanguageFamily ToyFamily(int n) {
  Signature sig = Toy();
  std::vector<Language> langs;
  for (int i = 1; i <= n; ++i) {
    langs.push_back({"L" + std::to_string(i), sig.Restrict({"P", "R" + std::to_string(i)})});
  }
  return LanguageFamily(langs);
}

TEST(PairwiseTest, SharedSentenceInterpolatesItself) {
  auto fam = ToyFamily(2);
  Formula phi1 = ParseFormula("exists x:V. P(x)", fam.at(0).signature);
  Formula phi2 = ParseFormula("forall x:V. ~P(x)", fam.at(1).signature);
  auto psi = PairwiseInterpolantBruteforce(phi1, fam.at(0).signature, phi2, fam.at(1).signature,
                                           {});
  ASSERT_TRUE(psi.has_value());
  auto models = ClassModels(fam.intersection(), Formula::True(), {3});
  EXPECT_TRUE(testing::SameOnAll(models, *psi, phi1, {}));
}

TEST(PairwiseTest, CardinalityInterpolant) {
  auto fam = ToyFamily(2);
  Formula phi1 = ParseFormula("(exists x:V. R1(x)) & exists x:V. ~R1(x)", fam.at(0).signature);
  Formula phi2 = ParseFormula("forall x:V. forall y:V. (R2(x) & R2(y)) -> x=y",
                              fam.at(1).signature);
  phi2 = Formula::And(phi2, ParseFormula("forall x:V. R2(x)", fam.at(1).signature));
  auto psi = PairwiseInterpolantBruteforce(phi1, fam.at(0).signature, phi2, fam.at(1).signature,
                                           {});
  ASSERT_TRUE(psi.has_value());
  Formula two = ParseFormula("exists x:V. exists y:V. ~(x=y)", fam.intersection());
  auto models = ClassModels(fam.intersection(), Formula::True(), {3});
  EXPECT_TRUE(testing::SameOnAll(models, *psi, two, {}));
}

TEST(PairwiseTest, ConsistentPairReportsModel) {
  auto fam = ToyFamily(2);
  Formula phi1 = ParseFormula("exists x:V. R1(x)", fam.at(0).signature);
  Formula phi2 = ParseFormula("exists x:V. R2(x)", fam.at(1).signature);
  try {
    PairwiseInterpolantBruteforce(phi1, fam.at(0).signature, phi2, fam.at(1).signature, {});
    FAIL() << "expected an error";
  } catch (const ConsistentPairError& e) {
    EXPECT_TRUE(Evaluate(e.model(), Formula::And(phi1, phi2)));
  }
}

TEST(PairwiseTest, HintikkaFallback) {
  auto fam = ToyFamily(2);
  Formula phi1 = ParseFormula("exists x:V. exists y:V. P(x) & P(y) & ~(x=y)", fam.at(0).signature);
  Formula phi2 = ParseFormula("forall x:V. forall y:V. (P(x) & P(y)) -> x=y", fam.at(1).signature);
  PairwiseOptions opt;
  opt.max_size = 1;
  auto psi = PairwiseInterpolantBruteforce(phi1, fam.at(0).signature, phi2, fam.at(1).signature,
                                           opt);
  ASSERT_TRUE(psi.has_value());
  auto models = ClassModels(fam.intersection(), Formula::True(), {3});
  EXPECT_TRUE(testing::SameOnAll(models, *psi, phi1, {}));
}

TEST(NaryTest, BaseCases) {
  auto fam1 = ToyFamily(1);
  auto oracle = BruteforceOracle({});
  auto one = NaryInterpolants({ParseFormula("exists x:V. R1(x) & ~R1(x)", fam1.at(0).signature)},
                              fam1, oracle);
  ASSERT_EQ(one.formulas.size(), 1u);
  EXPECT_EQ(one.formulas[0].kind(), Formula::Kind::kFalse);
  auto fam2 = ToyFamily(2);
  Formula a = ParseFormula("exists x:V. P(x)", fam2.at(0).signature);
  Formula b = ParseFormula("forall x:V. ~P(x)", fam2.at(1).signature);
  auto two = NaryInterpolants({a, b}, fam2, oracle);
  ASSERT_EQ(two.formulas.size(), 2u);
  EXPECT_EQ(two.formulas[1], Formula::Not(two.formulas[0]));
}

TEST(NaryTest, ThreeSentencesVerified) {
  auto fam = ToyFamily(3);
  std::mt19937 rng(24);
  auto oracle = BruteforceOracle({});
  int found = 0;
  for (int trial = 0; trial < 400 && found < 15; ++trial) {
    std::vector<Formula> phis;
    for (int i = 0; i < 3; ++i) {
      phis.push_back(testing::RandomSentence(fam.at(i).signature, 3, 2, rng));
    }
    bool joint = false;
    Formula all = Formula::Conjunction(phis);
    ForEachStructure(fam.join(), 3, [&](const FiniteStructure& s) {
      joint = Evaluate(s, all);
      return !joint;
    }, 1);
    if (joint) continue;
    ++found;
    auto out = NaryInterpolants(phis, fam, oracle);
    auto check = VerifyInterpolants(phis, out, fam, {3});
    EXPECT_TRUE(check.entailed && check.inconsistent) << check.detail;
  }
  EXPECT_EQ(found, 15);
}

TEST(NaryTest, RejectsWrongShapes) {
  auto fam = ToyFamily(2);
  auto oracle = BruteforceOracle({});
  EXPECT_THROW(NaryInterpolants({Formula::False()}, fam, oracle), Error);
  Formula open = ParseFormula("P(x)", fam.at(0).signature, {{"x", "V"}});
  EXPECT_THROW(NaryInterpolants({open, Formula::False()}, fam, oracle), Error);
  auto never = [](const Formula&, const Signature&, const Formula&, const Signature&) {
    return std::optional<Formula>();
  };
  EXPECT_THROW(NaryInterpolants({Formula::False(), Formula::False()}, fam, never), OracleFailure);
}

TEST(JcpTest, AllCombinationsRealized) {
  Signature sig = SignatureFrom("sort V\nrel P : V\nrel Q : V\n");
  LanguageFamily fam({{"L1", sig.Restrict({"P"})}, {"L2", sig.Restrict({"Q"})}});
  auto full = StructureFrom(
      "structure M\nsort V = {a, b, c, d}\nrel P : V = {(a),(b)}\nrel Q : V = {(a),(c)}\n");
  auto report = CheckJcp(full, fam, 0, 0);
  EXPECT_TRUE(report.holds());
  EXPECT_EQ(report.bases_checked, 1u);
  auto missing = StructureFrom(
      "structure M\nsort V = {a1, a2, b1, b2, c1, c2}\n"
      "rel P : V = {(a1),(a2),(b1),(b2)}\nrel Q : V = {(a1),(a2),(c1),(c2)}\n");
  auto bad = CheckJcp(missing, fam, 0, 0);
  ASSERT_EQ(bad.failures.size(), 1u);
  EXPECT_EQ(bad.failures[0].realizers, (std::vector<int>{4, 2}));
}

TEST(JcpTest, TrivialTypesOverEmptyBase) {
  Signature sig = SignatureFrom("sort V\n");
  LanguageFamily fam({{"L1", sig}, {"L2", sig}});
  EXPECT_TRUE(CheckJcp(PureSet(3), fam, 2, 1).holds());
}

}  // namespace
}  // namespace fusionkit
