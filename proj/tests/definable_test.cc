#include <gtest/gtest.h>

#include <random>
#include <set>

#include "fusionkit/definable.h"
#include "fusionkit/models.h"
#include "fusionkit/parse.h"
#include "test_util.h"

namespace fusionkit {
namespace {

using testing::PureSet;
using testing::Share;
using testing::SignatureFrom;

std::set<TupleSet> Extensions(const std::vector<DefinableSet>& sets) {
  std::set<TupleSet> out;
  for (const auto& d : sets) out.insert(d.extension);
  return out;
}

TEST(EnumerateTest, PureEqualityRankZero) {
  auto host = Share(PureSet(3));
  DefinabilityClass cls{host->signature(), 0, ParameterSpec::None()};
  auto sets = EnumerateDefinable(host, cls, {{"x", "V"}});
  ASSERT_EQ(sets.size(), 2u);
  EXPECT_TRUE(sets[0].Empty() || sets[1].Empty());
  EXPECT_EQ(sets[0].Count() + sets[1].Count(), 3u);
}

TEST(EnumerateTest, AllParametersGiveAllSubsets) {
  auto host = Share(PureSet(2));
  DefinabilityClass cls{host->signature(), 0, ParameterSpec::All()};
  auto sets = EnumerateDefinable(host, cls, {{"x", "V"}});
  EXPECT_EQ(sets.size(), 4u);
  EXPECT_EQ(Extensions(sets).size(), 4u);
}

TEST(EnumerateTest, EmptyStructure) {
  auto host = Share(PureSet(0));
  DefinabilityClass cls{host->signature(), 1, ParameterSpec::All()};
  auto sets = EnumerateDefinable(host, cls, {{"x", "V"}});
  ASSERT_EQ(sets.size(), 1u);
  EXPECT_TRUE(sets[0].Empty());
}

TEST(EnumerateTest, CanonicalOrderAndFormulasMatchExtensions) {
  Signature sig = SignatureFrom("sort V\nrel E : V V\nrel R : V\n");
  std::mt19937 rng(1);
  for (int i = 0; i < 20; ++i) {
    auto host = Share(RandomStructure(sig, {3}, rng));
    DefinabilityClass cls{sig, 1, ParameterSpec::None()};
    auto sets = EnumerateDefinable(host, cls, {{"x", "V"}});
    for (size_t k = 0; k < sets.size(); ++k) {
      EXPECT_EQ(ExtensionOf(*host, sets[k].formula, sets[k].vars, sets[k].params),
                sets[k].extension);
      EXPECT_LE(QuantifierRank(sets[k].formula), 1);
      if (k > 0) {
        auto a = std::make_pair(sets[k - 1].formula.Size(), Print(sets[k - 1].formula));
        auto b = std::make_pair(sets[k].formula.Size(), Print(sets[k].formula));
        EXPECT_LT(a, b);
      }
    }
    EXPECT_EQ(Extensions(sets).size(), sets.size());
  }
}

TEST(EnumerateTest, CompletenessAgainstOracle) {
  Signature sig = SignatureFrom("sort V\nsort W\nrel E : V V\nrel R : V\nrel Q : V W\n");
  std::mt19937 rng(2);
  for (int i = 0; i < 60; ++i) {
    std::vector<int> sizes = {1 + static_cast<int>(rng() % 3), static_cast<int>(rng() % 3)};
    auto host = Share(RandomStructure(sig, sizes, rng));
    for (int rank = 0; rank <= 1; ++rank) {
      for (int p = 0; p < 2; ++p) {
        ParameterSpec params = p ? ParameterSpec::List({{"V", "e0"}}) : ParameterSpec::None();
        DefinabilityClass cls{sig, rank, params};
        for (const auto& vars : std::vector<std::vector<Variable>>{
                 {{"x", "V"}}, {{"x", "W"}}, {{"x", "V"}, {"y", "W"}}}) {
          DefinableAlgebra alg(host, cls, vars);
          Assignment pa;
          for (const auto& e : ResolveParameters(*host, params)) {
            pa[ParameterVariable(*host, e)] = e.index;
          }
          auto oracle = testing::RankOneOracle(*host, sig, vars, pa, rank);
          EXPECT_EQ(Extensions(alg.Sets()), oracle) << "rank " << rank << " params " << p;
        }
      }
    }
  }
}

TEST(EnumerateTest, FunctionSymbols) {
  Signature sig = SignatureFrom("sort V\nfun f : V -> V\nrel R : V\n");
  std::mt19937 rng(3);
  for (int i = 0; i < 40; ++i) {
    auto host = Share(RandomStructure(sig, {3}, rng));
    for (int rank = 0; rank <= 1; ++rank) {
      DefinabilityClass cls{sig, rank, ParameterSpec::None(), 1};
      std::vector<Variable> vars = {{"x", "V"}};
      DefinableAlgebra alg(host, cls, vars);
      EXPECT_EQ(Extensions(alg.Sets()), testing::RankOneOracle(*host, sig, vars, {}, rank, 1));
    }
  }
}

TEST(EnumerateTest, RandomFormulasAreDefinable) {
  Signature sig = SignatureFrom("sort V\nrel E : V V\nrel R : V\n");
  std::mt19937 rng(4);
  testing::FormulaOptions opt;
  opt.quantifiers = true;
  opt.max_rank = 2;
  opt.depth = 5;
  opt.term_depth = 0;
  std::vector<Variable> vars = {{"x", "V"}};
  for (int i = 0; i < 30; ++i) {
    auto host = Share(RandomStructure(sig, {3}, rng));
    DefinableAlgebra alg(host, {sig, 2, ParameterSpec::None()}, vars);
    for (int k = 0; k < 30; ++k) {
      Formula f = testing::RandomFormula(sig, vars, opt, rng);
      if (QuantifierRank(f) > 2) continue;
      EXPECT_TRUE(alg.IsDefinable(ExtensionOf(*host, f, vars))) << Print(f);
    }
  }
}

TEST(EnumerateTest, SizeCapHonored) {
  auto host = Share(PureSet(3));
  DefinabilityClass cls{host->signature(), 0, ParameterSpec::All(), 1, 3};
  for (const auto& d : EnumerateDefinable(host, cls, {{"x", "V"}})) {
    EXPECT_LE(d.formula.Size(), 3);
  }
}

TEST(HullTest, HullAndKernel) {
  Signature sig = SignatureFrom("sort V\nrel E : V V\nrel R : V\n");
  std::mt19937 rng(6);
  for (int i = 0; i < 20; ++i) {
    auto host = Share(RandomStructure(sig, {4}, rng));
    DefinableAlgebra alg(host, {sig, 1, ParameterSpec::None()}, {{"x", "V"}});
    for (const auto& s : testing::AllSubsets(4)) {
      TupleSet h = alg.Hull(s), k = alg.Kernel(s);
      EXPECT_TRUE(s.SubsetOf(h));
      EXPECT_TRUE(k.SubsetOf(s));
      for (const auto& d : alg.Sets()) {
        if (s.SubsetOf(d.extension)) EXPECT_TRUE(h.SubsetOf(d.extension));
        if (d.extension.SubsetOf(s)) EXPECT_TRUE(d.extension.SubsetOf(k));
      }
    }
  }
}

TEST(TabulatedTest, NamesEachTuple) {
  auto host = Share(PureSet(3));
  TupleSet ext(3);
  ext.Insert(0);
  ext.Insert(2);
  DefinableSet d = TabulatedSet(host, {{"x", "V"}}, ext);
  EXPECT_EQ(ExtensionOf(*host, d.formula, d.vars, d.params), ext);
}

TEST(ParameterSpecTest, Parse) {
  Signature one = SignatureFrom("sort V\n");
  EXPECT_EQ(ParameterSpec::Parse("none", one).mode, ParameterSpec::Mode::kNone);
  EXPECT_EQ(ParameterSpec::Parse("all", one).mode, ParameterSpec::Mode::kAll);
  auto list = ParameterSpec::Parse("a, b", one);
  ASSERT_EQ(list.elements.size(), 2u);
  EXPECT_EQ(list.elements[1], (std::pair<std::string, std::string>{"V", "b"}));
  Signature two = SignatureFrom("sort V\nsort W\n");
  EXPECT_THROW(ParameterSpec::Parse("a", two), Error);
  EXPECT_EQ(ParameterSpec::Parse("W:a", two).elements[0].first, "W");
}

TEST(TypeInternerTest, EqualTypesAgreeOnSentences) {
  Signature sig = SignatureFrom("sort V\nrel E : V V\nrel R : V\n");
  std::mt19937 rng(8);
  TypeInterner types(sig, 0);
  std::vector<FiniteStructure> models;
  for (int i = 0; i < 40; ++i) models.push_back(RandomStructure(sig, {1 + static_cast<int>(rng() % 3)}, rng, 0.3));
  for (int k = 0; k < 200; ++k) {
    Formula f = testing::RandomSentence(sig, 4, 2, rng);
    int rank = QuantifierRank(f);
    for (size_t a = 0; a < models.size(); ++a) {
      for (size_t b = a + 1; b < models.size(); ++b) {
        if (types.TheoryOf(models[a], rank) == types.TheoryOf(models[b], rank)) {
          EXPECT_EQ(Evaluate(models[a], f), Evaluate(models[b], f)) << Print(f);
        }
      }
    }
  }
}

TEST(TypeInternerTest, CharacteristicFormulaIsolatesType) {
  Signature sig = SignatureFrom("sort V\nrel E : V V\nrel R : V\n");
  std::mt19937 rng(10);
  TypeInterner types(sig, 0);
  std::vector<Variable> vars = {{"x", "V"}};
  for (int i = 0; i < 20; ++i) {
    FiniteStructure s = RandomStructure(sig, {3}, rng);
    for (int rank = 0; rank <= 2; ++rank) {
      for (int e = 0; e < 3; ++e) {
        int id = types.TypeOf(s, {{0, e}}, rank);
        Formula chi = types.Characteristic(id, vars);
        for (int o = 0; o < 3; ++o) {
          bool same = types.TypeOf(s, {{0, o}}, rank) == id;
          EXPECT_EQ(Evaluate(s, chi, {{vars[0], o}}), same);
        }
      }
    }
  }
}

}  // namespace
}  // namespace fusionkit
