#include <gtest/gtest.h>

#include <random>

#include "fusionkit/fusion.h"
#include "fusionkit/models.h"
#include "fusionkit/parse.h"
#include "fusionkit/pseudotopology.h"
#include "test_util.h"

namespace fusionkit {
namespace {

using testing::AllSubsets;
using testing::PureSet;
using testing::Share;
using testing::SignatureFrom;
using testing::StructureFrom;
using testing::UnarySignature;

DefinabilityClass ClassOver(const Signature& sig, ParameterSpec p, int rank = 0) {
  DefinabilityClass c;
  c.signature = sig;
  c.params = p;
  c.max_rank = rank;
  return c;
}

std::vector<Variable> Vars(int n) { return DefaultVariables(std::vector<std::string>(n, "V")); }

TupleSet SetOf(size_t n, std::vector<size_t> members) {
  TupleSet t(n);
  for (size_t m : members) t.Insert(m);
  return t;
}

// Hosts with one unary predicate, every member pattern up to isomorphism.
std::vector<StructurePtr> SmallHosts(int max_n) {
  std::vector<StructurePtr> out;
  for (int n = 1; n <= max_n; ++n) {
    for (int k = 0; k <= n; ++k) {
      std::vector<int> members;
      for (int i = 0; i < k; ++i) members.push_back(i);
      out.push_back(Share(PureSet(n, {"P"}, {members})));
    }
  }
  return out;
}

struct Setting {
  DefinabilityClass cls;
  RankFunction rank;
};

std::vector<Setting> Settings() {
  Signature unary = UnarySignature({"P"});
  Signature pure = UnarySignature({});
  std::vector<Setting> out;
  for (auto p : {ParameterSpec::None(), ParameterSpec::List({{"V", "a"}}), ParameterSpec::All()}) {
    out.push_back({ClassOver(unary, p), RankFunction::Threshold(1)});
    out.push_back({ClassOver(pure, p), RankFunction::Growth()});
  }
  return out;
}

TEST(PseudoDenseTest, FastPathMatchesSubsetScan) {
  for (const auto& host : SmallHosts(4)) {
    for (const auto& st : Settings()) {
      for (int arity : {1, 2}) {
        if (arity == 2 && host->Size(0) > 3) continue;
        RankedAlgebra ra(host, st.cls, Vars(arity), st.rank);
        if (ra.algebra().NumBlocks() > 8) continue;
        std::mt19937 rng(static_cast<unsigned>(ra.universe()));
        for (const auto& x : ra.Sets()) {
          for (int trial = 0; trial < 8; ++trial) {
            TupleSet a(ra.universe());
            for (size_t c = 0; c < ra.universe(); ++c) {
              if (rng() % 2) a.Insert(c);
            }
            auto fast = PseudoDense(a, x.extension, ra);
            auto scan = PseudoDenseBySubsetScan(a, x.extension, ra);
            ASSERT_EQ(fast.dense, scan.dense);
            if (!fast.dense) {
              EXPECT_TRUE(fast.witness->SubsetOf(x.extension));
              EXPECT_FALSE(fast.witness->Intersects(a));
              EXPECT_EQ(ra.Dim(*fast.witness), ra.Dim(x.extension));
            }
          }
        }
      }
    }
  }
}

TEST(PseudoDenseTest, RankZeroMeansInclusion) {
  auto host = Share(PureSet(3));
  RankedAlgebra ra(host, ClassOver(UnarySignature({}), ParameterSpec::All()), Vars(1),
                   RankFunction::Threshold(1));
  for (const auto& a : AllSubsets(3)) {
    for (const auto& x : ra.Sets()) {
      EXPECT_EQ(PseudoDense(a, x.extension, ra).dense, x.extension.SubsetOf(a));
    }
  }
}

TEST(PseudoDenseTest, SetIsDenseInItselfAndWitnessIsReported) {
  auto host = Share(PureSet(4, {"P"}, {{0, 1}}));
  RankedAlgebra ra(host, ClassOver(UnarySignature({"P"}), ParameterSpec::None()), Vars(1),
                   RankFunction::Threshold(1));
  for (const auto& x : ra.Sets()) EXPECT_TRUE(PseudoDense(x.extension, x.extension, ra).dense);
  auto res = PseudoDense(SetOf(4, {0}), TupleSet::Full(4), ra);
  ASSERT_FALSE(res.dense);
  EXPECT_EQ(*res.witness, SetOf(4, {2, 3}));
}

TEST(BasicFactsTest, ExhaustiveOnSmallHosts) {
  testing::BasicFactsTally tally;
  for (const auto& host : SmallHosts(4)) {
    for (const auto& st : Settings()) {
      RankedAlgebra ra(host, st.cls, Vars(1), st.rank);
      testing::CheckBasicFacts(ra, AllSubsets(ra.universe()), tally);
    }
  }
  for (int item = 1; item <= 6; ++item) EXPECT_GT(tally.instances[item], 0u) << item;
  EXPECT_EQ(tally.total_failures(), 0u) << (tally.examples.empty() ? "" : tally.examples[0]);
}

TEST(PseudoClosureTest, ModesAndUniqueness) {
  for (const auto& host : SmallHosts(4)) {
    for (const auto& st : Settings()) {
      RankedAlgebra ra(host, st.cls, Vars(1), st.rank);
      for (const auto& a : AllSubsets(ra.universe())) {
        auto any = PseudoClosure(a, ra, ClosureSearch::kAny);
        auto lex = PseudoClosure(a, ra, ClosureSearch::kLexMinimal);
        ASSERT_TRUE(any.has_value());
        ASSERT_TRUE(lex.has_value());
        EXPECT_TRUE(PseudoDense(a, lex->extension, ra).dense);
        auto all = AllPseudoClosures(a, ra);
        for (const auto& x : all) {
          for (const auto& y : all) {
            TupleSet sym = (x - y) | (y - x);
            EXPECT_TRUE(sym.Empty() || ra.Dim(sym) < ra.Dim(x));
          }
        }
        if (ra.algebra().IsDefinable(a)) {
          EXPECT_NE(std::find(all.begin(), all.end(), a), all.end());
        }
      }
    }
  }
}

TEST(ApproximableTest, SameClassIsApproximable) {
  auto host = Share(PureSet(4, {"P"}, {{0, 2}}));
  auto cls = ClassOver(UnarySignature({"P"}), ParameterSpec::None());
  auto rep = CheckApproximable(host, cls, cls, RankFunction::Threshold(1));
  EXPECT_TRUE(rep.approximable());
  EXPECT_EQ(rep.sets_checked, 4u);
}

TEST(ApproximableTest, SizeCappedBaseMissesClosure) {
  auto host = Share(PureSet(4, {"P"}, {{0, 1}}));
  auto exp = ClassOver(UnarySignature({"P"}), ParameterSpec::None());
  auto base = ClassOver(UnarySignature({}), ParameterSpec::All());
  base.max_formula_size = 1;
  auto rep = CheckApproximable(host, exp, base, RankFunction::Threshold(1));
  ASSERT_EQ(rep.failures.size(), 2u);
  EXPECT_EQ(Print(rep.failures[0].set.formula), "P(x)");
}

TEST(ApproximableTest, GrowthOnPureSetWithPredicate) {
  std::mt19937 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    int n = 2 + static_cast<int>(rng() % 4);
    std::vector<int> members;
    for (int i = 0; i < n; ++i) {
      if (rng() % 2) members.push_back(i);
    }
    auto host = Share(PureSet(n, {"P"}, {members}));
    auto rep = CheckApproximable(host, ClassOver(UnarySignature({"P"}), ParameterSpec::None()),
                                 ClassOver(UnarySignature({}), ParameterSpec::None()),
                                 RankFunction::Growth(), 2);
    EXPECT_TRUE(rep.approximable());
  }
}

TEST(ApproxInterpolativeTest, PqFamilyFlagged) {
  Signature sig = SignatureFrom("sort V\nrel P : V\nrel Q : V\n");
  auto s = StructureFrom("structure M\nsort V = {a, b}\nrel P : V = {(a)}\nrel Q : V = {(b)}\n");
  LanguageFamily fam({{"L1", sig.Restrict({"P"})}, {"L2", sig.Restrict({"Q"})}});
  auto rep = CheckApproxInterpolative(s, fam, RankFunction::Threshold(1), {});
  ASSERT_EQ(rep.violations.size(), 1u);
  EXPECT_EQ(rep.violations[0].indices, (std::vector<int>{0, 1}));
  EXPECT_EQ(Print(rep.violations[0].sets[0].formula), "P(x)");
  EXPECT_EQ(Print(rep.violations[0].sets[1].formula), "Q(x)");
}

TEST(ApproxInterpolativeTest, InterpolativeImpliesApproximatelyInterpolative) {
  Signature sig = SignatureFrom("sort V\nrel P : V\nrel Q : V\n");
  LanguageFamily fam({{"L1", sig.Restrict({"P"})}, {"L2", sig.Restrict({"Q"})}});
  int interpolative = 0;
  ForEachStructure(sig, 3, [&](const FiniteStructure& m) {
    InterpolativeOptions opt;
    opt.dedup = false;
    bool interp = CheckInterpolative(m, fam, opt).interpolative();
    for (auto r : {RankFunction::Threshold(1), RankFunction::Growth()}) {
      bool approx = CheckApproxInterpolative(m, fam, r, opt).approximately_interpolative();
      if (interp) EXPECT_TRUE(approx);
    }
    interpolative += interp;
    return true;
  }, 1);
  EXPECT_GT(interpolative, 0);
}

TEST(ApproxInterpolativeTest, EmptyStructurePasses) {
  Signature sig = SignatureFrom("sort V\nrel P : V\nrel Q : V\n");
  LanguageFamily fam({{"L1", sig.Restrict({"P"})}, {"L2", sig.Restrict({"Q"})}});
  FiniteStructure empty("M", sig);
  empty.SetUniverse("V", {});
  EXPECT_TRUE(CheckApproxInterpolative(empty, fam, RankFunction::Threshold(1), {})
                  .approximately_interpolative());
}

TEST(EmitAxiomTest, Shapes) {
  Signature sig = SignatureFrom("sort V\nrel P : V\nrel Q : V\n");
  Variable x{"x", "V"}, y{"y", "V"}, z1{"z1", "V"}, z2{"z2", "V"};
  AxiomSchemaInstance one;
  one.phi_common = Formula::True();
  one.x = {x};
  one.phis = {ParseFormula("P(x) | x = z1", sig, {x, z1})};
  one.zs = {{z1}};
  one.deltas = {Formula::True()};
  EXPECT_EQ(Print(EmitPtAxiom(one)), "forall z1:V. exists x:V. (P(x) | x=z1)");

  AxiomSchemaInstance two;
  two.phi_common = ParseFormula("~(x = y)", sig, {x, y});
  two.x = {x};
  two.y = {y};
  two.phis = {ParseFormula("P(x)", sig, {x}), ParseFormula("Q(x) & ~(x = z2)", sig, {x, z2})};
  two.zs = {{z1}, {z2}};
  two.deltas = {ParseFormula("y = z1", sig, {y, z1}), ParseFormula("~(y = z2)", sig, {y, z2})};
  two.gamma = ParseFormula("y = y", sig, {y});
  EXPECT_EQ(Print(EmitPtAxiom(two)),
            "forall y:V. forall z1:V. forall z2:V. (y=y & y=z1 & ~(y=z2) -> exists x:V. "
            "(P(x) & (Q(x) & ~(x=z2))))");

  AxiomSchemaInstance bad = two;
  bad.phis[0] = ParseFormula("P(z2)", sig, {z2});
  EXPECT_THROW(EmitPtAxiom(bad), Error);
  bad = two;
  bad.gamma = ParseFormula("y = z1", sig, {y, z1});
  EXPECT_THROW(EmitPtAxiom(bad), Error);
  bad = two;
  bad.zs = {{z1}, {y}};
  EXPECT_THROW(EmitPtAxiom(bad), Error);
}

TEST(EmitAxiomTest, TabulatedDeltasMatchChecker) {
  Signature sig = SignatureFrom("sort V\nrel P : V\nrel Q : V\n");
  Variable x{"x", "V"}, y{"y", "V"}, z1{"z1", "V"}, z2{"z2", "V"};
  Formula common = ParseFormula("~(x = y)", sig, {x, y});
  std::vector<Formula> phis = {ParseFormula("P(x) | x = z1", sig, {x, z1}),
                               ParseFormula("Q(x) & ~(x = z2)", sig, {x, z2})};
  int total = 0, agree = 0, passing = 0;
  ForEachStructure(sig, 3, [&](const FiniteStructure& m) {
    auto host = Share(m);
    ++total;
    auto r = RankFunction::Weighted([](const std::vector<int>& t) { return t[0] % 2; });
    RankedAlgebra ra(host, ClassOver(UnarySignature({}), ParameterSpec::All()), {x}, r);
    auto res = testing::RunCoherence(host, common, {x}, {y}, phis, {{z1}, {z2}}, ra);
    EXPECT_EQ(res.axiom_true, res.checker_passes) << Print(res.axiom);
    agree += res.axiom_true == res.checker_passes;
    passing += res.checker_passes;
    return true;
  }, 1);
  EXPECT_EQ(agree, total);
  EXPECT_GT(passing, 0);
}

// Parameter-free class: a singleton is pseudo-dense only when one atom has
// top rank, so the axiom fails exactly on such hosts.
TEST(EmitAxiomTest, TabulatedDeltasWithCoarseAtoms) {
  Signature sig = SignatureFrom("sort V\nrel P : V\nrel Q : V\n");
  Variable x{"x", "V"}, z1{"z1", "V"}, z2{"z2", "V"};
  std::vector<Formula> phis = {ParseFormula("~(x = z1)", sig, {x, z1}),
                               ParseFormula("x = z2", sig, {x, z2})};
  int total = 0, agree = 0, passing = 0;
  ForEachStructure(sig, 3, [&](const FiniteStructure& m) {
    auto host = Share(m);
    RankedAlgebra ra(host, ClassOver(sig, ParameterSpec::None()), {x}, RankFunction::Threshold(1));
    auto res = testing::RunCoherence(host, Formula::True(), {x}, {}, phis, {{z1}, {z2}}, ra);
    EXPECT_EQ(res.axiom_true, res.checker_passes) << Print(res.axiom);
    ++total;
    agree += res.axiom_true == res.checker_passes;
    passing += res.checker_passes;
    return true;
  }, 1);
  EXPECT_EQ(agree, total);
  EXPECT_GT(passing, 0);
  EXPECT_LT(passing, total);
}

TEST(EmitAxiomTest, LibraryTabulationMatchesHarness) {
  Signature sig = SignatureFrom("sort V\nrel P : V\nrel Q : V\n");
  Variable x{"x", "V"}, y{"y", "V"}, z1{"z1", "V"};
  Formula common = ParseFormula("~(x = y)", sig, {x, y});
  Formula phi = ParseFormula("P(x) | x = z1", sig, {x, z1});
  ForEachStructure(sig, 3, [&](const FiniteStructure& m) {
    auto host = Share(m);
    RankedAlgebra ra(host, ClassOver(sig, ParameterSpec::All()), {x}, RankFunction::Threshold(1));
    auto res = testing::RunCoherence(host, common, {x}, {y}, {phi}, {{z1}}, ra);
    AxiomSchemaInstance inst{common, {x}, {y}, {phi}, {{z1}}, {}, std::nullopt};
    Assignment params = TabulateDeltas(host, inst, ra);
    Formula axiom = EmitPtAxiom(inst);
    EXPECT_EQ(Print(axiom), Print(res.axiom));
    EXPECT_EQ(Evaluate(m, axiom, params), res.axiom_true);
    return !::testing::Test::HasFailure();
  }, 1);
}

TEST(AlmostRelationsTest, Examples) {
  auto host = Share(PureSet(4, {"P"}, {{0, 1}}));
  RankedAlgebra ra(host, ClassOver(UnarySignature({"P"}), ParameterSpec::None()), Vars(1),
                   RankFunction::Threshold(1));
  TupleSet p = SetOf(4, {0, 1}), notp = SetOf(4, {2, 3}), all = TupleSet::Full(4);
  EXPECT_TRUE(AlmostRelations(p, all, ra).almost_subset);
  EXPECT_FALSE(AlmostRelations(all, p, ra).almost_subset);
  EXPECT_TRUE(AlmostRelations(p, p, ra).almost_equal);
  auto r = AlmostRelations(p, notp, ra);
  EXPECT_FALSE(r.almost_subset);
  EXPECT_FALSE(r.almost_equal);
  EXPECT_TRUE(AlmostRelations(TupleSet(4), p, ra).almost_subset);

  auto small = Share(PureSet(3, {"P"}, {{0}}));
  RankedAlgebra rb(small, ClassOver(UnarySignature({"P"}), ParameterSpec::None()), Vars(1),
                   RankFunction::Threshold(1));
  EXPECT_TRUE(AlmostRelations(TupleSet::Full(3), SetOf(3, {1, 2}), rb).almost_equal);
}

TEST(IrreducibleTest, ExamplesAndFastPathMatchesCovers) {
  auto host = Share(PureSet(4, {"P"}, {{0, 1}}));
  RankedAlgebra ra(host, ClassOver(UnarySignature({"P"}), ParameterSpec::All()), Vars(1),
                   RankFunction::Threshold(1));
  EXPECT_TRUE(IsAlmostIrreducible(SetOf(4, {2}), ra));
  EXPECT_TRUE(IsAlmostIrreducible(TupleSet(4), ra));
  RankedAlgebra rn(host, ClassOver(UnarySignature({"P"}), ParameterSpec::None()), Vars(1),
                   RankFunction::Threshold(1));
  EXPECT_FALSE(IsAlmostIrreducible(TupleSet::Full(4), rn));
  EXPECT_TRUE(IsAlmostIrreducible(SetOf(4, {0, 1}), rn));
  for (const auto& h : SmallHosts(4)) {
    for (const auto& st : Settings()) {
      RankedAlgebra rs(h, st.cls, Vars(1), st.rank);
      for (const auto& s : rs.Sets()) {
        EXPECT_EQ(IsAlmostIrreducible(s.extension, rs),
                  IsAlmostIrreducibleByCovers(s.extension, rs));
      }
    }
  }
}

TEST(InductiveTest, AgreesWithDirectCheck) {
  size_t checked = 0;
  for (const auto& host : SmallHosts(4)) {
    for (const auto& st : Settings()) {
      RankedAlgebra ra(host, st.cls, Vars(1), st.rank);
      auto d = RepresentativeSystem(ra);
      for (const auto& x : ra.Sets()) {
        if (!IsAlmostIrreducible(x.extension, ra)) continue;
        for (const auto& a : AllSubsets(ra.universe())) {
          auto res = PseudoDenseInductive(a, x.extension, d, ra);
          ASSERT_EQ(res.dense, PseudoDense(a, x.extension, ra).dense);
          ++checked;
        }
      }
    }
  }
  EXPECT_GT(checked, 1000u);
}

TEST(InductiveTest, PreconditionsAreChecked) {
  auto host = Share(PureSet(4, {"P"}, {{0, 1}}));
  RankedAlgebra ra(host, ClassOver(UnarySignature({"P"}), ParameterSpec::None()), Vars(1),
                   RankFunction::Threshold(1));
  auto d = RepresentativeSystem(ra);
  EXPECT_THROW(PseudoDenseInductive(SetOf(4, {0}), TupleSet::Full(4), d, ra), Error);
  EXPECT_THROW(PseudoDenseInductive(SetOf(4, {0}), SetOf(4, {0, 1}), {}, ra), Error);
}

// Stripping keeps the verdict; the threshold trigger overshoots when two
// rank-0 pieces meet A but the rank-1 piece does not.
TEST(InductiveTest, StrippingAndThresholdTrigger) {
  auto host = Share(PureSet(4));
  RankedAlgebra ra(host, ClassOver(UnarySignature({}), ParameterSpec::List({{"V", "a"}, {"V", "b"}})),
                   Vars(1), RankFunction::Threshold(1));
  auto d = RepresentativeSystem(ra);
  TupleSet x = TupleSet::Full(4);
  ASSERT_TRUE(IsAlmostIrreducible(x, ra));
  TupleSet a = SetOf(4, {0, 1});
  auto exact = PseudoDenseInductive(a, x, d, ra);
  EXPECT_FALSE(exact.dense);
  ASSERT_EQ(exact.steps.size(), 1u);
  EXPECT_EQ(exact.steps[0].representatives, 2u);
  EXPECT_TRUE(exact.residual.Empty());
  InductiveOptions opt;
  opt.trigger = InfinityTrigger::kThreshold;
  EXPECT_TRUE(PseudoDenseInductive(a, x, d, ra, opt).dense);
  TupleSet b = SetOf(4, {0, 2});
  auto kept = PseudoDenseInductive(b, x, d, ra);
  EXPECT_TRUE(kept.dense);
  EXPECT_EQ(kept.residual, SetOf(4, {2}));
}

TEST(PseudoCellTest, Decomposition) {
  auto host = Share(PureSet(4, {"P"}, {{0, 1}}));
  RankedAlgebra ra(host, ClassOver(UnarySignature({"P"}), ParameterSpec::None()), Vars(1),
                   RankFunction::Threshold(1));
  TupleSet p = SetOf(4, {0, 1}), notp = SetOf(4, {2, 3});
  auto own = DecomposePseudoCells(p, {notp, p}, ra);
  ASSERT_TRUE(own.has_value());
  EXPECT_EQ(own->cells, (std::vector<size_t>{1}));
  auto pair = DecomposePseudoCells(TupleSet::Full(4), {p, notp}, ra);
  ASSERT_TRUE(pair.has_value());
  EXPECT_EQ(pair->cells, (std::vector<size_t>{0, 1}));
  EXPECT_FALSE(DecomposePseudoCells(TupleSet::Full(4), {p}, ra).has_value());
}

TEST(PseudoCellTest, PatchingFindsDefinableBijection) {
  auto host = Share(PureSet(4, {"P"}, {{0, 1}}));
  RankedAlgebra ra(host, ClassOver(UnarySignature({"P"}), ParameterSpec::All()), Vars(1),
                   RankFunction::Threshold(1));
  TupleSet p = SetOf(4, {0, 1}), notp = SetOf(4, {2, 3});
  auto cover = DecomposePseudoCells(notp, {p}, ra, CellMode::kPatching);
  ASSERT_TRUE(cover.has_value());
  ASSERT_EQ(cover->bijections.size(), 1u);
  std::set<size_t> from, to;
  for (const auto& [f, t] : cover->bijections[0]) {
    from.insert(f);
    to.insert(t);
  }
  EXPECT_TRUE(to.size() == from.size());
  for (size_t t : to) EXPECT_TRUE(p.Contains(t));
}

}  // namespace
}  // namespace fusionkit
