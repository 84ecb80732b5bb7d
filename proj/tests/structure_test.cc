#include <gtest/gtest.h>

#include <random>

#include "fusionkit/models.h"
#include "fusionkit/parse.h"
#include "fusionkit/structure.h"
#include "test_util.h"

namespace fusionkit {
namespace {

using testing::SignatureFrom;
using testing::StructureFrom;

const char kCycle[] =
    "structure C3\n"
    "sort V = {a, b, c}\n"
    "rel E : V V = {(a,b),(b,c),(c,a)}\n";

TEST(StructureFileTest, ParseAndPrintRoundTrip) {
  FiniteStructure s = StructureFrom(
      "# comment\n"
      "structure M\n"
      "sort V = {a, b, c}\n"
      "sort W = {p}\n"
      "rel E : V V = {(a,b),(b,c)}\n"
      "rel P : V = {a, c}\n"
      "fun f : V -> V = {a->b, b->c, c->a}\n"
      "fun h : V V -> W = {(a,a)->p,(a,b)->p,(a,c)->p,(b,a)->p,(b,b)->p,(b,c)->p,\n"
      "  (c,a)->p,(c,b)->p,(c,c)->p}\n"
      "fun k : -> V = {->b}\n");
  EXPECT_EQ(s.name(), "M");
  EXPECT_EQ(s.Size("V"), 3);
  EXPECT_TRUE(s.Holds("E", {0, 1}));
  EXPECT_FALSE(s.Holds("E", {1, 0}));
  EXPECT_TRUE(s.Holds("P", {2}));
  EXPECT_EQ(s.Apply("f", {2}), 0);
  EXPECT_EQ(s.Apply("k", {}), 1);
  auto again = ParseStructureFile(PrintStructure(s));
  ASSERT_EQ(again.size(), 1u);
  EXPECT_EQ(again[0], s);
}

TEST(StructureFileTest, Errors) {
  EXPECT_THROW(StructureFrom("structure M\nsort V = {a}\nrel E : V V = {(a,z)}\n"), Error);
  EXPECT_THROW(StructureFrom("structure M\nsort V = {a, b}\nfun f : V -> V = {a->b}\n"), Error);
  EXPECT_THROW(StructureFrom("structure M\nsort V = {a, a}\n"), Error);
}

TEST(EvaluateTest, Basics) {
  FiniteStructure s = StructureFrom(kCycle);
  const Signature& sig = s.signature();
  EXPECT_TRUE(Evaluate(s, Formula::True()));
  EXPECT_TRUE(Evaluate(s, ParseFormula("forall x:V. exists y:V. E(x,y)", sig)));
  EXPECT_FALSE(Evaluate(s, ParseFormula("exists x:V. E(x,x)", sig)));
  EXPECT_THROW(Evaluate(s, ParseFormula("E(x,y)", sig)), Error);
}

TEST(EvaluateTest, EmptySort) {
  Signature sig = SignatureFrom("sort V\n");
  FiniteStructure s("E", sig);
  s.SetUniverse("V", {});
  EXPECT_FALSE(Evaluate(s, ParseFormula("exists x:V. x=x", sig)));
  EXPECT_TRUE(Evaluate(s, ParseFormula("forall x:V. ~(x=x)", sig)));
}

TEST(ExtensionTest, Examples) {
  FiniteStructure s = StructureFrom(kCycle);
  std::vector<Variable> x = {{"x", "V"}};
  EXPECT_TRUE(ExtensionOf(s, Formula::False(), x).Empty());
  EXPECT_EQ(ExtensionOf(s, ParseFormula("x=x", s.signature()), x).Count(), 3u);
  Variable b{"b", "V"};
  TupleSet nb = ExtensionOf(s, ParseFormula("E(x,b)", s.signature(), {b}), x, {{b, 1}});
  EXPECT_EQ(nb.Elements(), std::vector<size_t>{0});
}

TEST(ExtensionTest, AgreesWithEvaluate) {
  Signature sig = SignatureFrom("sort V\nrel E : V V\nrel R : V\nfun f : V -> V\n");
  std::mt19937 rng(5);
  std::vector<Variable> vars = {{"x", "V"}, {"y", "V"}};
  testing::FormulaOptions opt;
  opt.quantifiers = true;
  opt.depth = 4;
  for (int i = 0; i < 200; ++i) {
    FiniteStructure s = RandomStructure(sig, {3}, rng);
    Formula f = testing::RandomFormula(sig, vars, opt, rng);
    TupleSet ext = ExtensionOf(s, f, vars);
    TupleSpace space(s, SortsOf(vars));
    for (size_t c = 0; c < space.Count(); ++c) {
      auto t = space.Decode(c);
      EXPECT_EQ(ext.Contains(c), Evaluate(s, f, {{vars[0], t[0]}, {vars[1], t[1]}}));
    }
  }
}

TEST(ReductTest, Examples) {
  FiniteStructure s = StructureFrom(
      "structure K\nsort K = {0, 1}\nfun add : K K -> K = {(0,0)->0,(0,1)->1,(1,0)->1,(1,1)->0}\n"
      "rel R1 : K = {1}\nrel R2 : K = {0}\n");
  EXPECT_EQ(Reduct(s, s.signature()), s);
  FiniteStructure ring = Reduct(s, s.signature().Restrict({"add"}));
  EXPECT_EQ(ring.signature().Symbols(), (std::set<std::string>{"add"}));
  EXPECT_EQ(Expand(ring, s), s);
  EXPECT_THROW(Reduct(ring, s.signature()), Error);
}

TEST(ReductTest, CommutesWithEvaluation) {
  Signature sig = SignatureFrom("sort V\nrel E : V V\nrel R : V\nfun f : V -> V\n");
  Signature small = sig.Restrict({"E", "f"});
  std::mt19937 rng(9);
  std::vector<Variable> vars = {{"x", "V"}};
  testing::FormulaOptions opt;
  opt.quantifiers = true;
  for (int i = 0; i < 200; ++i) {
    FiniteStructure s = RandomStructure(sig, {3}, rng);
    Formula f = testing::RandomFormula(small, vars, opt, rng);
    EXPECT_EQ(ExtensionOf(s, f, vars), ExtensionOf(Reduct(s, small), f, vars));
  }
}

TEST(ExtendFreshTest, AddsElements) {
  FiniteStructure s = StructureFrom(kCycle);
  FiniteStructure t = ExtendFresh(s, 2);
  EXPECT_EQ(t.Size("V"), 5);
  EXPECT_TRUE(t.Holds("E", {0, 1}));
  EXPECT_FALSE(t.Holds("E", {3, 4}));
}

TEST(ModelsTest, CountsUpToIsomorphism) {
  Signature sig = SignatureFrom("sort V\nrel E : V V\n");
  Formula sym = ParseFormula("forall x:V. forall y:V. (E(x,y) -> E(y,x)) & ~E(x,x)", sig);
  // Simple graphs on 0..3 vertices: 1 + 1 + 2 + 4.
  EXPECT_EQ(ModelsUpTo(sig, sym, 3).size(), 8u);
}

TEST(TupleSetTest, Operations) {
  TupleSet a(70), b(70);
  a.Insert(1);
  a.Insert(65);
  b.Insert(65);
  EXPECT_EQ((a & b).Count(), 1u);
  EXPECT_EQ((a | b).Count(), 2u);
  EXPECT_EQ((a - b).Elements(), std::vector<size_t>{1});
  EXPECT_EQ(a.Complement().Count(), 68u);
  EXPECT_TRUE(b.SubsetOf(a));
  EXPECT_FALSE(a.SubsetOf(b));
  EXPECT_TRUE(TupleSet::Full(70).Complement().Empty());
}

}  // namespace
}  // namespace fusionkit
