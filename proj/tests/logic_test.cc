#include <gtest/gtest.h>

#include <random>

#include "fusionkit/logic.h"
#include "fusionkit/parse.h"
#include "test_util.h"

namespace fusionkit {
namespace {

using testing::RandomFormula;
using testing::SignatureFrom;

Signature TestSignature() {
  return SignatureFrom(
      "sort V\n"
      "sort W\n"
      "rel E : V V\n"
      "rel R : V\n"
      "rel P : W\n"
      "rel Q : V W\n"
      "fun f : V -> V\n"
      "fun g : V V -> V\n"
      "fun h : V -> W\n"
      "fun c : -> V\n");
}

Signature OneSorted() {
  return SignatureFrom("sort V\nrel E : V V\nrel R : V\nfun f : V -> V\n");
}

TEST(ParseTest, RelationAndNegatedEquality) {
  Formula f = ParseFormula("E(x,y) & ~(x=y)", OneSorted());
  ASSERT_EQ(f.kind(), Formula::Kind::kAnd);
  EXPECT_EQ(f.left().kind(), Formula::Kind::kRelation);
  EXPECT_EQ(f.right().kind(), Formula::Kind::kNot);
  EXPECT_EQ(f.right().operand().kind(), Formula::Kind::kEquals);
}

TEST(ParseTest, ExistentialOverFlatAtom) {
  Formula f = ParseFormula("exists y:V. f(x)=y", OneSorted());
  ASSERT_EQ(f.kind(), Formula::Kind::kExists);
  EXPECT_EQ(f.bound(), (Variable{"y", "V"}));
  EXPECT_TRUE(IsAtomicFlat(f.body()));
}

TEST(ParseTest, UnbalancedParenthesisPosition) {
  try {
    ParseFormula("R(f(x)", OneSorted());
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 1);
    EXPECT_EQ(e.column(), 7);
  }
}

TEST(ParseTest, Errors) {
  EXPECT_THROW(ParseFormula("Z(x)", OneSorted()), ParseError);
  EXPECT_THROW(ParseFormula("E(x)", OneSorted()), ParseError);
  EXPECT_THROW(ParseFormula("P(x) & R(x)", TestSignature()), ParseError);
  EXPECT_THROW(ParseFormula("x $ y", OneSorted()), ParseError);
}

TEST(ParseTest, BoundedExistentialSugar) {
  Formula f = ParseFormula("exists<=1 y:V. E(x,y)", OneSorted());
  EXPECT_EQ(QuantifierRank(f), 2);
  FiniteStructure s = testing::StructureFrom(
      "structure G\nsort V = {a,b,c}\nrel E : V V = {(a,b),(a,c),(b,c)}\nrel R : V = {}\n"
      "fun f : V -> V = {a->a,b->b,c->c}\n");
  Variable x{"x", "V"};
  EXPECT_FALSE(Evaluate(s, f, {{x, 0}}));
  EXPECT_TRUE(Evaluate(s, f, {{x, 1}}));
  EXPECT_TRUE(Evaluate(s, f, {{x, 2}}));
}

TEST(PrintTest, FixedRenderings) {
  EXPECT_EQ(Print(Formula::True()), "true");
  Signature sig = OneSorted();
  Formula f = ParseFormula("exists y:V. (f(x)=y & R(y))", sig);
  EXPECT_EQ(Print(f), "exists y:V. (f(x)=y & R(y))");
  EXPECT_EQ(Print(ParseFormula("E(x,y) & ~(x=y)", sig)), "E(x,y) & ~(x=y)");
  EXPECT_EQ(Print(ParseFormula("(R(x) -> R(y)) -> R(x)", sig)), "(R(x) -> R(y)) -> R(x)");
  EXPECT_EQ(Print(ParseFormula("R(x) -> R(y) -> R(x)", sig)), "R(x) -> R(y) -> R(x)");
  EXPECT_EQ(Print(ParseFormula("(R(x) | R(y)) & R(x)", sig)), "(R(x) | R(y)) & R(x)");
}

TEST(PrintTest, RoundTripRandom) {
  Signature sig = TestSignature();
  std::vector<Variable> vars = {{"x", "V"}, {"y", "V"}, {"w", "W"}};
  std::mt19937 rng(7);
  testing::FormulaOptions opt;
  opt.depth = 5;
  opt.quantifiers = true;
  opt.max_rank = 2;
  for (int i = 0; i < 1000; ++i) {
    Formula f = RandomFormula(sig, vars, opt, rng);
    std::string text = Print(f);
    Formula g = ParseFormula(text, sig, vars);
    ASSERT_EQ(f, g) << text << "\nvs\n" << Print(g);
  }
}

TEST(FreeVarsTest, Examples) {
  Signature sig = OneSorted();
  auto list = FreeVariableList(ParseFormula("x = y", sig));
  ASSERT_EQ(list.size(), 2u);
  EXPECT_EQ(list[0].name, "x");
  EXPECT_EQ(list[1].name, "y");
  auto one = FreeVariableList(ParseFormula("exists y:V. E(x,y)", sig));
  ASSERT_EQ(one.size(), 1u);
  EXPECT_EQ(one[0].name, "x");
  EXPECT_TRUE(FreeVariableList(Formula::False()).empty());
}

TEST(SubstituteTest, Examples) {
  Signature sig = TestSignature();
  Variable x{"x", "V"};
  Variable y{"y", "V"};
  Formula eq = Formula::Equals(Term::Var(x), Term::Var(y));
  Formula r = Substitute(eq, {{x, Term::Apply("c", {})}});
  EXPECT_EQ(Print(r), "c=y");
  EXPECT_EQ(ParseFormula("c=y", sig, {y}), r);

  Formula ex = ParseFormula("exists y:V. E(x,y)", sig, {x});
  Formula s = Substitute(ex, {{x, Term::Var(y)}});
  ASSERT_EQ(s.kind(), Formula::Kind::kExists);
  EXPECT_NE(s.bound().name, "y");
  EXPECT_EQ(FreeVariables(s), (std::set<Variable>{y}));
  EXPECT_EQ(s.body().terms()[0], Term::Var(y));
  EXPECT_EQ(s.body().terms()[1], Term::Var(s.bound()));

  EXPECT_EQ(Substitute(ex, {}), ex);
  EXPECT_EQ(Substitute(ex, {{x, Term::Var(x)}}), ex);
}

TEST(SubstituteTest, CommutesWithFreeVars) {
  Signature sig = TestSignature();
  std::vector<Variable> vars = {{"x", "V"}, {"y", "V"}, {"w", "W"}};
  std::mt19937 rng(11);
  testing::FormulaOptions opt;
  opt.depth = 4;
  opt.quantifiers = true;
  for (int i = 0; i < 300; ++i) {
    Formula f = RandomFormula(sig, vars, opt, rng);
    Variable x = vars[0];
    auto fv = FreeVariables(f);
    if (!fv.count(x)) continue;
    Term t = testing::RandomTerm(sig, "V", vars, 2, rng);
    Formula g = Substitute(f, {{x, t}});
    auto expected = fv;
    expected.erase(x);
    for (const auto& v : FreeVariables(t)) expected.insert(v);
    EXPECT_EQ(FreeVariables(g), expected) << Print(f);
  }
}

TEST(FamilyTest, DisjointSymbols) {
  Signature base = SignatureFrom("sort V\nrel E : V V\nrel P : V\n");
  LanguageFamily fam({{"L1", base.Restrict({"E"})}, {"L2", base.Restrict({"P"})}});
  EXPECT_TRUE(fam.intersection().Symbols().empty());
  EXPECT_EQ(fam.join().Symbols(), (std::set<std::string>{"E", "P"}));
}

TEST(FamilyTest, SharedSymbol) {
  Signature base = SignatureFrom("sort K\nfun mul : K K -> K\nrel R1 : K\nrel R2 : K\n");
  LanguageFamily fam({{"L1", base.Restrict({"mul", "R1"})}, {"L2", base.Restrict({"mul", "R2"})}});
  EXPECT_EQ(fam.intersection().Symbols(), (std::set<std::string>{"mul"}));
}

TEST(FamilyTest, InconsistentIntersections) {
  Signature base = SignatureFrom("sort V\nrel A : V\nrel B : V\nrel C : V\n");
  try {
    LanguageFamily fam({{"L1", base.Restrict({"A", "B"})},
                        {"L2", base.Restrict({"B", "C"})},
                        {"L3", base.Restrict({"C"})}});
    FAIL() << "expected an error";
  } catch (const Error& e) {
    std::string msg = e.what();
    EXPECT_NE(msg.find("L1"), std::string::npos) << msg;
  }
}

TEST(FamilyTest, SortMismatch) {
  Signature a = SignatureFrom("sort V\n");
  Signature b = SignatureFrom("sort W\n");
  EXPECT_THROW(LanguageFamily({{"L1", a}, {"L2", b}}), Error);
}

TEST(FamilyTest, SignatureFileLanguages) {
  auto file = ParseSignatureFile(
      "sort V\nrel P : V\nrel Q : V\nrel E : V V\nlang L1 uses E P\nlang L2 uses E Q\n");
  ASSERT_EQ(file.family.size(), 2u);
  EXPECT_EQ(file.family.intersection().Symbols(), (std::set<std::string>{"E"}));
  EXPECT_EQ(file.family.join().Symbols(), (std::set<std::string>{"E", "P", "Q"}));
}

TEST(ClassifyTest, Examples) {
  Signature sig = OneSorted();
  Formula a = ParseFormula("f(x)=y", sig);
  EXPECT_EQ(Classify(a), FormulaClass::kAtomicFlat);
  EXPECT_TRUE(IsFlat(a));
  Formula b = ParseFormula("R(f(x))", sig);
  EXPECT_EQ(Classify(b), FormulaClass::kQuantifierFree);
  EXPECT_FALSE(IsFlat(b));
  Formula c = ParseFormula("exists y:V. (f(x)=y & R(y))", sig);
  EXPECT_EQ(Classify(c), FormulaClass::kExistential);
  EXPECT_TRUE(IsFlat(c.body()));
  EXPECT_EQ(Classify(ParseFormula("~E(x,y) & x=y", sig)), FormulaClass::kFlat);
  EXPECT_EQ(Classify(ParseFormula("forall y:V. E(x,y)", sig)), FormulaClass::kGeneral);
}

TEST(ClassifyTest, Flags) {
  Signature sig = OneSorted();
  auto a = ClassifyFlags(ParseFormula("f(x)=y", sig));
  EXPECT_TRUE(a.atomic_flat && a.flat_literal && a.flat && a.eflat_shaped && a.quantifier_free);
  auto b = ClassifyFlags(ParseFormula("~R(x) & E(x,y)", sig));
  EXPECT_FALSE(b.flat_literal);
  EXPECT_TRUE(b.flat);
  auto c = ClassifyFlags(ParseFormula("exists y:V. (f(x)=y & R(y))", sig));
  EXPECT_TRUE(c.eflat_shaped && c.existential && c.be_shaped);
  EXPECT_FALSE(c.flat);
  ASSERT_EQ(c.be_block.size(), 1u);
  EXPECT_EQ(c.be_block[0].name, "y");
  auto d = ClassifyFlags(ParseFormula("R(x) | R(y)", sig));
  EXPECT_FALSE(d.flat);
  EXPECT_TRUE(d.quantifier_free);
  EXPECT_EQ(ToString(ClassifyFlags(ParseFormula("forall y:V. E(x,y)", sig))), "general");
}

TEST(ClassifyTest, ChainIsMonotone) {
  Signature sig = TestSignature();
  std::vector<Variable> vars = {{"x", "V"}, {"y", "V"}, {"w", "W"}};
  std::mt19937 rng(3);
  testing::FormulaOptions opt;
  opt.depth = 3;
  for (int i = 0; i < 500; ++i) {
    Formula f = RandomFormula(sig, vars, opt, rng);
    if (IsAtomicFlat(f)) EXPECT_TRUE(IsFlatLiteral(f));
    if (IsFlatLiteral(f)) EXPECT_TRUE(IsFlat(f));
    if (IsFlat(f)) EXPECT_TRUE(IsQuantifierFree(f));
  }
}

TEST(QuantifierRankTest, Examples) {
  Signature sig = OneSorted();
  EXPECT_EQ(QuantifierRank(ParseFormula("E(x,y) | R(x)", sig)), 0);
  EXPECT_EQ(QuantifierRank(ParseFormula("exists x:V. forall y:V. E(x,y)", sig)), 2);
  EXPECT_EQ(QuantifierRank(ParseFormula("(exists x:V. R(x)) & (exists y:V. R(y))", sig)), 1);
}

}  // namespace
}  // namespace fusionkit
