#include "fusionkit/topology.h"

#include <random>
#include <sstream>

#include "fusionkit/parse.h"
#include "fusionkit/pseudotopology.h"

namespace fusionkit {
namespace {

std::string Trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\n");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\n");
  return s.substr(b, e - b + 1);
}

std::vector<TupleSet> Instances(const TopologyBasis& b) {
  TupleSpace yspace(*b.host, SortsOf(b.y));
  std::vector<TupleSet> out;
  for (size_t c = 0; c < yspace.Count(); ++c) {
    auto t = yspace.Decode(c);
    Assignment a;
    for (size_t i = 0; i < b.y.size(); ++i) a[b.y[i]] = t[i];
    out.push_back(ExtensionOf(*b.host, b.beta, b.x, a));
  }
  return out;
}

DefinableSet Named(const RankedAlgebra& ra, const TupleSet& s) {
  const auto& alg = ra.algebra();
  if (alg.IsDefinable(s)) return alg.Make(s);
  return TabulatedSet(alg.host(), alg.vars(), s);
}

void CheckSpaces(const FiniteTopology& t, const RankedAlgebra& ra) {
  if (!(t.space() == ra.algebra().space()) || t.basis().host != ra.algebra().host()) {
    throw Error("topology and rank live on different tuple spaces");
  }
}

}  // namespace

TopologyBasis TopologyBasis::Parse(StructurePtr host, const std::string& text) {
  size_t s1 = text.find(';');
  size_t s2 = s1 == std::string::npos ? s1 : text.find(';', s1 + 1);
  if (s2 == std::string::npos) throw Error("basis needs the form 'x:S ; y:S ; FORMULA'");
  TopologyBasis b;
  b.host = host;
  b.x = ParseVariableList(text.substr(0, s1));
  b.y = ParseVariableList(text.substr(s1 + 1, s2 - s1 - 1));
  if (b.x.empty()) throw Error("basis needs at least one point variable");
  std::vector<Variable> hints = b.x;
  hints.insert(hints.end(), b.y.begin(), b.y.end());
  b.beta = ParseFormula(Trim(text.substr(s2 + 1)), host->signature(), hints);
  return b;
}

std::optional<std::string> FiniteTopology::Validate(const TopologyBasis& basis) {
  auto inst = Instances(basis);
  TupleSpace space(*basis.host, SortsOf(basis.x));
  for (size_t p = 0; p < space.Count(); ++p) {
    TupleSet least = TupleSet::Full(space.Count());
    bool covered = false;
    for (const auto& b : inst) {
      if (!b.Contains(p)) continue;
      covered = true;
      least = least & b;
    }
    std::string point = PrintTuple(*basis.host, SortsOf(basis.x), space.Decode(p));
    if (!covered) return "basis does not cover " + point;
    if (std::find(inst.begin(), inst.end(), least) == inst.end()) {
      return "no basic set around " + point + " inside the intersection of its neighborhoods";
    }
  }
  return std::nullopt;
}

FiniteTopology::FiniteTopology(const TopologyBasis& basis) : basis_(basis) {
  if (auto why = Validate(basis)) throw Error("invalid topology basis: " + *why);
  space_ = TupleSpace(*basis.host, SortsOf(basis.x));
  Build(Instances(basis));
}

void FiniteTopology::Build(const std::vector<TupleSet>& instances) {
  basic_.clear();
  for (const auto& b : instances) {
    if (std::find(basic_.begin(), basic_.end(), b) == basic_.end()) basic_.push_back(b);
  }
  least_.assign(universe(), TupleSet::Full(universe()));
  for (const auto& b : basic_) {
    for (size_t p : b.Elements()) least_[p] = least_[p] & b;
  }
}

FiniteTopology FiniteTopology::Discrete(StructurePtr host, std::vector<Variable> vars) {
  TopologyBasis b;
  b.host = host;
  b.x = vars;
  Formula f = Formula::True();
  for (size_t i = 0; i < vars.size(); ++i) {
    Variable y{vars[i].name + "_b", vars[i].sort};
    b.y.push_back(y);
    Formula eq = Formula::Equals(Term::Var(vars[i]), Term::Var(y));
    f = i == 0 ? eq : Formula::And(f, eq);
  }
  b.beta = f;
  return FiniteTopology(b);
}

FiniteTopology FiniteTopology::Indiscrete(StructurePtr host, std::vector<Variable> vars) {
  TopologyBasis b;
  b.host = host;
  b.x = vars;
  b.beta = Formula::True();
  return FiniteTopology(b);
}

bool FiniteTopology::IsOpen(const TupleSet& a) const { return Interior(a) == a; }

TupleSet FiniteTopology::Closure(const TupleSet& a) const {
  TupleSet out(universe());
  for (size_t p = 0; p < universe(); ++p) {
    if (least_[p].Intersects(a)) out.Insert(p);
  }
  return out;
}

TupleSet FiniteTopology::Interior(const TupleSet& a) const {
  TupleSet out(universe());
  for (size_t p : a.Elements()) {
    if (least_[p].SubsetOf(a)) out.Insert(p);
  }
  return out;
}

TupleSet FiniteTopology::Frontier(const TupleSet& a) const { return Closure(a) - a; }

bool FiniteTopology::Dense(const TupleSet& a, const TupleSet& y) const {
  TupleSet ay = a & y;
  for (size_t p : y.Elements()) {
    if (!least_[p].Intersects(ay)) return false;
  }
  return true;
}

int LocalDim(size_t p, const TupleSet& x, const FiniteTopology& t, const RankedAlgebra& ra) {
  return ra.Dim(t.Neighborhood(p) & x);
}

TupleSet Essence(const TupleSet& x, const FiniteTopology& t, const RankedAlgebra& ra) {
  int d = ra.Dim(x);
  TupleSet out(x.universe());
  for (size_t p : x.Elements()) {
    if (LocalDim(p, x, t, ra) == d) out.Insert(p);
  }
  return out;
}

TupleSet Residue(const TupleSet& x, const FiniteTopology& t, const RankedAlgebra& ra) {
  return x - Essence(x, t, ra);
}

TopologyOps ComputeTopologyOps(const TupleSet& x, const FiniteTopology& t,
                               const RankedAlgebra& ra) {
  CheckSpaces(t, ra);
  TupleSet es = Essence(x, t, ra);
  return {Named(ra, t.Closure(x)), Named(ra, t.Interior(x)), Named(ra, t.Frontier(x)),
          Named(ra, es), Named(ra, x - es)};
}

DimCompatReport CheckDimCompatible(const FiniteTopology& t, const RankedAlgebra& ra,
                                   const DimCompatOptions& opt) {
  CheckSpaces(t, ra);
  constexpr size_t kMaxIssues = 100;
  DimCompatReport rep;
  auto issue = [&](DimCompatIssue::Kind k, const DefinableSet& x, std::optional<TupleSet> a,
                   std::string detail) {
    if (rep.issues.size() < kMaxIssues) rep.issues.push_back({k, x, std::move(a), detail});
  };
  const auto& alg = ra.algebra();
  std::vector<std::optional<TupleSet>> essences;
  for (const auto& x : ra.Sets()) {
    ++rep.sets_checked;
    int d = ra.Dim(x);
    TupleSet fr = t.Frontier(x.extension);
    if (!alg.IsDefinable(fr)) {
      rep.defined = false;
      issue(DimCompatIssue::Kind::kUndefinable, x, std::nullopt, "frontier outside the class");
    } else if (!fr.Empty() && ra.Dim(fr) >= d) {
      rep.frontier_inequality = false;
      issue(DimCompatIssue::Kind::kFrontier, x, std::nullopt,
            "dim fr = " + RankToString(ra.Dim(fr)) + ", dim X = " + RankToString(d));
    }
    std::optional<TupleSet> es;
    try {
      es = Essence(x.extension, t, ra);
    } catch (const Error&) {
      rep.defined = false;
      issue(DimCompatIssue::Kind::kUndefinable, x, std::nullopt,
            "a neighborhood piece is outside the class");
    }
    if (es) {
      TupleSet rs = x.extension - *es;
      if (!alg.IsDefinable(rs)) {
        rep.defined = false;
        es.reset();
        issue(DimCompatIssue::Kind::kUndefinable, x, std::nullopt, "residue outside the class");
      } else if (!rs.Empty() && ra.Dim(rs) >= d) {
        rep.residue_inequality = false;
        issue(DimCompatIssue::Kind::kResidue, x, std::nullopt,
              "dim rs = " + RankToString(ra.Dim(rs)) + ", dim X = " + RankToString(d));
      }
    }
    essences.push_back(es);
  }

  std::mt19937 rng(opt.seed);
  bool equivalence = rep.compatible();
  bool lemma = rep.frontier_inequality && rep.defined;
  if (!equivalence && !lemma) return rep;
  const auto& sets = ra.Sets();
  for (size_t k = 0; k < sets.size(); ++k) {
    const TupleSet& x = sets[k].extension;
    if (x.Empty()) continue;
    auto members = x.Elements();
    for (size_t s = 0; s < opt.samples; ++s) {
      TupleSet a(ra.universe());
      if (s % 2 == 0) {
        for (size_t c = 0; c < ra.universe(); ++c) {
          if (rng() % 2) a.Insert(c);
        }
      } else {
        a = x;
        size_t drop = 1 + rng() % members.size();
        for (size_t i = 0; i < drop; ++i) a.Erase(members[rng() % members.size()]);
        for (size_t c = 0; c < ra.universe(); ++c) {
          if (!x.Contains(c) && rng() % 4 == 0) a.Insert(c);
        }
      }
      ++rep.samples_checked;
      bool pd = PseudoDense(a, x, ra).dense;
      if (lemma && t.Dense(a, x) && !pd) {
        issue(DimCompatIssue::Kind::kDenseNotPseudoDense, sets[k], a, "dense but not pseudo-dense");
      }
      if (equivalence && pd != t.Dense(a, *essences[k])) {
        issue(DimCompatIssue::Kind::kEquivalence, sets[k], a,
              pd ? "pseudo-dense but not dense in the essence"
                 : "dense in the essence but not pseudo-dense");
      }
    }
  }
  return rep;
}

DimCompatReport CheckDimCompatible(const TopologyBasis& basis, const RankFunction& r,
                                   const DefinabilityClass& cls, const DimCompatOptions& opt) {
  FiniteTopology t(basis);
  RankedAlgebra ra(basis.host, cls, basis.x, r);
  return CheckDimCompatible(t, ra, opt);
}

OpenCoreReport CheckOpenCore(const FiniteTopology& t, const DefinabilityClass& expansion,
                             const DefinabilityClass& base) {
  const auto& b = t.basis();
  DefinableAlgebra exp(b.host, expansion, b.x);
  DefinableAlgebra core(b.host, base, b.x);
  OpenCoreReport rep;
  for (const auto& x : exp.Sets()) {
    ++rep.sets_checked;
    if (!core.IsDefinable(t.Closure(x.extension))) rep.failures.push_back(x);
  }
  return rep;
}

}  // namespace fusionkit
