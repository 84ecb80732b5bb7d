#include "fusionkit/pseudotopology.h"

#include <algorithm>
#include <functional>
#include <map>
#include <set>

#include "fusionkit/parse.h"

namespace fusionkit {

namespace {

bool FastPath(const RankedAlgebra& ra) { return ra.rank().atomic() && ra.boolean(); }

bool AlmostSubset(const RankedAlgebra& ra, const TupleSet& a, const TupleSet& b) {
  TupleSet diff = a - b;
  return diff.Empty() || ra.Dim(diff) < ra.Dim(a);
}

}  // namespace

PseudoDenseResult PseudoDense(const TupleSet& a, const TupleSet& x, const RankedAlgebra& ra) {
  if (!FastPath(ra)) return PseudoDenseBySubsetScan(a, x, ra);
  PseudoDenseResult out;
  int d = ra.Dim(x);
  for (size_t b : ra.BlocksIn(x)) {
    if (ra.BlockDim(b) == d && !ra.algebra().Block(b).Intersects(a)) {
      out.dense = false;
      out.witness = ra.algebra().Block(b);
      return out;
    }
  }
  return out;
}

PseudoDenseResult PseudoDenseBySubsetScan(const TupleSet& a, const TupleSet& x,
                                          const RankedAlgebra& ra) {
  PseudoDenseResult out;
  int d = ra.Dim(x);
  for (const auto& sub : ra.ClassSubsets(x)) {
    if (sub.Empty() || sub.Intersects(a)) continue;
    if (ra.Dim(sub) == d) {
      out.dense = false;
      out.witness = sub;
      return out;
    }
  }
  return out;
}

std::optional<DefinableSet> PseudoClosure(const TupleSet& a, const RankedAlgebra& ra,
                                          ClosureSearch mode) {
  const DefinableAlgebra& alg = ra.algebra();
  if (ra.boolean() && alg.NumBlocks() > 20) {
    // Too many sets to list; the hull is a pseudo-closure of least rank.
    return alg.Make(alg.Hull(a));
  }
  std::optional<DefinableSet> best;
  std::pair<int, int> best_key;
  for (const auto& s : ra.Sets()) {
    if (!a.SubsetOf(s.extension)) continue;
    if (mode == ClosureSearch::kAny) {
      if (PseudoDense(a, s.extension, ra).dense) return s;
      continue;
    }
    std::pair<int, int> key{ra.Dim(s.extension), ra.Degree(s.extension)};
    if (!best || key < best_key) {
      best = s;
      best_key = key;
    }
  }
  return best;
}

std::vector<TupleSet> AllPseudoClosures(const TupleSet& a, const RankedAlgebra& ra) {
  std::vector<TupleSet> out;
  for (const auto& s : ra.Sets()) {
    if (a.SubsetOf(s.extension) && PseudoDense(a, s.extension, ra).dense) {
      out.push_back(s.extension);
    }
  }
  return out;
}

AlmostRelation AlmostRelations(const TupleSet& x1, const TupleSet& x2, const RankedAlgebra& ra) {
  AlmostRelation r;
  r.almost_subset = AlmostSubset(ra, x1, x2);
  r.almost_equal = r.almost_subset && AlmostSubset(ra, x2, x1);
  return r;
}

bool IsAlmostIrreducible(const TupleSet& x, const RankedAlgebra& ra) {
  if (x.Empty()) return true;
  if (!FastPath(ra)) return AlmostIrreducibleByCovers(ra, x);
  int d = ra.Dim(x);
  int top = 0;
  for (size_t b : ra.BlocksIn(x)) top += ra.BlockDim(b) == d;
  return top <= 1;
}

bool IsAlmostIrreducibleByCovers(const TupleSet& x, const RankedAlgebra& ra) {
  return x.Empty() || AlmostIrreducibleByCovers(ra, x);
}

namespace {

std::vector<std::vector<std::string>> SortTuples(const std::vector<std::string>& sorts, int k) {
  std::vector<std::vector<std::string>> out = {{}};
  for (int i = 0; i < k; ++i) {
    std::vector<std::vector<std::string>> next;
    for (const auto& t : out) {
      for (const auto& s : sorts) {
        auto u = t;
        u.push_back(s);
        next.push_back(std::move(u));
      }
    }
    out = std::move(next);
  }
  return out;
}

}  // namespace

ApproximabilityReport CheckApproximable(StructurePtr s, const DefinabilityClass& expansion,
                                        const DefinabilityClass& base, const RankFunction& r,
                                        int max_arity) {
  if (!base.signature.IsSubsignatureOf(expansion.signature)) {
    throw Error("base class signature is not a reduct of the expansion's");
  }
  ApproximabilityReport rep;
  for (int k = 1; k <= max_arity; ++k) {
    for (const auto& sorts : SortTuples(s->signature().sorts(), k)) {
      auto vars = DefaultVariables(sorts);
      DefinableAlgebra exp(s, expansion, vars);
      RankedAlgebra ra(s, base, vars, r);
      for (const auto& set : exp.Sets()) {
        ++rep.sets_checked;
        if (!PseudoClosure(set.extension, ra)) rep.failures.push_back({set});
      }
    }
  }
  return rep;
}

std::vector<ApproxViolation> FindApproxViolations(const ApproxCandidates& c,
                                                  const RankedAlgebra& ra,
                                                  size_t* families_checked) {
  std::vector<ApproxViolation> out;
  size_t n = c.per_index.size();
  for (const auto& common : c.common) {
    if (common.extension.Empty()) continue;
    std::vector<std::vector<size_t>> dense(n);
    size_t total = 1;
    for (size_t i = 0; i < n; ++i) {
      for (size_t j = 0; j < c.per_index[i].size(); ++j) {
        if (PseudoDense(c.per_index[i][j].extension, common.extension, ra).dense) {
          dense[i].push_back(j);
        }
      }
      total *= dense[i].size();
    }
    if (families_checked) *families_checked += total;
    if (total == 0) continue;
    std::vector<size_t> pick(n);
    std::function<bool(size_t, const TupleSet&)> search = [&](size_t i, const TupleSet& meet) {
      if (i == n) return meet.Empty();
      for (size_t j : dense[i]) {
        pick[i] = j;
        if (search(i + 1, meet & c.per_index[i][j].extension)) return true;
      }
      return false;
    };
    if (search(0, TupleSet::Full(ra.universe()))) {
      ApproxViolation v;
      for (size_t i = 0; i < n; ++i) v.sets.push_back(c.per_index[i][pick[i]]);
      v.common = common;
      out.push_back(std::move(v));
    }
  }
  return out;
}

ApproxReport CheckApproxInterpolative(const FiniteStructure& s, const LanguageFamily& fam,
                                      const RankFunction& r, const InterpolativeOptions& options) {
  if (!(s.signature().Symbols() == fam.join().Symbols())) {
    throw Error("structure signature differs from the family's union language");
  }
  InterpolativeOptions opt = ResolveClasses(fam, options);
  ApproxReport report;
  int n = static_cast<int>(fam.size());
  if (opt.max_family <= 0 || n == 0) return report;
  ForEachArity(s, fam, opt, [&](const ReductAlgebras& algs) {
    RankedAlgebra ra(std::make_shared<DefinableAlgebra>(algs.common), r);
    for (int size = 1; size <= std::min(opt.max_family, n); ++size) {
      std::vector<int> idx(size);
      for (int i = 0; i < size; ++i) idx[i] = i;
      while (true) {
        ApproxCandidates c;
        c.common = algs.common.Sets();
        for (int i : idx) c.per_index.push_back(algs.per_index[i].Sets());
        for (auto& v : FindApproxViolations(c, ra, &report.families_checked)) {
          v.indices = idx;
          report.violations.push_back(std::move(v));
        }
        int k = size - 1;
        while (k >= 0 && idx[k] == n - size + k) --k;
        if (k < 0) break;
        ++idx[k];
        for (int j = k + 1; j < size; ++j) idx[j] = idx[j - 1] + 1;
      }
    }
  });
  return report;
}

Formula EmitPtAxiom(const AxiomSchemaInstance& inst) {
  size_t n = inst.phis.size();
  if (inst.zs.size() != n || inst.deltas.size() != n) {
    throw Error("axiom instance needs one z group and one delta per formula");
  }
  std::map<Variable, std::string> owner;
  auto claim = [&](const std::vector<Variable>& vs, const std::string& group) {
    for (const auto& v : vs) {
      auto [it, fresh] = owner.emplace(v, group);
      if (!fresh) {
        throw Error("variable " + Print(v) + " appears in both " + it->second + " and " + group);
      }
    }
  };
  claim(inst.x, "x");
  claim(inst.y, "y");
  for (size_t i = 0; i < n; ++i) claim(inst.zs[i], "z" + std::to_string(i + 1));
  auto check = [&](const Formula& f, const std::string& what,
                   std::vector<std::vector<Variable>> allowed) {
    std::set<Variable> ok;
    for (const auto& g : allowed) ok.insert(g.begin(), g.end());
    for (const auto& v : FreeVariables(f)) {
      // Parameter variables of tabulated formulas stay free.
      if (v.name.rfind("_p", 0) == 0 && !owner.count(v)) continue;
      if (!ok.count(v)) {
        throw Error("variable mismatch: " + what + " uses " + Print(v) + " outside its slots");
      }
    }
  };
  check(inst.phi_common, "the common formula", {inst.x, inst.y});
  for (size_t i = 0; i < n; ++i) {
    std::string k = std::to_string(i + 1);
    check(inst.phis[i], "phi" + k, {inst.x, inst.zs[i]});
    check(inst.deltas[i], "delta" + k, {inst.y, inst.zs[i]});
  }
  if (inst.gamma) check(*inst.gamma, "gamma", {inst.y});

  std::vector<Formula> ante;
  if (inst.gamma) ante.push_back(*inst.gamma);
  for (const auto& d : inst.deltas) {
    if (d.kind() != Formula::Kind::kTrue) ante.push_back(d);
  }
  Formula body = Formula::Exists(inst.x, Formula::Conjunction(inst.phis));
  if (!ante.empty()) body = Formula::Implies(Formula::Conjunction(ante), body);
  std::vector<Variable> bound = inst.y;
  for (const auto& z : inst.zs) bound.insert(bound.end(), z.begin(), z.end());
  return bound.empty() ? body : Formula::Forall(bound, body);
}

TabulatedFormula TabulateRelation(const FiniteStructure& s, const std::vector<Variable>& vars,
                                  const std::vector<std::vector<int>>& rows) {
  TabulatedFormula out;
  std::vector<Formula> disjuncts;
  for (const auto& row : rows) {
    if (row.size() != vars.size()) throw Error("tabulated row has the wrong arity");
    std::vector<Formula> conj;
    for (size_t i = 0; i < vars.size(); ++i) {
      Variable p = ParameterVariable(s, {s.SortIndex(vars[i].sort), row[i]});
      out.params[p] = row[i];
      conj.push_back(Formula::Equals(Term::Var(vars[i]), Term::Var(p)));
    }
    disjuncts.push_back(Formula::Conjunction(conj));
  }
  out.formula = Formula::Disjunction(disjuncts);
  return out;
}

Assignment TabulateDeltas(StructurePtr s, AxiomSchemaInstance& inst, const RankedAlgebra& ra) {
  if (inst.zs.size() != inst.phis.size()) throw Error("one parameter group per formula expected");
  auto bind = [](const std::vector<Variable>& vs, const std::vector<int>& t) {
    Assignment a;
    for (size_t i = 0; i < vs.size(); ++i) a[vs[i]] = t[i];
    return a;
  };
  TupleSpace yspace(*s, SortsOf(inst.y));
  std::vector<std::vector<int>> ys;
  std::vector<TupleSet> commons;
  for (size_t c = 0; c < yspace.Count(); ++c) {
    ys.push_back(yspace.Decode(c));
    commons.push_back(ExtensionOf(*s, inst.phi_common, inst.x, bind(inst.y, ys.back())));
  }
  Assignment params;
  inst.deltas.clear();
  for (size_t i = 0; i < inst.phis.size(); ++i) {
    TupleSpace zspace(*s, SortsOf(inst.zs[i]));
    std::vector<std::vector<int>> zt;
    std::vector<TupleSet> xs;
    for (size_t c = 0; c < zspace.Count(); ++c) {
      zt.push_back(zspace.Decode(c));
      xs.push_back(ExtensionOf(*s, inst.phis[i], inst.x, bind(inst.zs[i], zt.back())));
    }
    std::vector<std::vector<int>> rows;
    for (size_t b = 0; b < ys.size(); ++b) {
      if (commons[b].Empty()) continue;
      for (size_t c = 0; c < xs.size(); ++c) {
        if (!PseudoDense(xs[c], commons[b], ra).dense) continue;
        std::vector<int> row = ys[b];
        row.insert(row.end(), zt[c].begin(), zt[c].end());
        rows.push_back(row);
      }
    }
    std::vector<Variable> vars = inst.y;
    vars.insert(vars.end(), inst.zs[i].begin(), inst.zs[i].end());
    auto tab = TabulateRelation(*s, vars, rows);
    inst.deltas.push_back(tab.formula);
    params.insert(tab.params.begin(), tab.params.end());
  }
  return params;
}

std::vector<TupleSet> RepresentativeSystem(const RankedAlgebra& ra) {
  std::vector<TupleSet> reps;
  for (const auto& s : ra.Sets()) {
    const TupleSet& x = s.extension;
    if (x.Empty() || !IsAlmostIrreducible(x, ra)) continue;
    bool known = std::any_of(reps.begin(), reps.end(), [&](const TupleSet& r) {
      return AlmostRelations(x, r, ra).almost_equal;
    });
    if (!known) reps.push_back(x);
  }
  return reps;
}

namespace {

// Almost-equality classes among `sets`, first member of each.
std::vector<TupleSet> ClassReps(const std::vector<TupleSet>& sets, const RankedAlgebra& ra) {
  std::vector<TupleSet> reps;
  for (const auto& x : sets) {
    bool known = std::any_of(reps.begin(), reps.end(), [&](const TupleSet& r) {
      return AlmostRelations(x, r, ra).almost_equal;
    });
    if (!known) reps.push_back(x);
  }
  return reps;
}

}  // namespace

InductiveResult PseudoDenseInductive(const TupleSet& a, const TupleSet& x,
                                     const std::vector<TupleSet>& d, const RankedAlgebra& ra,
                                     const InductiveOptions& opt) {
  if (opt.verify) {
    if (!IsAlmostIrreducible(x, ra)) throw Error("precondition: X is not almost irreducible");
    for (const auto& m : d) {
      if (!IsAlmostIrreducible(m, ra)) {
        throw Error("precondition: a member of D is not almost irreducible");
      }
    }
    for (const auto& s : ra.Sets()) {
      if (s.extension.Empty() || !IsAlmostIrreducible(s.extension, ra)) continue;
      bool covered = std::any_of(d.begin(), d.end(), [&](const TupleSet& m) {
        return AlmostRelations(s.extension, m, ra).almost_equal;
      });
      if (!covered) {
        throw Error("precondition: D has no member almost equal to " + Print(s.formula));
      }
    }
  }
  InductiveResult out;
  out.residual = a;
  int top = ra.Dim(x);
  if (top == kMinusInfinity) {
    out.dense = true;
    return out;
  }
  for (int alpha = top - 1; alpha >= 0; --alpha) {
    std::vector<TupleSet> level, available;
    for (const auto& m : d) {
      if (ra.Dim(m) != alpha || !AlmostRelations(m, x, ra).almost_subset) continue;
      available.push_back(m);
      if (PseudoDense(out.residual, m, ra).dense) level.push_back(m);
    }
    auto reps = ClassReps(level, ra);
    InductiveStep step;
    step.alpha = alpha;
    step.representatives = reps.size();
    size_t bound = opt.trigger == InfinityTrigger::kThreshold &&
                           ra.rank().kind() == RankFunction::Kind::kThreshold
                       ? static_cast<size_t>(ra.rank().threshold())
                       : ClassReps(available, ra).size();
    step.triggered = reps.size() > bound;
    out.steps.push_back(step);
    if (step.triggered) {
      out.dense = true;
      return out;
    }
    for (const auto& r : reps) out.residual = out.residual - r;
  }
  out.dense = out.residual.Intersects(x);
  return out;
}

namespace {

std::vector<std::vector<size_t>> Combinations(size_t n, size_t k) {
  std::vector<std::vector<size_t>> out;
  std::vector<size_t> cur;
  std::function<void(size_t)> rec = [&](size_t from) {
    if (cur.size() == k) {
      out.push_back(cur);
      return;
    }
    for (size_t i = from; i < n; ++i) {
      cur.push_back(i);
      rec(i + 1);
      cur.pop_back();
    }
  };
  rec(0);
  return out;
}

bool Covers(const TupleSet& x, const TupleSet& u, const RankedAlgebra& ra) {
  TupleSet diff = (x - u) | (u - x);
  return ra.Dim(diff) < ra.Dim(x);
}

// A class-definable bijection from `from` onto `to`, found among unions of
// blocks of the product algebra.
std::optional<std::vector<std::pair<size_t, size_t>>> FindBijection(const TupleSet& from,
                                                                   const TupleSet& to,
                                                                   const RankedAlgebra& ra) {
  if (from.Count() != to.Count()) return std::nullopt;
  const DefinableAlgebra& alg = ra.algebra();
  std::vector<std::string> sorts = SortsOf(alg.vars());
  std::vector<std::string> doubled = sorts;
  doubled.insert(doubled.end(), sorts.begin(), sorts.end());
  DefinableAlgebra prod(alg.host(), alg.cls(), DefaultVariables(doubled));
  const TupleSpace& space = alg.space();
  size_t k = sorts.size();
  auto split = [&](size_t code) {
    auto t = prod.space().Decode(code);
    std::vector<int> l(t.begin(), t.begin() + k), r(t.begin() + k, t.end());
    return std::make_pair(space.Encode(l), space.Encode(r));
  };
  std::vector<std::vector<std::pair<size_t, size_t>>> blocks;
  for (size_t b = 0; b < prod.NumBlocks(); ++b) {
    std::vector<std::pair<size_t, size_t>> pairs;
    bool inside = true;
    for (size_t c : prod.Block(b).Elements()) {
      auto p = split(c);
      if (!from.Contains(p.first) || !to.Contains(p.second)) {
        inside = false;
        break;
      }
      pairs.push_back(p);
    }
    if (inside) blocks.push_back(std::move(pairs));
  }
  if (blocks.size() > 24) return std::nullopt;
  std::set<size_t> used_l, used_r;
  std::vector<std::pair<size_t, size_t>> graph;
  size_t need = from.Count();
  std::function<bool(size_t)> rec = [&](size_t i) -> bool {
    if (graph.size() == need) return true;
    if (i == blocks.size()) return false;
    bool clash = false;
    std::set<size_t> l, r;
    for (const auto& [a, b] : blocks[i]) {
      if (used_l.count(a) || used_r.count(b) || !l.insert(a).second || !r.insert(b).second) {
        clash = true;
        break;
      }
    }
    if (!clash) {
      for (const auto& p : blocks[i]) {
        used_l.insert(p.first);
        used_r.insert(p.second);
        graph.push_back(p);
      }
      if (rec(i + 1)) return true;
      for (const auto& p : blocks[i]) {
        used_l.erase(p.first);
        used_r.erase(p.second);
        graph.pop_back();
      }
    }
    return rec(i + 1);
  };
  if (rec(0)) return graph;
  return std::nullopt;
}

}  // namespace

std::optional<CellCover> DecomposePseudoCells(const TupleSet& x, const std::vector<TupleSet>& c,
                                              const RankedAlgebra& ra, CellMode mode) {
  if (x.Empty()) return CellCover{};
  if (mode == CellMode::kDecomposition) {
    if (c.size() > 20) throw Error("too many cells for an exhaustive cover search");
    for (size_t k = 1; k <= c.size(); ++k) {
      for (const auto& pick : Combinations(c.size(), k)) {
        TupleSet u(ra.universe());
        for (size_t i : pick) u = u | c[i];
        if (Covers(x, u, ra)) return CellCover{pick, {}};
      }
    }
    return std::nullopt;
  }
  // Patching: pieces are class subsets of X mapped bijectively onto cells.
  struct Piece {
    TupleSet part;
    size_t cell;
    std::vector<std::pair<size_t, size_t>> graph;
  };
  std::vector<Piece> pieces;
  for (const auto& part : ra.ClassSubsets(x)) {
    if (part.Empty()) continue;
    for (size_t j = 0; j < c.size(); ++j) {
      if (auto g = FindBijection(part, c[j], ra)) {
        pieces.push_back({part, j, *g});
        break;
      }
    }
  }
  if (pieces.size() > 20) pieces.resize(20);
  for (size_t k = 1; k <= pieces.size(); ++k) {
    for (const auto& pick : Combinations(pieces.size(), k)) {
      TupleSet u(ra.universe());
      for (size_t i : pick) u = u | pieces[i].part;
      if (!Covers(x, u, ra)) continue;
      CellCover cover;
      for (size_t i : pick) {
        cover.cells.push_back(pieces[i].cell);
        cover.bijections.push_back(pieces[i].graph);
      }
      return cover;
    }
  }
  return std::nullopt;
}

}  // namespace fusionkit
