#include "fusionkit/normal_forms.h"

#include <algorithm>
#include <limits>
#include <set>

#include "fusionkit/definable.h"
#include "fusionkit/parse.h"

namespace fusionkit {

void WitnessNames::Reserve(const Formula& f) {
  for (const auto& n : VariableNames(f)) names_.Reserve(n);
}

namespace {

using K = Formula::Kind;

void AppendConjuncts(const Formula& f, std::vector<Formula>& out) {
  if (f.kind() == K::kAnd) {
    AppendConjuncts(f.left(), out);
    AppendConjuncts(f.right(), out);
  } else if (f.kind() != K::kTrue) {
    out.push_back(f);
  }
}

// Replaces non-variable arguments by witnesses carrying their flat forms.
std::vector<Term> FlattenArgs(const std::vector<Term>& args, const Signature& sig,
                              WitnessNames& names, std::vector<Variable>& ys,
                              std::vector<Formula>& lits) {
  std::vector<Term> out;
  for (const auto& a : args) {
    if (a.is_var()) {
      out.push_back(a);
      continue;
    }
    Variable z = names.Next(SortOf(a, sig));
    EFlatFormula sub = FlattenTerm(a, z, sig, &names);
    ys.push_back(z);
    ys.insert(ys.end(), sub.y.begin(), sub.y.end());
    AppendConjuncts(sub.matrix, lits);
    out.push_back(Term::Var(z));
  }
  return out;
}

EFlatFormula Finish(std::vector<Variable> ys, const std::vector<Formula>& lits,
                    std::string trace) {
  EFlatFormula out;
  out.y = std::move(ys);
  out.matrix = Formula::Conjunction(lits);
  std::set<Variable> witnesses(out.y.begin(), out.y.end());
  for (const auto& v : FreeVariableList(out.matrix)) {
    if (!witnesses.count(v)) out.x.push_back(v);
  }
  out.trace.push_back(std::move(trace));
  return out;
}

WitnessNames NamesAvoiding(const std::vector<Formula>& fs) {
  WitnessNames names;
  for (const auto& f : fs) names.Reserve(f);
  return names;
}

}  // namespace

std::vector<Formula> Conjuncts(const Formula& f) {
  std::vector<Formula> out;
  AppendConjuncts(f, out);
  return out;
}

EFlatFormula FlattenTerm(const Term& t, const Variable& result, const Signature& sig,
                         WitnessNames* names) {
  if (SortOf(t, sig) != result.sort) {
    throw Error("term " + Print(t) + " has sort " + SortOf(t, sig) + ", not " + result.sort);
  }
  WitnessNames local;
  if (!names) {
    local = NamesAvoiding({Formula::Equals(t, Term::Var(result))});
    names = &local;
  }
  std::vector<Variable> ys;
  std::vector<Formula> lits;
  if (t.is_var()) {
    lits.push_back(Formula::Equals(t, Term::Var(result)));
  } else {
    auto args = FlattenArgs(t.args, sig, *names, ys, lits);
    lits.push_back(Formula::Equals(Term::Apply(t.symbol, args), Term::Var(result)));
  }
  return Finish(ys, lits, "flatten_term " + Print(t));
}

EFlatFormula LiteralToEFlat(const Formula& lit, const Signature& sig, WitnessNames* names) {
  bool neg = lit.kind() == K::kNot;
  const Formula& atom = neg ? lit.operand() : lit;
  if (!atom.IsAtomic()) throw Error("not a literal: " + Print(lit));
  std::string trace = "literal " + Print(lit);
  if (IsAtomicFlat(atom)) return Finish({}, {lit}, trace);
  WitnessNames local;
  if (!names) {
    local = NamesAvoiding({lit});
    names = &local;
  }
  std::vector<Variable> ys;
  std::vector<Formula> lits;
  auto wrap = [&](Formula f) { return neg ? Formula::Not(f) : f; };
  if (atom.kind() == K::kRelation) {
    auto args = FlattenArgs(atom.terms(), sig, *names, ys, lits);
    lits.push_back(wrap(Formula::Relation(atom.symbol(), args)));
    return Finish(ys, lits, trace);
  }
  Term lhs = atom.terms()[0];
  Term rhs = atom.terms()[1];
  if (lhs.is_var()) std::swap(lhs, rhs);
  if (!rhs.is_var()) {
    auto r = FlattenArgs({rhs}, sig, *names, ys, lits);
    rhs = r[0];
  }
  auto args = FlattenArgs(lhs.args, sig, *names, ys, lits);
  lits.push_back(wrap(Formula::Equals(Term::Apply(lhs.symbol, args), rhs)));
  return Finish(ys, lits, trace);
}

EFlatFormula EFlatConjoin(const std::vector<EFlatFormula>& fs, WitnessNames* names) {
  WitnessNames local;
  if (!names) {
    std::vector<Formula> all;
    for (const auto& f : fs) all.push_back(f.ToFormula());
    local = NamesAvoiding(all);
    names = &local;
  }
  // Names used by each input, to decide which witnesses must be renamed.
  std::vector<std::set<std::string>> used(fs.size());
  for (size_t i = 0; i < fs.size(); ++i) used[i] = VariableNames(fs[i].matrix);
  std::set<std::string> taken;
  std::vector<Variable> ys;
  std::vector<Formula> lits;
  std::vector<std::string> trace;
  for (size_t i = 0; i < fs.size(); ++i) {
    std::map<Variable, Variable> rename;
    for (const auto& y : fs[i].y) {
      bool clash = taken.count(y.name) > 0;
      for (size_t j = 0; j < fs.size() && !clash; ++j) {
        if (j != i && used[j].count(y.name)) clash = true;
      }
      Variable target = clash ? names->Next(y.sort) : y;
      if (clash) rename[y] = target;
      taken.insert(target.name);
      ys.push_back(target);
    }
    AppendConjuncts(rename.empty() ? fs[i].matrix : Rename(fs[i].matrix, rename), lits);
    trace.insert(trace.end(), fs[i].trace.begin(), fs[i].trace.end());
  }
  EFlatFormula out = Finish(ys, lits, "conjoin " + std::to_string(fs.size()));
  out.trace.insert(out.trace.begin(), trace.begin(), trace.end());
  return out;
}

namespace {

Formula Nnf(const Formula& f, bool negate) {
  switch (f.kind()) {
    case K::kTrue:
      return negate ? Formula::False() : f;
    case K::kFalse:
      return negate ? Formula::True() : f;
    case K::kEquals:
    case K::kRelation:
      return negate ? Formula::Not(f) : f;
    case K::kNot:
      return Nnf(f.operand(), !negate);
    case K::kAnd:
      return negate ? Formula::Or(Nnf(f.left(), true), Nnf(f.right(), true))
                    : Formula::And(Nnf(f.left(), false), Nnf(f.right(), false));
    case K::kOr:
      return negate ? Formula::And(Nnf(f.left(), true), Nnf(f.right(), true))
                    : Formula::Or(Nnf(f.left(), false), Nnf(f.right(), false));
    case K::kImplies:
      return negate ? Formula::And(Nnf(f.left(), false), Nnf(f.right(), true))
                    : Formula::Or(Nnf(f.left(), true), Nnf(f.right(), false));
    default:
      throw Error("formula is not quantifier-free: " + Print(f));
  }
}

using Clause = std::vector<Formula>;

std::vector<Clause> DnfRec(const Formula& f, std::optional<size_t> cap) {
  switch (f.kind()) {
    case K::kTrue:
      return {Clause{}};
    case K::kFalse:
      return {};
    case K::kOr: {
      auto a = DnfRec(f.left(), cap);
      auto b = DnfRec(f.right(), cap);
      a.insert(a.end(), b.begin(), b.end());
      if (cap && a.size() > *cap) {
        throw Error("DNF exceeds " + std::to_string(*cap) + " disjuncts");
      }
      return a;
    }
    case K::kAnd: {
      auto a = DnfRec(f.left(), cap);
      auto b = DnfRec(f.right(), cap);
      if (cap && a.size() * b.size() > *cap) {
        throw Error("DNF exceeds " + std::to_string(*cap) + " disjuncts");
      }
      std::vector<Clause> out;
      for (const auto& x : a) {
        for (const auto& y : b) {
          Clause c = x;
          c.insert(c.end(), y.begin(), y.end());
          out.push_back(std::move(c));
        }
      }
      return out;
    }
    default:
      return {Clause{f}};
  }
}

}  // namespace

std::vector<std::vector<Formula>> Dnf(const Formula& f, std::optional<size_t> max_disjuncts) {
  std::vector<Clause> raw = DnfRec(Nnf(f, false), max_disjuncts);
  std::vector<Clause> out;
  std::set<std::vector<std::string>> seen;
  for (const auto& c : raw) {
    Clause lits;
    std::set<std::string> keys;
    bool contradictory = false;
    for (const auto& l : c) {
      std::string key = Print(l);
      if (!keys.insert(key).second) continue;
      Formula opposite = l.kind() == K::kNot ? l.operand() : Formula::Not(l);
      if (keys.count(Print(opposite))) contradictory = true;
      lits.push_back(l);
    }
    if (contradictory) continue;
    std::vector<std::string> sorted(keys.begin(), keys.end());
    if (!seen.insert(sorted).second) continue;
    out.push_back(std::move(lits));
  }
  return out;
}

Formula DnfFormula(const Formula& f, std::optional<size_t> max_disjuncts) {
  std::vector<Formula> ds;
  for (const auto& c : Dnf(f, max_disjuncts)) ds.push_back(Formula::Conjunction(c));
  return Formula::Disjunction(ds);
}

std::vector<EFlatFormula> QfToEFlatDisjunction(const Formula& f, const Signature& sig,
                                               std::optional<size_t> max_disjuncts) {
  if (!IsQuantifierFree(f)) throw Error("formula is not quantifier-free: " + Print(f));
  std::vector<EFlatFormula> out;
  for (const auto& clause : Dnf(f, max_disjuncts)) {
    WitnessNames names = NamesAvoiding({f});
    std::vector<EFlatFormula> parts;
    for (const auto& lit : clause) parts.push_back(LiteralToEFlat(lit, sig, &names));
    out.push_back(EFlatConjoin(parts, &names));
  }
  return out;
}

namespace {

Formula FlattenAtomsRec(const Formula& f, const Signature& sig, WitnessNames& names) {
  switch (f.kind()) {
    case K::kEquals:
    case K::kRelation:
      return LiteralToEFlat(f, sig, &names).ToFormula();
    case K::kNot:
      return Formula::Not(FlattenAtomsRec(f.operand(), sig, names));
    case K::kAnd:
      return Formula::And(FlattenAtomsRec(f.left(), sig, names),
                          FlattenAtomsRec(f.right(), sig, names));
    case K::kOr:
      return Formula::Or(FlattenAtomsRec(f.left(), sig, names),
                         FlattenAtomsRec(f.right(), sig, names));
    case K::kImplies:
      return Formula::Implies(FlattenAtomsRec(f.left(), sig, names),
                              FlattenAtomsRec(f.right(), sig, names));
    case K::kExists:
      return Formula::Exists(f.bound(), FlattenAtomsRec(f.body(), sig, names));
    case K::kForall:
      return Formula::Forall(f.bound(), FlattenAtomsRec(f.body(), sig, names));
    default:
      return f;
  }
}

}  // namespace

Formula FlattenAtoms(const Formula& f, const Signature& sig) {
  WitnessNames names = NamesAvoiding({f});
  return FlattenAtomsRec(f, sig, names);
}

BoundedFormula BeConjoin(const std::vector<BoundedFormula>& fs, const std::string& scope) {
  BoundedFormula out;
  out.scope = scope;
  for (const auto& f : fs) {
    if (!IsQuantifierFree(f.matrix)) throw Error("b.e. matrix is not quantifier-free");
    if (out.scope.empty()) out.scope = f.scope;
    if (!f.scope.empty() && f.scope != out.scope) {
      throw Error("bound scopes differ: " + out.scope + " and " + f.scope);
    }
  }
  std::vector<EFlatFormula> shells;
  for (const auto& f : fs) {
    EFlatFormula e;
    e.y = f.y;
    e.matrix = f.matrix;
    shells.push_back(e);
    out.bound *= f.bound;
  }
  EFlatFormula joined = EFlatConjoin(shells);
  out.y = joined.y;
  out.matrix = joined.matrix;
  return out;
}

namespace {

struct WitnessSearch {
  const FiniteStructure& s;
  const std::vector<Variable>& y;
  std::vector<std::vector<Formula>> due;  // conjuncts checkable once y[i] is bound
  Assignment a;
  int limit;
  int found = 0;

  void Run(size_t i) {
    if (found >= limit) return;
    if (i == y.size()) {
      ++found;
      return;
    }
    int n = s.Size(y[i].sort);
    for (int v = 0; v < n && found < limit; ++v) {
      a[y[i]] = v;
      bool ok = true;
      for (const auto& c : due[i + 1]) {
        if (!Evaluate(s, c, a)) {
          ok = false;
          break;
        }
      }
      if (ok) Run(i + 1);
    }
    a.erase(y[i]);
  }
};

}  // namespace

int CountWitnesses(const FiniteStructure& s, const Formula& matrix, const std::vector<Variable>& y,
                   const Assignment& a, int limit) {
  WitnessSearch w{s, y, std::vector<std::vector<Formula>>(y.size() + 1), a, limit};
  std::map<Variable, size_t> pos;
  for (size_t i = 0; i < y.size(); ++i) pos[y[i]] = i + 1;
  for (const auto& c : Conjuncts(matrix)) {
    size_t last = 0;
    for (const auto& v : FreeVariables(c)) {
      auto it = pos.find(v);
      if (it != pos.end()) last = std::max(last, it->second);
    }
    w.due[last].push_back(c);
  }
  for (const auto& c : w.due[0]) {
    if (!Evaluate(s, c, w.a)) return 0;
  }
  w.Run(0);
  return w.found;
}

bool HoldsExists(const FiniteStructure& s, const Formula& matrix, const std::vector<Variable>& y,
                 const Assignment& a) {
  return CountWitnesses(s, matrix, y, a, 1) > 0;
}

int MaxWitnesses(const Formula& matrix, const std::vector<Variable>& x,
                 const std::vector<Variable>& y, const std::vector<FiniteStructure>& models) {
  int best = 0;
  for (const auto& m : models) {
    TupleSpace xs(m, SortsOf(x));
    for (size_t c = 0; c < xs.Count(); ++c) {
      auto tuple = xs.Decode(c);
      Assignment a;
      for (size_t i = 0; i < x.size(); ++i) a[x[i]] = tuple[i];
      best = std::max(best, CountWitnesses(m, matrix, y, a, std::numeric_limits<int>::max()));
    }
  }
  return best;
}

bool CheckBound(const BoundedFormula& f, const std::vector<FiniteStructure>& models) {
  std::set<Variable> ys(f.y.begin(), f.y.end());
  std::vector<Variable> x;
  for (const auto& v : FreeVariableList(f.matrix)) {
    if (!ys.count(v)) x.push_back(v);
  }
  return MaxWitnesses(f.matrix, x, f.y, models) <= f.bound;
}

std::map<std::string, Formula> SplitFlat(const Formula& f, const LanguageFamily& fam,
                                         const std::vector<std::string>& duplicate_into) {
  if (!IsFlat(f)) throw Error("formula is not flat: " + Print(f));
  std::map<std::string, std::vector<Formula>> buckets;
  const auto common = fam.intersection().Symbols();
  for (const auto& lit : Conjuncts(f)) {
    const Formula& atom = lit.kind() == K::kNot ? lit.operand() : lit;
    std::string symbol;
    if (atom.kind() == K::kRelation) {
      symbol = atom.symbol();
    } else if (atom.kind() == K::kEquals && !atom.terms()[0].is_var()) {
      symbol = atom.terms()[0].symbol;
    }
    std::string key = kCommonBucket;
    if (!symbol.empty() && !common.count(symbol)) {
      key.clear();
      for (const auto& l : fam.languages()) {
        if (l.signature.HasSymbol(symbol)) {
          key = l.label;
          break;
        }
      }
      if (key.empty()) throw Error("symbol " + symbol + " is in no language of the family");
    }
    buckets[key].push_back(lit);
  }
  for (const auto& label : duplicate_into) {
    if (fam.IndexOf(label) < 0) throw Error("unknown language " + label);
    auto it = buckets.find(kCommonBucket);
    if (it == buckets.end()) continue;
    auto& dst = buckets[label];
    dst.insert(dst.end(), it->second.begin(), it->second.end());
  }
  std::map<std::string, Formula> out;
  for (const auto& [k, lits] : buckets) out[k] = Formula::Conjunction(lits);
  return out;
}

Relationalization::Relationalization(const Theory& t) : source_(t) {
  const Signature& sig = t.signature;
  Signature out;
  for (const auto& s : sig.sorts()) out.AddSort(s);
  for (const auto& [n, args] : sig.relations()) out.AddRelation(n, args);
  for (const auto& [n, f] : sig.functions()) {
    std::string name = "R_" + n;
    while (sig.HasSymbol(name) || out.HasSymbol(name)) name += "_";
    relation_for_[n] = name;
    auto args = f.args;
    args.push_back(f.result);
    out.AddRelation(name, args);
  }
  theory_.signature = out;
  for (const auto& a : t.axioms) theory_.axioms.push_back(Translate(a));
  for (const auto& [n, f] : sig.functions()) {
    std::vector<Variable> xs;
    std::vector<Term> args;
    for (size_t i = 0; i < f.args.size(); ++i) {
      xs.push_back({"x" + std::to_string(i), f.args[i]});
      args.push_back(Term::Var(xs.back()));
    }
    Variable y{"y", f.result};
    auto graph_args = args;
    graph_args.push_back(Term::Var(y));
    Formula graph = Formula::Relation(relation_for_[n], graph_args);
    Formula total = Formula::And(Formula::Exists(y, graph), Formula::ExistsAtMost(1, y, graph));
    theory_.axioms.push_back(Formula::Forall(xs, total));
  }
}

namespace {

Formula ReplaceGraphs(const Formula& f, const std::map<std::string, std::string>& rel) {
  switch (f.kind()) {
    case K::kEquals: {
      const Term& a = f.terms()[0];
      if (a.is_var()) return f;
      auto args = a.args;
      args.push_back(f.terms()[1]);
      return Formula::Relation(rel.at(a.symbol), args);
    }
    case K::kNot:
      return Formula::Not(ReplaceGraphs(f.operand(), rel));
    case K::kAnd:
      return Formula::And(ReplaceGraphs(f.left(), rel), ReplaceGraphs(f.right(), rel));
    case K::kOr:
      return Formula::Or(ReplaceGraphs(f.left(), rel), ReplaceGraphs(f.right(), rel));
    case K::kImplies:
      return Formula::Implies(ReplaceGraphs(f.left(), rel), ReplaceGraphs(f.right(), rel));
    case K::kExists:
      return Formula::Exists(f.bound(), ReplaceGraphs(f.body(), rel));
    case K::kForall:
      return Formula::Forall(f.bound(), ReplaceGraphs(f.body(), rel));
    default:
      return f;
  }
}

}  // namespace

Formula Relationalization::Translate(const Formula& f) const {
  if (relation_for_.empty()) return f;
  return ReplaceGraphs(FlattenAtoms(f, source_.signature), relation_for_);
}

FiniteStructure Relationalization::TranslateStructure(const FiniteStructure& s) const {
  FiniteStructure out(s.name(), theory_.signature);
  for (const auto& sort : theory_.signature.sorts()) out.SetUniverse(sort, s.Universe(sort));
  for (const auto& [n, _] : source_.signature.relations()) {
    out.SetRelationTable(n, s.relation(n).table);
  }
  for (const auto& [n, f] : source_.signature.functions()) {
    const auto& t = s.function(n);
    TupleSpace space(s, f.args);
    for (size_t c = 0; c < space.Count(); ++c) {
      auto tuple = space.Decode(c);
      tuple.push_back(t.table[c]);
      out.SetHolds(relation_for_.at(n), tuple, true);
    }
  }
  return out;
}

namespace {

void Collect(const Formula& f, K kind, std::vector<Formula>& out) {
  if (f.kind() == kind) {
    Collect(f.left(), kind, out);
    Collect(f.right(), kind, out);
  } else {
    out.push_back(f);
  }
}

Formula CanonRec(const Formula& f, int depth) {
  switch (f.kind()) {
    case K::kEquals: {
      Term a = f.terms()[0], b = f.terms()[1];
      if (a == b) return Formula::True();
      if (Print(b) < Print(a)) std::swap(a, b);
      return Formula::Equals(a, b);
    }
    case K::kNot: {
      Formula a = CanonRec(f.operand(), depth);
      if (a.kind() == K::kNot) return a.operand();
      if (a.kind() == K::kTrue) return Formula::False();
      if (a.kind() == K::kFalse) return Formula::True();
      return Formula::Not(a);
    }
    case K::kImplies:
      return CanonRec(Formula::Or(Formula::Not(f.left()), f.right()), depth);
    case K::kAnd:
    case K::kOr: {
      K kind = f.kind();
      K unit = kind == K::kAnd ? K::kTrue : K::kFalse;
      K zero = kind == K::kAnd ? K::kFalse : K::kTrue;
      std::vector<Formula> raw;
      Collect(f, kind, raw);
      std::vector<Formula> parts;
      for (const auto& r : raw) Collect(CanonRec(r, depth), kind, parts);
      std::map<std::string, Formula> sorted;
      for (const auto& p : parts) {
        if (p.kind() == zero) return p;
        if (p.kind() == unit) continue;
        sorted.emplace(Print(p), p);
      }
      std::vector<Formula> list;
      for (const auto& [k, p] : sorted) list.push_back(p);
      return kind == K::kAnd ? Formula::Conjunction(list) : Formula::Disjunction(list);
    }
    case K::kExists:
    case K::kForall: {
      Variable b{"_b" + std::to_string(depth), f.bound().sort};
      Formula body = f.bound() == b ? f.body() : Substitute(f.body(), {{f.bound(), Term::Var(b)}});
      body = CanonRec(body, depth + 1);
      return f.kind() == K::kExists ? Formula::Exists(b, body) : Formula::Forall(b, body);
    }
    default:
      return f;
  }
}

}  // namespace

Formula Canonicalize(const Formula& f) { return CanonRec(f, 0); }

std::vector<Variable> PoolVariables(const Signature& sig, int per_sort) {
  static const char* kNames[] = {"x", "y", "z", "u", "v", "w"};
  std::vector<Variable> out;
  for (const auto& s : sig.sorts()) {
    for (int k = 0; k < per_sort; ++k) {
      if (sig.sorts().size() == 1 && k < 6) {
        out.push_back({kNames[k], s});
      } else {
        out.push_back({"x" + std::to_string(k) + "_" + s, s});
      }
    }
  }
  return out;
}

std::vector<std::vector<Formula>> EnumerateFormulas(const Signature& sig,
                                                    const std::vector<Variable>& pool, int qrank,
                                                    int max_size, int term_depth) {
  std::set<std::string> seen;
  std::vector<std::vector<Formula>> levels(std::max(max_size, 0) + 1);
  auto add = [&](const Formula& raw, int level) {
    Formula c = Canonicalize(raw);
    if (!seen.insert(Print(c)).second) return;
    levels[level].push_back(c);
  };
  if (max_size >= 1) {
    add(Formula::True(), 1);
    add(Formula::False(), 1);
    for (const auto& a : AtomicFormulas(sig, pool, term_depth)) add(a, 1);
  }
  for (int k = 2; k <= max_size; ++k) {
    for (const auto& g : levels[k - 1]) add(Formula::Not(g), k);
    for (int a = 1; a + 1 < k; ++a) {
      int b = k - 1 - a;
      if (a > b) break;
      for (const auto& g : levels[a]) {
        for (const auto& h : levels[b]) {
          add(Formula::And(g, h), k);
          add(Formula::Or(g, h), k);
        }
      }
    }
    for (const auto& g : levels[k - 1]) {
      if (QuantifierRank(g) >= qrank) continue;
      for (const auto& v : pool) {
        add(Formula::Exists(v, g), k);
        add(Formula::Forall(v, g), k);
      }
    }
  }
  return levels;
}

Morleyization::Morleyization(const LanguageFamily& fam, const std::vector<Theory>& theories,
                             int qrank, MorleyOptions opt)
    : base_(fam), qrank_(qrank) {
  if (qrank < 0) throw Error("negative quantifier rank");
  if (!theories.empty() && theories.size() != fam.size()) {
    throw Error("need one theory per language");
  }
  std::vector<Language> expanded;
  for (size_t i = 0; i < fam.size(); ++i) {
    const Language& lang = fam.at(i);
    const Signature& sig = lang.signature;
    auto levels = EnumerateFormulas(sig, PoolVariables(sig, opt.vars_per_sort), qrank,
                                    opt.max_size, opt.term_depth);
    Signature esig = sig;
    int counter = 0;
    for (const auto& level : levels) {
      for (const auto& c : level) {
        if (c.IsAtomic()) continue;
        Definition d;
        d.label = lang.label;
        d.args = FreeVariableList(c);
        d.formula = c;
        do {
          d.symbol = "D_" + lang.label + "_" + std::to_string(counter++);
        } while (fam.join().HasSymbol(d.symbol));
        esig.AddRelation(d.symbol, SortsOf(d.args));
        index_[{lang.label, Print(c)}] = definitions_.size();
        definitions_.push_back(std::move(d));
      }
    }
    Theory th;
    th.signature = esig;
    if (!theories.empty()) th.axioms = theories[i].axioms;
    expanded.push_back({lang.label, esig});
    theories_[lang.label] = std::move(th);
  }
  for (const auto& d : definitions_) {
    std::vector<Term> args;
    for (const auto& v : d.args) args.push_back(Term::Var(v));
    Formula ax = Formula::Forall(d.args, Formula::Iff(Formula::Relation(d.symbol, args), d.formula));
    theories_[d.label].axioms.push_back(ax);
  }
  expanded_ = LanguageFamily(expanded);
}

std::vector<Formula> Morleyization::Axioms() const {
  std::vector<Formula> out;
  for (const auto& [label, th] : theories_) out.insert(out.end(), th.axioms.begin(), th.axioms.end());
  return out;
}

Formula Morleyization::Atomize(const std::string& label, const Formula& f) const {
  if (QuantifierRank(f) > qrank_) throw Error("formula exceeds the Morleyization rank");
  Formula c = Canonicalize(f);
  if (c.IsAtomic()) return c;
  auto it = index_.find({label, Print(c)});
  if (it == index_.end()) throw Error("formula outside the Morleyized range: " + Print(f));
  const Definition& d = definitions_[it->second];
  std::vector<Term> args;
  for (const auto& v : d.args) args.push_back(Term::Var(v));
  return Formula::Relation(d.symbol, args);
}

FiniteStructure Morleyization::ExpandStructure(const FiniteStructure& s) const {
  FiniteStructure out(s.name(), expanded_.join());
  for (const auto& sort : expanded_.join().sorts()) out.SetUniverse(sort, s.Universe(sort));
  for (const auto& [n, _] : base_.join().relations()) out.SetRelationTable(n, s.relation(n).table);
  for (const auto& [n, _] : base_.join().functions()) out.SetFunctionTable(n, s.function(n).table);
  for (const auto& d : definitions_) {
    TupleSet ext = ExtensionOf(s, d.formula, d.args);
    std::vector<uint8_t> table(ext.universe(), 0);
    for (size_t c : ext.Elements()) table[c] = 1;
    out.SetRelationTable(d.symbol, table);
  }
  return out;
}

}  // namespace fusionkit
