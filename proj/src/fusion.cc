#include "fusionkit/fusion.h"

#include <algorithm>
#include <set>

#include "fusionkit/models.h"
#include "fusionkit/normal_forms.h"
#include "fusionkit/parse.h"

namespace fusionkit {

namespace {

TupleSet IntersectAll(const std::vector<TupleSet>& sets, size_t universe) {
  TupleSet out = TupleSet::Full(universe);
  for (const auto& s : sets) out = out & s;
  return out;
}

StructurePtr ShareReduct(const FiniteStructure& s, const Signature& sig) {
  return std::make_shared<const FiniteStructure>(Reduct(s, sig));
}

// Sort tuples of length k in lexicographic order of sort indices.
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

TupleSet MapTupleSet(const TupleSet& t, const TupleSpace& space, const std::vector<int>& sorts,
                     const ElementMap& m) {
  TupleSet out(t.universe());
  for (size_t c : t.Elements()) {
    auto tuple = space.Decode(c);
    for (size_t k = 0; k < tuple.size(); ++k) tuple[k] = m[sorts[k]][tuple[k]];
    out.Insert(space.Encode(tuple));
  }
  return out;
}

}  // namespace

bool VerifySeparation(const std::vector<TupleSet>& xs, const SeparationCertificate& cert) {
  if (xs.size() != cert.sets.size() || xs.empty()) return false;
  std::vector<TupleSet> big;
  for (size_t i = 0; i < xs.size(); ++i) {
    const TupleSet& sup = cert.sets[i].extension;
    if (sup.universe() != xs[i].universe() || !xs[i].SubsetOf(sup)) return false;
    big.push_back(sup);
  }
  return IntersectAll(big, xs[0].universe()).Empty();
}

std::optional<SeparationCertificate> FindSeparation(const std::vector<TupleSet>& xs,
                                                    const DefinableAlgebra& common) {
  if (xs.empty()) throw Error("separation needs a nonempty family");
  size_t n = common.space().Count();
  std::vector<TupleSet> hulls;
  for (const auto& x : xs) {
    if (x.universe() != n) throw Error("family member has the wrong arity");
    hulls.push_back(common.Hull(x));
  }
  if (!IntersectAll(hulls, n).Empty()) return std::nullopt;
  SeparationCertificate cert;
  for (const auto& h : hulls) cert.sets.push_back(common.Make(h));
  return cert;
}

std::optional<SeparationCertificate> FindSeparation(const std::vector<DefinableSet>& xs,
                                                    const DefinabilityClass& cls) {
  if (xs.empty()) throw Error("separation needs a nonempty family");
  for (const auto& x : xs) {
    if (x.sorts() != xs[0].sorts()) throw Error("family members differ in arity or sorts");
    if (x.host->signature().sorts() != xs[0].host->signature().sorts() ||
        x.extension.universe() != xs[0].extension.universe()) {
      throw Error("family members live on different hosts");
    }
  }
  StructurePtr host = ShareReduct(*xs[0].host, cls.signature);
  DefinableAlgebra alg(host, cls, xs[0].vars);
  std::vector<TupleSet> ext;
  for (const auto& x : xs) ext.push_back(x.extension);
  return FindSeparation(ext, alg);
}

InterpolativeOptions ResolveClasses(const LanguageFamily& fam, InterpolativeOptions opt) {
  if (opt.common.signature.sorts().empty()) opt.common.signature = fam.intersection();
  if (opt.per_index.empty()) {
    for (size_t i = 0; i < fam.size(); ++i) {
      DefinabilityClass c = opt.common;
      c.signature = fam.at(i).signature;
      opt.per_index.push_back(c);
    }
  }
  if (opt.per_index.size() != fam.size()) throw Error("need one class per language");
  for (size_t i = 0; i < fam.size(); ++i) {
    if (opt.per_index[i].signature.sorts().empty()) {
      opt.per_index[i].signature = fam.at(i).signature;
    }
  }
  return opt;
}

void ForEachArity(const FiniteStructure& s, const LanguageFamily& fam,
                  const InterpolativeOptions& opt,
                  const std::function<void(const ReductAlgebras&)>& visit) {
  std::vector<StructurePtr> reducts;
  for (size_t i = 0; i < fam.size(); ++i) {
    reducts.push_back(ShareReduct(s, opt.per_index[i].signature));
  }
  StructurePtr common = ShareReduct(s, opt.common.signature);
  for (int k = 1; k <= opt.max_arity; ++k) {
    for (const auto& sorts : SortTuples(s.signature().sorts(), k)) {
      auto vars = DefaultVariables(sorts);
      std::vector<DefinableAlgebra> per;
      for (size_t i = 0; i < fam.size(); ++i) per.emplace_back(reducts[i], opt.per_index[i], vars);
      visit(ReductAlgebras{vars, std::move(per), DefinableAlgebra(common, opt.common, vars)});
    }
  }
}

InterpolativityReport CheckInterpolative(const FiniteStructure& s, const LanguageFamily& fam,
                                         const InterpolativeOptions& options) {
  if (!(s.signature().Symbols() == fam.join().Symbols())) {
    throw Error("structure signature differs from the family's union language");
  }
  InterpolativeOptions opt = ResolveClasses(fam, options);
  InterpolativityReport report;
  if (opt.max_family <= 0 || fam.size() == 0) return report;
  std::vector<ElementMap> autos;
  if (opt.dedup) autos = Automorphisms(Reduct(s, opt.common.signature));
  int n = static_cast<int>(fam.size());
  ForEachArity(s, fam, opt, [&](const ReductAlgebras& algs) {
    size_t universe = algs.common.space().Count();
    std::vector<int> sort_idx;
    for (const auto& v : algs.vars) sort_idx.push_back(s.SortIndex(v.sort));
    std::set<std::pair<std::vector<int>, std::vector<TupleSet>>> seen;
    // Index subsets by size, then lexicographically.
    for (int size = 1; size <= std::min(opt.max_family, n); ++size) {
      std::vector<int> idx(size);
      for (int i = 0; i < size; ++i) idx[i] = i;
      while (true) {
        std::vector<const std::vector<DefinableSet>*> choices;
        size_t total = 1;
        for (int i : idx) {
          choices.push_back(&algs.per_index[i].Sets());
          total *= choices.back()->size();
        }
        report.families_checked += total;
        std::vector<size_t> pick(size, 0);
        std::vector<TupleSet> hulls(size);
        std::function<void(int, const TupleSet&, const TupleSet&)> rec =
            [&](int depth, const TupleSet& inter, const TupleSet& hull_inter) {
              if (hull_inter.Empty()) return;  // separated whatever follows
              if (depth == size) {
                if (!inter.Empty()) return;
                InterpolativeViolation v;
                v.indices = idx;
                for (int d = 0; d < size; ++d) v.sets.push_back((*choices[d])[pick[d]]);
                v.hulls = hulls;
                v.common_point = algs.common.space().Decode(hull_inter.Elements()[0]);
                if (opt.dedup) {
                  std::vector<TupleSet> exts;
                  for (const auto& x : v.sets) exts.push_back(x.extension);
                  std::vector<TupleSet> best = exts;
                  for (const auto& m : autos) {
                    std::vector<TupleSet> img;
                    for (const auto& e : exts) {
                      img.push_back(MapTupleSet(e, algs.common.space(), sort_idx, m));
                    }
                    best = std::min(best, img);
                  }
                  if (!seen.insert({idx, best}).second) return;
                }
                report.violations.push_back(std::move(v));
                return;
              }
              const auto& list = *choices[depth];
              for (size_t k = 0; k < list.size(); ++k) {
                pick[depth] = k;
                hulls[depth] = algs.common.Hull(list[k].extension);
                rec(depth + 1, inter & list[k].extension, hull_inter & hulls[depth]);
              }
            };
        rec(0, TupleSet::Full(universe), TupleSet::Full(universe));
        int pos = size - 1;
        while (pos >= 0 && idx[pos] == n - size + pos) --pos;
        if (pos < 0) break;
        ++idx[pos];
        for (int i = pos + 1; i < size; ++i) idx[i] = idx[i - 1] + 1;
      }
    }
  });
  return report;
}

std::vector<FiniteStructure> ClassModels(const Signature& sig, const Formula& f,
                                         const ModelClass& mc) {
  std::vector<FiniteStructure> out;
  std::set<std::string> seen;
  ForEachStructure(sig, mc.max_size, [&](const FiniteStructure& s) {
    if (Evaluate(s, f) && seen.insert(IsomorphismKey(s)).second) out.push_back(s);
    return true;
  }, 1);
  return out;
}

namespace {

// L-cap reducts of the models of f, one per isomorphism type.
std::vector<FiniteStructure> ReductsOfModels(const Signature& sig, const Formula& f,
                                             const Signature& common, const ModelClass& mc,
                                             std::set<std::string>* keys) {
  std::vector<FiniteStructure> out;
  ForEachStructure(sig, mc.max_size, [&](const FiniteStructure& s) {
    if (!Evaluate(s, f)) return true;
    FiniteStructure r = Reduct(s, common);
    if (keys->insert(IsomorphismKey(r)).second) out.push_back(std::move(r));
    return true;
  }, 1);
  return out;
}

bool Separates(const Formula& psi, const std::vector<FiniteStructure>& yes,
               const std::vector<FiniteStructure>& no) {
  for (const auto& s : yes) {
    if (!Evaluate(s, psi)) return false;
  }
  for (const auto& s : no) {
    if (Evaluate(s, psi)) return false;
  }
  return true;
}

}  // namespace

std::optional<Formula> PairwiseInterpolantBruteforce(const Formula& phi1, const Signature& sig1,
                                                     const Formula& phi2, const Signature& sig2,
                                                     const PairwiseOptions& opt) {
  CheckWellFormed(phi1, sig1);
  CheckWellFormed(phi2, sig2);
  Signature common = sig1.Intersection(sig2);
  std::set<std::string> keys1, keys2;
  auto r1 = ReductsOfModels(sig1, phi1, common, opt.models, &keys1);
  auto r2 = ReductsOfModels(sig2, phi2, common, opt.models, &keys2);
  for (const auto& k : keys1) {
    if (!keys2.count(k)) continue;
    // Two models with isomorphic common reducts amalgamate; find one directly.
    std::optional<FiniteStructure> joint;
    Formula both = Formula::And(phi1, phi2);
    ForEachStructure(sig1.Union(sig2), opt.models.max_size, [&](const FiniteStructure& s) {
      if (!Evaluate(s, both)) return true;
      joint = s;
      return false;
    }, 1);
    if (!joint) throw Error("internal: amalgam of isomorphic reducts not found");
    throw ConsistentPairError("sentences have a joint model", *joint);
  }
  auto levels = EnumerateFormulas(common, PoolVariables(common, opt.vars_per_sort), opt.max_rank,
                                  opt.max_size);
  for (const auto& level : levels) {
    for (const auto& psi : level) {
      if (!FreeVariables(psi).empty()) continue;
      if (Separates(psi, r1, r2)) return psi;
    }
  }
  for (int q = 0; q <= opt.max_hintikka_rank; ++q) {
    TypeInterner types(common);
    std::set<int> t1, t2;
    for (const auto& s : r1) t1.insert(types.TheoryOf(s, q));
    for (const auto& s : r2) t2.insert(types.TheoryOf(s, q));
    bool disjoint = std::none_of(t1.begin(), t1.end(), [&](int t) { return t2.count(t) > 0; });
    if (!disjoint) continue;
    std::vector<Formula> parts;
    for (int t : t1) parts.push_back(types.Characteristic(t, {}));
    Formula psi = Formula::Disjunction(parts);
    if (Separates(psi, r1, r2)) return psi;
  }
  return std::nullopt;
}

PairwiseOracle BruteforceOracle(PairwiseOptions opt) {
  return [opt](const Formula& a, const Signature& sa, const Formula& b, const Signature& sb) {
    return PairwiseInterpolantBruteforce(a, sa, b, sb, opt);
  };
}

namespace {

std::vector<Formula> NaryRec(const std::vector<Formula>& phis, const std::vector<Signature>& sigs,
                             const PairwiseOracle& oracle) {
  size_t n = phis.size();
  if (n == 1) return {Formula::False()};
  std::vector<Formula> head(phis.begin(), phis.end() - 1);
  Formula left = Formula::Conjunction(head);
  Signature left_sig = sigs[0];
  for (size_t i = 1; i + 1 < n; ++i) left_sig = left_sig.Union(sigs[i]);
  auto psi = oracle(left, left_sig, phis.back(), sigs.back());
  if (!psi) {
    throw OracleFailure("no interpolant for " + Print(left) + " and " + Print(phis.back()), left,
                        phis.back());
  }
  std::vector<Formula> rest;
  for (const auto& p : head) rest.push_back(Formula::And(p, Formula::Not(*psi)));
  std::vector<Signature> rest_sigs(sigs.begin(), sigs.end() - 1);
  auto theta = NaryRec(rest, rest_sigs, oracle);
  std::vector<Formula> out;
  for (const auto& t : theta) {
    out.push_back(t.kind() == Formula::Kind::kFalse ? *psi : Formula::Or(*psi, t));
  }
  out.push_back(Formula::Not(*psi));
  return out;
}

}  // namespace

InterpolantFamily NaryInterpolants(const std::vector<Formula>& phis, const LanguageFamily& fam,
                                   const PairwiseOracle& oracle) {
  if (phis.empty()) throw Error("need at least one sentence");
  if (phis.size() != fam.size()) throw Error("need one sentence per language");
  std::vector<Signature> sigs;
  for (size_t i = 0; i < fam.size(); ++i) {
    CheckWellFormed(phis[i], fam.at(i).signature);
    if (!FreeVariables(phis[i]).empty()) throw Error("not a sentence: " + Print(phis[i]));
    sigs.push_back(fam.at(i).signature);
  }
  return {NaryRec(phis, sigs, oracle)};
}

InterpolantCheck VerifyInterpolants(const std::vector<Formula>& phis,
                                    const InterpolantFamily& out, const LanguageFamily& fam,
                                    const ModelClass& mc) {
  InterpolantCheck check;
  for (size_t i = 0; i < phis.size(); ++i) {
    const Formula& g = out.formulas.at(i);
    for (const auto& sym : SymbolsOf(g)) {
      if (!fam.intersection().HasSymbol(sym)) {
        check.entailed = false;
        check.detail = "interpolant " + std::to_string(i) + " uses " + sym;
        return check;
      }
    }
    ForEachStructure(fam.at(i).signature, mc.max_size, [&](const FiniteStructure& s) {
      if (Evaluate(s, phis[i]) && !Evaluate(s, g)) {
        check.entailed = false;
        check.detail = "model of sentence " + std::to_string(i) + " falsifies its interpolant";
        return false;
      }
      return true;
    }, 1);
    if (!check.entailed) return check;
  }
  Formula all = Formula::Conjunction(out.formulas);
  ForEachStructure(fam.intersection(), mc.max_size, [&](const FiniteStructure& s) {
    if (Evaluate(s, all)) {
      check.inconsistent = false;
      check.detail = "interpolants have a joint model";
      return false;
    }
    return true;
  }, 1);
  return check;
}

namespace {

std::vector<ElementRef> AllElements(const FiniteStructure& s) {
  std::vector<ElementRef> out;
  for (int so = 0; so < static_cast<int>(s.signature().sorts().size()); ++so) {
    for (int i = 0; i < s.Size(so); ++i) out.push_back({so, i});
  }
  return out;
}

}  // namespace

JcpReport CheckJcp(const FiniteStructure& s, const LanguageFamily& fam, int max_base, int qrank,
                   ClosureMode mode) {
  JcpReport report;
  size_t n = fam.size();
  std::vector<FiniteStructure> reducts;
  std::vector<TypeInterner> interners;
  for (size_t i = 0; i < n; ++i) {
    reducts.push_back(Reduct(s, fam.at(i).signature));
    interners.emplace_back(fam.at(i).signature);
  }
  FiniteStructure common = Reduct(s, fam.intersection());
  TypeInterner common_types(fam.intersection());
  auto elements = AllElements(s);
  std::vector<size_t> pick;
  std::function<void(size_t)> rec = [&](size_t start) {
    ElementSet base;
    std::vector<ElementRef> tuple;
    for (size_t k : pick) {
      base.insert(elements[k]);
      tuple.push_back(elements[k]);
    }
    if (Ccl(s, fam, base, mode) == base) {
      ++report.bases_checked;
      for (int so = 0; so < static_cast<int>(s.signature().sorts().size()); ++so) {
        // common type -> per-index realized types and realized combinations
        std::map<int, std::vector<std::map<int, int>>> per;
        std::map<int, std::set<std::vector<int>>> joint;
        for (int e = 0; e < s.Size(so); ++e) {
          std::vector<ElementRef> t = {{so, e}};
          t.insert(t.end(), tuple.begin(), tuple.end());
          int c = common_types.TypeOf(common, t, qrank);
          auto& slot = per[c];
          slot.resize(n);
          std::vector<int> combo;
          for (size_t i = 0; i < n; ++i) {
            int ti = interners[i].TypeOf(reducts[i], t, qrank);
            slot[i].emplace(ti, e);
            combo.push_back(ti);
          }
          joint[c].insert(combo);
        }
        for (const auto& [c, slot] : per) {
          std::vector<std::map<int, int>::const_iterator> it;
          for (const auto& m : slot) it.push_back(m.begin());
          while (true) {
            std::vector<int> combo, realizers;
            for (const auto& x : it) {
              combo.push_back(x->first);
              realizers.push_back(x->second);
            }
            if (!joint[c].count(combo)) {
              report.failures.push_back({base, s.signature().sorts()[so], realizers});
            }
            size_t k = 0;
            while (k < n && ++it[k] == slot[k].end()) {
              it[k] = slot[k].begin();
              ++k;
            }
            if (k == n) break;
          }
        }
      }
    }
    if (static_cast<int>(pick.size()) >= max_base) return;
    for (size_t k = start; k < elements.size(); ++k) {
      pick.push_back(k);
      rec(k + 1);
      pick.pop_back();
    }
  };
  rec(0);
  return report;
}

std::optional<FiniteStructure> ProbeExtension(const FiniteStructure& s, const LanguageFamily& fam,
                                              const InterpolativeViolation& v, int max_new,
                                              int rank) {
  if (!s.signature().IsRelational()) throw Error("extension probe needs a relational signature");
  auto old = AllElements(s);
  std::vector<TypeInterner> interners;
  std::vector<int> old_types;
  for (size_t i = 0; i < fam.size(); ++i) {
    interners.emplace_back(fam.at(i).signature);
    old_types.push_back(interners[i].TypeOf(Reduct(s, fam.at(i).signature), old, rank));
  }
  for (int k = 1; k <= max_new; ++k) {
    FiniteStructure base = ExtendFresh(s, k);
    // Relation tuples touching a new element are free to choose.
    std::vector<std::pair<std::string, std::vector<int>>> free;
    for (const auto& [rel, args] : s.signature().relations()) {
      TupleSpace space(base, args);
      for (size_t c = 0; c < space.Count(); ++c) {
        auto t = space.Decode(c);
        for (size_t p = 0; p < t.size(); ++p) {
          if (t[p] >= s.Size(args[p])) {
            free.push_back({rel, t});
            break;
          }
        }
      }
    }
    if (free.size() > 20) break;
    for (size_t mask = 0; mask < (size_t{1} << free.size()); ++mask) {
      FiniteStructure ext = base;
      for (size_t b = 0; b < free.size(); ++b) {
        if (mask >> b & 1) ext.SetHolds(free[b].first, free[b].second, true);
      }
      bool elementary = true;
      for (size_t i = 0; i < fam.size() && elementary; ++i) {
        elementary =
            interners[i].TypeOf(Reduct(ext, fam.at(i).signature), old, rank) == old_types[i];
      }
      if (!elementary) continue;
      TupleSet meet;
      for (size_t j = 0; j < v.sets.size(); ++j) {
        const auto& x = v.sets[j];
        TupleSet e = ExtensionOf(ext, x.formula, x.vars, x.params);
        meet = j == 0 ? e : (meet & e);
      }
      if (!meet.Empty()) return ext;
    }
  }
  return std::nullopt;
}

}  // namespace fusionkit
