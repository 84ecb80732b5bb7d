#include "fusionkit/definable.h"

#include <algorithm>
#include <sstream>

#include "fusionkit/parse.h"

namespace fusionkit {

ParameterSpec ParameterSpec::Parse(const std::string& text, const Signature& sig) {
  if (text.empty() || text == "none") return None();
  if (text == "all") return All();
  ParameterSpec out;
  out.mode = Mode::kList;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    if (item.empty()) continue;
    auto colon = item.find(':');
    if (colon != std::string::npos) {
      out.elements.emplace_back(item.substr(0, colon), item.substr(colon + 1));
    } else {
      if (sig.sorts().size() != 1) {
        throw Error("parameter " + item + " needs a sort prefix (SORT:id)");
      }
      out.elements.emplace_back(sig.sorts()[0], item);
    }
  }
  return out;
}

std::vector<ElementRef> ResolveParameters(const FiniteStructure& s, const ParameterSpec& p) {
  std::vector<ElementRef> out;
  switch (p.mode) {
    case ParameterSpec::Mode::kNone:
      break;
    case ParameterSpec::Mode::kAll:
      for (size_t so = 0; so < s.signature().sorts().size(); ++so) {
        for (int i = 0; i < s.Size(static_cast<int>(so)); ++i) {
          out.push_back({static_cast<int>(so), i});
        }
      }
      break;
    case ParameterSpec::Mode::kList:
      for (const auto& [sort, id] : p.elements) {
        ElementRef e{s.SortIndex(sort), s.ElementIndex(sort, id)};
        if (std::find(out.begin(), out.end(), e) == out.end()) out.push_back(e);
      }
      break;
  }
  return out;
}

Variable ParameterVariable(const FiniteStructure& s, ElementRef e) {
  return Variable{"_p" + std::to_string(e.sort) + "_" + std::to_string(e.index),
                  s.signature().sorts()[e.sort]};
}

std::string DefinableSet::ToString() const {
  std::string out = Print(formula);
  if (!params.empty()) out += " [" + PrintAssignment(*host, params) + "]";
  return out;
}

DefinableSet MakeDefinable(StructurePtr host, Formula f, std::vector<Variable> vars,
                           Assignment params) {
  DefinableSet d;
  d.extension = ExtensionOf(*host, f, vars, params);
  d.host = std::move(host);
  d.formula = std::move(f);
  d.vars = std::move(vars);
  d.params = std::move(params);
  return d;
}

namespace {

void CheckCompatible(const DefinableSet& a, const DefinableSet& b) {
  if (a.host != b.host && !(*a.host == *b.host)) {
    throw Error("definable sets live in different structures");
  }
  if (a.vars != b.vars) throw Error("definable sets have different variables");
}

Assignment MergeParams(const Assignment& a, const Assignment& b) {
  Assignment out = a;
  for (const auto& [v, x] : b) {
    auto it = out.find(v);
    if (it != out.end() && it->second != x) {
      throw Error("conflicting parameter " + v.name);
    }
    out[v] = x;
  }
  return out;
}

DefinableSet Combine(const DefinableSet& a, const DefinableSet& b, Formula f, TupleSet ext) {
  CheckCompatible(a, b);
  DefinableSet d;
  d.host = a.host;
  d.formula = std::move(f);
  d.vars = a.vars;
  d.params = MergeParams(a.params, b.params);
  d.extension = std::move(ext);
  return d;
}

}  // namespace

DefinableSet Union(const DefinableSet& a, const DefinableSet& b) {
  return Combine(a, b, Formula::Or(a.formula, b.formula), a.extension | b.extension);
}

DefinableSet Intersect(const DefinableSet& a, const DefinableSet& b) {
  return Combine(a, b, Formula::And(a.formula, b.formula), a.extension & b.extension);
}

DefinableSet Difference(const DefinableSet& a, const DefinableSet& b) {
  return Combine(a, b, Formula::And(a.formula, Formula::Not(b.formula)),
                 a.extension - b.extension);
}

DefinableSet Complement(const DefinableSet& a) {
  DefinableSet d = a;
  d.formula = Formula::Not(a.formula);
  d.extension = a.extension.Complement();
  return d;
}

DefinableSet EmptySet(StructurePtr host, std::vector<Variable> vars) {
  return MakeDefinable(std::move(host), Formula::False(), std::move(vars));
}

DefinableSet FullSet(StructurePtr host, std::vector<Variable> vars) {
  return MakeDefinable(std::move(host), Formula::True(), std::move(vars));
}

DefinableSet TabulatedSet(StructurePtr host, std::vector<Variable> vars, const TupleSet& ext) {
  TupleSpace space(*host, SortsOf(vars));
  std::vector<Formula> disjuncts;
  Assignment params;
  for (size_t code : ext.Elements()) {
    auto tuple = space.Decode(code);
    std::vector<Formula> conj;
    for (size_t i = 0; i < vars.size(); ++i) {
      ElementRef e{host->SortIndex(vars[i].sort), tuple[i]};
      Variable p = ParameterVariable(*host, e);
      params[p] = e.index;
      conj.push_back(Formula::Equals(Term::Var(vars[i]), Term::Var(p)));
    }
    disjuncts.push_back(Formula::Conjunction(conj));
  }
  DefinableSet d;
  d.host = std::move(host);
  d.formula = Formula::Disjunction(disjuncts);
  d.vars = std::move(vars);
  d.params = std::move(params);
  d.extension = ext;
  return d;
}

std::vector<Variable> DefaultVariables(const std::vector<std::string>& sorts) {
  std::vector<Variable> out;
  for (size_t i = 0; i < sorts.size(); ++i) {
    out.push_back(Variable{sorts.size() == 1 ? "x" : "x" + std::to_string(i), sorts[i]});
  }
  return out;
}

std::vector<Formula> AtomicFormulas(const Signature& sig, const std::vector<Variable>& vars,
                                    int term_depth) {
  std::map<std::string, std::vector<Term>> by_sort;
  std::vector<Term> all;
  for (const auto& v : vars) {
    Term t = Term::Var(v);
    by_sort[v.sort].push_back(t);
    all.push_back(t);
  }
  for (int depth = 1; depth <= term_depth; ++depth) {
    std::vector<Term> added;
    for (const auto& [name, fn] : sig.functions()) {
      std::vector<std::vector<Term>> choices;
      for (const auto& s : fn.args) choices.push_back(by_sort[s]);
      std::vector<size_t> idx(choices.size(), 0);
      bool empty = std::any_of(choices.begin(), choices.end(),
                               [](const auto& c) { return c.empty(); });
      if (empty) continue;
      while (true) {
        std::vector<Term> args;
        int max_depth = -1;
        for (size_t i = 0; i < choices.size(); ++i) {
          args.push_back(choices[i][idx[i]]);
          max_depth = std::max(max_depth, args.back().Depth());
        }
        if (max_depth == depth - 1 || (args.empty() && depth == 1)) {
          added.push_back(Term::Apply(name, args));
        }
        size_t k = 0;
        while (k < idx.size() && ++idx[k] == choices[k].size()) idx[k++] = 0;
        if (k == idx.size()) break;
      }
    }
    for (const auto& t : added) {
      by_sort[sig.Function(t.symbol)->result].push_back(t);
      all.push_back(t);
    }
    if (all.size() > 4000) throw Error("too many terms for atomic formula generation");
  }
  std::vector<Formula> out;
  for (size_t i = 0; i < all.size(); ++i) {
    for (size_t j = i + 1; j < all.size(); ++j) {
      if (SortOf(all[i], sig) != SortOf(all[j], sig)) continue;
      if (all[i].is_var() && !all[j].is_var()) {
        out.push_back(Formula::Equals(all[j], all[i]));
      } else {
        out.push_back(Formula::Equals(all[i], all[j]));
      }
    }
  }
  for (const auto& [name, args] : sig.relations()) {
    std::vector<std::vector<Term>> choices;
    for (const auto& s : args) choices.push_back(by_sort[s]);
    if (std::any_of(choices.begin(), choices.end(), [](const auto& c) { return c.empty(); })) {
      continue;
    }
    std::vector<size_t> idx(choices.size(), 0);
    while (true) {
      std::vector<Term> a;
      for (size_t i = 0; i < choices.size(); ++i) a.push_back(choices[i][idx[i]]);
      out.push_back(Formula::Relation(name, a));
      size_t k = idx.size();
      while (k > 0 && ++idx[k - 1] == choices[k - 1].size()) idx[--k] = 0;
      if (k == 0) break;
    }
  }
  return out;
}

namespace {

// Evaluates a fixed list of atoms on tuples of a structure.
class AtomProgram {
 public:
  AtomProgram(const FiniteStructure& s, const std::vector<Formula>& atoms,
              const std::vector<Variable>& vars) {
    for (const auto& a : atoms) {
      Atom c;
      if (a.kind() == Formula::Kind::kEquals) {
        c.is_eq = true;
        c.args = {Compile(s, a.terms()[0], vars), Compile(s, a.terms()[1], vars)};
      } else {
        const auto& t = s.relation(a.symbol());
        c.table = &t.table;
        c.mult = Multipliers(s, t.sorts);
        for (const auto& term : a.terms()) c.args.push_back(Compile(s, term, vars));
      }
      atoms_.push_back(std::move(c));
    }
  }

  void Run(const std::vector<int>& tuple, std::vector<uint8_t>& out) const {
    values_.resize(terms_.size());
    for (size_t i = 0; i < terms_.size(); ++i) {
      const auto& t = terms_[i];
      if (t.var >= 0) {
        values_[i] = tuple[t.var];
      } else {
        size_t off = 0;
        for (size_t k = 0; k < t.args.size(); ++k) off += values_[t.args[k]] * t.mult[k];
        values_[i] = (*t.table)[off];
      }
    }
    out.resize(atoms_.size());
    for (size_t i = 0; i < atoms_.size(); ++i) {
      const auto& a = atoms_[i];
      if (a.is_eq) {
        out[i] = values_[a.args[0]] == values_[a.args[1]];
      } else {
        size_t off = 0;
        for (size_t k = 0; k < a.args.size(); ++k) off += values_[a.args[k]] * a.mult[k];
        out[i] = (*a.table)[off];
      }
    }
  }

 private:
  struct CTerm {
    int var = -1;
    const std::vector<int>* table = nullptr;
    std::vector<size_t> mult;
    std::vector<int> args;
  };
  struct Atom {
    bool is_eq = false;
    const std::vector<uint8_t>* table = nullptr;
    std::vector<size_t> mult;
    std::vector<int> args;
  };

  static std::vector<size_t> Multipliers(const FiniteStructure& s, const std::vector<int>& sorts) {
    std::vector<size_t> m(sorts.size(), 1);
    for (size_t i = sorts.size(); i-- > 1;) m[i - 1] = m[i] * s.Size(sorts[i]);
    return m;
  }

  int Compile(const FiniteStructure& s, const Term& t, const std::vector<Variable>& vars) {
    auto it = index_.find(t);
    if (it != index_.end()) return it->second;
    CTerm c;
    if (t.is_var()) {
      auto pos = std::find(vars.begin(), vars.end(), t.var);
      if (pos == vars.end()) throw Error("atom mentions unknown variable " + t.var.name);
      c.var = static_cast<int>(pos - vars.begin());
    } else {
      const auto& f = s.function(t.symbol);
      c.table = &f.table;
      c.mult = Multipliers(s, f.sorts);
      for (const auto& a : t.args) c.args.push_back(Compile(s, a, vars));
    }
    terms_.push_back(std::move(c));
    int id = static_cast<int>(terms_.size()) - 1;
    index_[t] = id;
    return id;
  }

  std::map<Term, int> index_;
  std::vector<CTerm> terms_;
  std::vector<Atom> atoms_;
  mutable std::vector<int> values_;
};

Variable PositionVariable(int i, const std::string& sort) {
  return Variable{"_v" + std::to_string(i), sort};
}

struct Level {
  std::vector<int> block_of;
  int num_blocks = 0;
  std::vector<Formula> formulas;
};

// Partitions M^sigma (after a fixed parameter prefix) into classes of tuples
// satisfying the same formulas of rank <= r.
class PartitionBuilder {
 public:
  PartitionBuilder(const FiniteStructure& s, const Signature& sig,
                   std::vector<ElementRef> prefix, int term_depth)
      : s_(s), sig_(sig), prefix_(std::move(prefix)), term_depth_(term_depth) {}

  std::vector<Formula> level0_atoms;
  std::vector<TupleSet> level0_extensions;

  const Level& Get(int rank, const std::vector<int>& sorts) {
    auto key = std::make_pair(rank, sorts);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    Level lv = rank == 0 ? Base(sorts) : Refine(rank, sorts);
    return memo_.emplace(key, std::move(lv)).first->second;
  }

 private:
  std::vector<Variable> Vars(const std::vector<int>& sorts) const {
    std::vector<Variable> vars;
    for (const auto& e : prefix_) vars.push_back(ParameterVariable(s_, e));
    for (size_t i = 0; i < sorts.size(); ++i) {
      vars.push_back(PositionVariable(static_cast<int>(i), sig_.sorts()[sorts[i]]));
    }
    return vars;
  }

  TupleSpace Space(const std::vector<int>& sorts) const {
    std::vector<int> sizes;
    for (int so : sorts) sizes.push_back(s_.Size(so));
    return TupleSpace(sizes);
  }

  std::vector<int> FullTuple(const std::vector<int>& tail) const {
    std::vector<int> t;
    for (const auto& e : prefix_) t.push_back(e.index);
    t.insert(t.end(), tail.begin(), tail.end());
    return t;
  }

  Level Base(const std::vector<int>& sorts) {
    auto vars = Vars(sorts);
    std::vector<Variable> positional(vars.begin() + prefix_.size(), vars.end());
    std::vector<Formula> atoms;
    for (const auto& a : AtomicFormulas(sig_, vars, term_depth_)) {
      auto fv = FreeVariables(a);
      bool touches = std::any_of(fv.begin(), fv.end(), [&](const Variable& v) {
        return std::find(positional.begin(), positional.end(), v) != positional.end();
      });
      if (touches) atoms.push_back(a);
    }
    AtomProgram prog(s_, atoms, vars);
    TupleSpace space = Space(sorts);
    size_t count = space.Count();
    std::vector<std::vector<uint8_t>> rows(count);
    for (size_t c = 0; c < count; ++c) prog.Run(FullTuple(space.Decode(c)), rows[c]);
    // Atoms constant on M^sigma carry no information here.
    std::vector<bool> varies(atoms.size(), false);
    for (size_t i = 0; i < atoms.size(); ++i) {
      for (size_t c = 1; c < count && !varies[i]; ++c) varies[i] = rows[c][i] != rows[0][i];
    }
    Level lv;
    lv.block_of.resize(count);
    std::map<std::vector<uint8_t>, int> ids;
    for (size_t c = 0; c < count; ++c) {
      std::vector<uint8_t> key;
      for (size_t i = 0; i < atoms.size(); ++i) {
        if (varies[i]) key.push_back(rows[c][i]);
      }
      auto [it, fresh] = ids.emplace(key, lv.num_blocks);
      if (fresh) {
        std::vector<Formula> lits;
        for (size_t i = 0; i < atoms.size(); ++i) {
          if (!varies[i]) continue;
          lits.push_back(rows[c][i] ? atoms[i] : Formula::Not(atoms[i]));
        }
        lv.formulas.push_back(Formula::Conjunction(lits));
        ++lv.num_blocks;
      }
      lv.block_of[c] = it->second;
    }
    if (!captured_ && sorts == target_sorts_) {
      captured_ = true;
      for (size_t i = 0; i < atoms.size(); ++i) {
        if (!varies[i]) continue;
        TupleSet ext(count);
        for (size_t c = 0; c < count; ++c) {
          if (rows[c][i]) ext.Insert(c);
        }
        level0_atoms.push_back(atoms[i]);
        level0_extensions.push_back(ext);
      }
    }
    return lv;
  }

  Level Refine(int rank, const std::vector<int>& sorts) {
    const Level& parent = Get(rank - 1, sorts);
    size_t nsorts = sig_.sorts().size();
    std::vector<const Level*> ext(nsorts);
    for (size_t so = 0; so < nsorts; ++so) {
      auto longer = sorts;
      longer.push_back(static_cast<int>(so));
      ext[so] = &Get(rank - 1, longer);
    }
    TupleSpace space = Space(sorts);
    size_t count = space.Count();
    // realized[c][so] = sorted child blocks reachable from tuple c.
    std::vector<std::vector<std::vector<int>>> realized(count);
    for (size_t c = 0; c < count; ++c) {
      realized[c].resize(nsorts);
      for (size_t so = 0; so < nsorts; ++so) {
        int n = s_.Size(static_cast<int>(so));
        std::vector<int> blocks;
        for (int b = 0; b < n; ++b) blocks.push_back(ext[so]->block_of[c * n + b]);
        std::sort(blocks.begin(), blocks.end());
        blocks.erase(std::unique(blocks.begin(), blocks.end()), blocks.end());
        realized[c][so] = std::move(blocks);
      }
    }
    // Per parent block, count how many tuples realize each child block.
    std::vector<std::map<std::pair<int, int>, int>> hits(parent.num_blocks);
    std::vector<int> parent_size(parent.num_blocks, 0);
    for (size_t c = 0; c < count; ++c) {
      int p = parent.block_of[c];
      ++parent_size[p];
      for (size_t so = 0; so < nsorts; ++so) {
        for (int b : realized[c][so]) ++hits[p][{static_cast<int>(so), b}];
      }
    }
    Level lv;
    lv.block_of.resize(count);
    std::map<std::pair<int, std::vector<std::vector<int>>>, int> ids;
    for (size_t c = 0; c < count; ++c) {
      int p = parent.block_of[c];
      auto key = std::make_pair(p, realized[c]);
      auto [it, fresh] = ids.emplace(key, lv.num_blocks);
      if (fresh) {
        std::vector<Formula> parts = {parent.formulas[p]};
        for (const auto& [sb, n] : hits[p]) {
          if (n == parent_size[p]) continue;
          auto [so, b] = sb;
          Variable y = PositionVariable(static_cast<int>(sorts.size()), sig_.sorts()[so]);
          Formula ex = Formula::Exists(y, ext[so]->formulas[b]);
          bool has = std::binary_search(realized[c][so].begin(), realized[c][so].end(), b);
          parts.push_back(has ? ex : Formula::Not(ex));
        }
        lv.formulas.push_back(Simplify(Formula::Conjunction(parts)));
        ++lv.num_blocks;
      }
      lv.block_of[c] = it->second;
    }
    return lv;
  }

 public:
  std::vector<int> target_sorts_;

 private:
  bool captured_ = false;
  const FiniteStructure& s_;
  const Signature& sig_;
  std::vector<ElementRef> prefix_;
  int term_depth_;
  std::map<std::pair<int, std::vector<int>>, Level> memo_;
};

bool Smaller(const Formula& a, const Formula& b) {
  int sa = a.Size(), sb = b.Size();
  if (sa != sb) return sa < sb;
  return Print(a) < Print(b);
}

}  // namespace

DefinableAlgebra::DefinableAlgebra(StructurePtr host, DefinabilityClass cls,
                                   std::vector<Variable> vars)
    : host_(std::move(host)), cls_(std::move(cls)), vars_(std::move(vars)) {
  const FiniteStructure& s = *host_;
  if (!cls_.signature.IsSubsignatureOf(s.signature())) {
    throw Error("class signature is not contained in the host signature");
  }
  if (cls_.max_rank < 0) throw Error("negative quantifier rank");
  if (cls_.signature.sorts() != s.signature().sorts()) {
    throw Error("class signature must list the host's sorts in order");
  }
  auto prefix = ResolveParameters(s, cls_.params);
  for (const auto& e : prefix) params_[ParameterVariable(s, e)] = e.index;
  std::vector<int> sorts;
  for (const auto& v : vars_) sorts.push_back(s.SortIndex(v.sort));
  space_ = TupleSpace(s, SortsOf(vars_));

  // The class signature may omit host symbols; build on the reduct.
  PartitionBuilder builder(s, cls_.signature, prefix, cls_.term_depth);
  builder.target_sorts_ = sorts;
  builder.Get(0, sorts);
  const Level& lv = builder.Get(cls_.max_rank, sorts);

  Substitution rename;
  for (size_t i = 0; i < vars_.size(); ++i) {
    rename[PositionVariable(static_cast<int>(i), vars_[i].sort)] = Term::Var(vars_[i]);
  }
  block_of_ = lv.block_of;
  blocks_.assign(lv.num_blocks, TupleSet(space_.Count()));
  for (size_t c = 0; c < block_of_.size(); ++c) blocks_[block_of_[c]].Insert(c);
  for (const auto& f : lv.formulas) block_formulas_.push_back(Substitute(f, rename));
  for (size_t i = 0; i < builder.level0_atoms.size(); ++i) {
    Formula a = Substitute(builder.level0_atoms[i], rename);
    primitives_.emplace_back(builder.level0_extensions[i], a);
    primitives_.emplace_back(builder.level0_extensions[i].Complement(), Formula::Not(a));
  }
  // Drop parameters the formulas never mention.
  std::set<Variable> used;
  for (const auto& f : block_formulas_) {
    auto fv = FreeVariables(f);
    used.insert(fv.begin(), fv.end());
  }
  for (const auto& [ext, f] : primitives_) {
    auto fv = FreeVariables(f);
    used.insert(fv.begin(), fv.end());
  }
  for (auto it = params_.begin(); it != params_.end();) {
    it = used.count(it->first) ? std::next(it) : params_.erase(it);
  }
}

bool DefinableAlgebra::IsDefinable(const TupleSet& s) const { return Hull(s) == s; }

TupleSet DefinableAlgebra::Hull(const TupleSet& s) const {
  TupleSet out(space_.Count());
  for (const auto& b : blocks_) {
    if (b.Intersects(s)) out = out | b;
  }
  return out;
}

TupleSet DefinableAlgebra::Kernel(const TupleSet& s) const {
  TupleSet out(space_.Count());
  for (const auto& b : blocks_) {
    if (b.SubsetOf(s)) out = out | b;
  }
  return out;
}

Formula DefinableAlgebra::FormulaFor(const TupleSet& s) const {
  if (!IsDefinable(s)) throw Error("set is not definable in the class");
  if (s.Empty()) return Formula::False();
  if (s == TupleSet::Full(space_.Count())) return Formula::True();
  std::vector<Formula> in, out;
  for (size_t i = 0; i < blocks_.size(); ++i) {
    (blocks_[i].SubsetOf(s) ? in : out).push_back(block_formulas_[i]);
  }
  Formula best = Formula::Disjunction(in);
  Formula neg = Formula::Not(Formula::Disjunction(out));
  if (Smaller(neg, best)) best = neg;
  for (const auto& [ext, f] : primitives_) {
    if (ext == s && Smaller(f, best)) best = f;
  }
  return best;
}

DefinableSet DefinableAlgebra::Make(const TupleSet& s) const {
  DefinableSet d;
  d.host = host_;
  d.formula = FormulaFor(s);
  d.vars = vars_;
  auto fv = FreeVariables(d.formula);
  for (const auto& [v, x] : params_) {
    if (fv.count(v)) d.params[v] = x;
  }
  d.extension = s;
  return d;
}

const std::vector<DefinableSet>& DefinableAlgebra::Sets() const {
  if (sets_) return *sets_;
  size_t k = blocks_.size();
  if (k > 20) {
    throw Error("class defines 2^" + std::to_string(k) + " sets; narrow the class");
  }
  std::vector<DefinableSet> all;
  all.reserve(size_t{1} << k);
  for (size_t mask = 0; mask < (size_t{1} << k); ++mask) {
    TupleSet s(space_.Count());
    for (size_t i = 0; i < k; ++i) {
      if (mask >> i & 1) s = s | blocks_[i];
    }
    DefinableSet d = Make(s);
    if (cls_.max_formula_size && d.formula.Size() > *cls_.max_formula_size) continue;
    all.push_back(std::move(d));
  }
  std::vector<std::pair<std::pair<int, std::string>, size_t>> order;
  for (size_t i = 0; i < all.size(); ++i) {
    order.push_back({{all[i].formula.Size(), Print(all[i].formula)}, i});
  }
  std::sort(order.begin(), order.end());
  std::vector<DefinableSet> sorted;
  sorted.reserve(all.size());
  for (const auto& [key, i] : order) sorted.push_back(std::move(all[i]));
  sets_ = std::move(sorted);
  return *sets_;
}

std::vector<DefinableSet> EnumerateDefinable(StructurePtr host, const DefinabilityClass& cls,
                                             const std::vector<Variable>& vars) {
  return DefinableAlgebra(std::move(host), cls, vars).Sets();
}

TypeInterner::TypeInterner(Signature sig, int term_depth)
    : sig_(std::move(sig)), term_depth_(term_depth) {}

const std::vector<Formula>& TypeInterner::AtomFormulas(const std::vector<int>& sorts) const {
  auto it = atom_cache_.find(sorts);
  if (it != atom_cache_.end()) return it->second;
  std::vector<Variable> vars;
  for (size_t i = 0; i < sorts.size(); ++i) {
    vars.push_back(PositionVariable(static_cast<int>(i), sig_.sorts()[sorts[i]]));
  }
  return atom_cache_.emplace(sorts, AtomicFormulas(sig_, vars, term_depth_)).first->second;
}

int TypeInterner::Intern(Entry e) {
  std::string key = std::to_string(e.rank) + "|";
  for (int s : e.sorts) key += std::to_string(s) + ",";
  key += "|";
  if (e.rank == 0) {
    for (auto b : e.atoms) key += b ? '1' : '0';
  } else {
    key += std::to_string(e.parent) + "|";
    for (const auto& ch : e.children) {
      for (int c : ch) key += std::to_string(c) + ",";
      key += ";";
    }
  }
  auto it = index_.find(key);
  if (it != index_.end()) return it->second;
  entries_.push_back(std::move(e));
  int id = static_cast<int>(entries_.size()) - 1;
  index_[key] = id;
  return id;
}

int TypeInterner::TypeOf(const FiniteStructure& s, const std::vector<ElementRef>& tuple,
                         int rank) {
  if (!sig_.IsSubsignatureOf(s.signature())) {
    throw Error("type signature is not contained in the structure's signature");
  }
  std::vector<int> sorts;
  std::vector<int> values;
  for (const auto& e : tuple) {
    sorts.push_back(e.sort);
    values.push_back(e.index);
  }
  Entry e;
  e.rank = rank;
  e.sorts = sorts;
  if (rank == 0) {
    const auto& atoms = AtomFormulas(sorts);
    std::vector<Variable> vars;
    for (size_t i = 0; i < sorts.size(); ++i) {
      vars.push_back(PositionVariable(static_cast<int>(i), sig_.sorts()[sorts[i]]));
    }
    AtomProgram prog(s, atoms, vars);
    prog.Run(values, e.atoms);
    return Intern(std::move(e));
  }
  e.parent = TypeOf(s, tuple, rank - 1);
  e.children.resize(sig_.sorts().size());
  for (size_t so = 0; so < sig_.sorts().size(); ++so) {
    int sidx = s.SortIndex(sig_.sorts()[so]);
    std::vector<int> ch;
    auto longer = tuple;
    longer.push_back({sidx, 0});
    for (int b = 0; b < s.Size(sidx); ++b) {
      longer.back().index = b;
      ch.push_back(TypeOf(s, longer, rank - 1));
    }
    std::sort(ch.begin(), ch.end());
    ch.erase(std::unique(ch.begin(), ch.end()), ch.end());
    e.children[so] = std::move(ch);
  }
  return Intern(std::move(e));
}

Formula TypeInterner::Characteristic(int id, const std::vector<Variable>& vars) const {
  const Entry& e = entries_.at(id);
  if (vars.size() != e.sorts.size()) throw Error("variable count does not match type arity");
  if (e.rank == 0) {
    const auto& atoms = AtomFormulas(e.sorts);
    Substitution rename;
    for (size_t i = 0; i < vars.size(); ++i) {
      rename[PositionVariable(static_cast<int>(i), sig_.sorts()[e.sorts[i]])] =
          Term::Var(vars[i]);
    }
    std::vector<Formula> lits;
    for (size_t i = 0; i < atoms.size(); ++i) {
      Formula a = Substitute(atoms[i], rename);
      lits.push_back(e.atoms[i] ? a : Formula::Not(a));
    }
    return Formula::Conjunction(lits);
  }
  std::vector<Formula> parts = {Characteristic(e.parent, vars)};
  std::set<std::string> used;
  for (const auto& v : vars) used.insert(v.name);
  for (size_t so = 0; so < e.children.size(); ++so) {
    FreshNames fresh("y", used);
    Variable y = fresh.Next(sig_.sorts()[so]);
    auto longer = vars;
    longer.push_back(y);
    std::vector<Formula> options;
    for (int c : e.children[so]) {
      Formula ch = Characteristic(c, longer);
      parts.push_back(Formula::Exists(y, ch));
      options.push_back(ch);
    }
    parts.push_back(Formula::Forall(y, Formula::Disjunction(options)));
  }
  return Formula::Conjunction(parts);
}

}  // namespace fusionkit
