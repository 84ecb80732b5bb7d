#include "fusionkit/encodings.h"

#include <set>

#include "fusionkit/parse.h"

namespace fusionkit {
namespace {

// The joined names, or prefix0, prefix1, ... when they collide.
std::vector<std::string> UniqueNames(const std::vector<std::string>& joined,
                                     const std::string& prefix) {
  std::set<std::string> seen(joined.begin(), joined.end());
  if (seen.size() == joined.size()) return joined;
  std::vector<std::string> out;
  for (size_t i = 0; i < joined.size(); ++i) out.push_back(prefix + std::to_string(i));
  return out;
}

std::string FreshName(const Signature& sig, const std::string& base) {
  std::string name = base;
  while (sig.HasSort(name) || sig.HasSymbol(name)) name += "_";
  return name;
}

// Copies every interpretation of `src` into `dst` with sorts and symbols
// renamed by suffixing `suffix`.
void CopyRenamed(const FiniteStructure& src, const std::string& suffix, FiniteStructure& dst) {
  const Signature& sig = src.signature();
  for (const auto& [name, args] : sig.relations()) {
    TupleSpace space(src, args);
    for (size_t c = 0; c < space.Count(); ++c) {
      auto t = space.Decode(c);
      if (src.Holds(name, t)) dst.SetHolds(name + suffix, t, true);
    }
  }
  for (const auto& [name, type] : sig.functions()) {
    TupleSpace space(src, type.args);
    for (size_t c = 0; c < space.Count(); ++c) {
      auto t = space.Decode(c);
      dst.SetValue(name + suffix, t, src.Apply(name, t));
    }
  }
}

const FunctionType& RequireFunction(const Signature& sig, const std::string& name) {
  const FunctionType* f = sig.Function(name);
  if (!f) throw Error("missing function symbol " + name);
  return *f;
}

std::string StripSuffix(const std::string& s, const std::string& suffix) {
  if (s.size() <= suffix.size() || s.compare(s.size() - suffix.size(), suffix.size(), suffix)) {
    return "";
  }
  return s.substr(0, s.size() - suffix.size());
}

}  // namespace

EncodedPair RgEncode(const FiniteStructure& g) {
  const auto* e = g.signature().Relation("E");
  if (!e || e->size() != 2 || (*e)[0] != (*e)[1]) throw Error("graph needs a binary relation E");
  const std::string v = (*e)[0];
  const auto& names = g.Universe(v);
  int n = static_cast<int>(names.size());
  for (int i = 0; i < n; ++i) {
    if (g.Holds("E", {i, i})) throw Error("E is reflexive at " + names[i]);
    for (int j = 0; j < n; ++j) {
      if (g.Holds("E", {i, j}) != g.Holds("E", {j, i})) {
        throw Error("E is not symmetric at (" + names[i] + "," + names[j] + ")");
      }
    }
  }
  Signature sig;
  sig.AddSort(v);
  std::string s = v == "S" ? "S2" : "S";
  sig.AddSort(s);
  sig.AddRelation("Pi", {v, v, s});
  sig.AddRelation("ES", {s});

  std::vector<std::pair<int, int>> pairs;
  std::vector<std::string> joined;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      pairs.push_back({i, j});
      joined.push_back(names[i] + "~" + names[j]);
    }
  }
  EncodedPair out;
  out.source = g;
  out.target = FiniteStructure(g.name(), sig);
  out.target.SetUniverse(v, names);
  out.target.SetUniverse(s, UniqueNames(joined, "s"));
  for (size_t k = 0; k < pairs.size(); ++k) {
    auto [i, j] = pairs[k];
    int kk = static_cast<int>(k);
    out.target.SetHolds("Pi", {i, j, kk}, true);
    out.target.SetHolds("Pi", {j, i, kk}, true);
    if (g.Holds("E", {i, j})) out.target.SetHolds("ES", {kk}, true);
  }
  int vs = g.SortIndex(v);
  for (int i = 0; i < n; ++i) {
    out.forward[{vs, i}] = {out.target.SortIndex(v), i};
    out.backward[{out.target.SortIndex(v), i}] = {vs, i};
  }
  return out;
}

FiniteStructure RgDecode(const FiniteStructure& p) {
  const auto* pi = p.signature().Relation("Pi");
  const auto* es = p.signature().Relation("ES");
  if (!pi || pi->size() != 3 || (*pi)[0] != (*pi)[1] || !es || es->size() != 1 ||
      (*es)[0] != (*pi)[2]) {
    throw Error("expected relations Pi : V V S and ES : S");
  }
  const std::string v = (*pi)[0], s = (*pi)[2];
  int n = p.Size(v), m = p.Size(s);
  const auto& names = p.Universe(v);
  // image[i][j]: the unique s with Pi(i, j, s), or -1.
  std::vector<std::vector<int>> image(n, std::vector<int>(n, -1));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < m; ++k) {
        if (!p.Holds("Pi", {i, j, k})) continue;
        if (i == j) throw Error("Pi is defined on the diagonal at " + names[i]);
        if (image[i][j] >= 0) throw Error("Pi is not functional at (" + names[i] + "," + names[j] + ")");
        image[i][j] = k;
      }
      if (i != j && image[i][j] < 0) {
        throw Error("Pi is undefined at (" + names[i] + "," + names[j] + ")");
      }
    }
  }
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
          if (i == j || a == b) continue;
          bool same = (i == a && j == b) || (i == b && j == a);
          if ((image[i][j] == image[a][b]) != same) {
            throw Error("Pi merges (" + names[i] + "," + names[j] + ") and (" + names[a] + "," +
                        names[b] + ") incorrectly");
          }
        }
      }
    }
  }
  Signature sig;
  sig.AddSort(v);
  sig.AddRelation("E", {v, v});
  FiniteStructure g(p.name(), sig);
  g.SetUniverse(v, names);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i != j && p.Holds("ES", {image[i][j]})) g.SetHolds("E", {i, j}, true);
    }
  }
  return g;
}

std::vector<Formula> RgShapeAxioms(const Signature& target) {
  const auto* pi = target.Relation("Pi");
  if (!pi || pi->size() != 3) throw Error("expected relation Pi : V V S");
  const std::string v = (*pi)[0], s = (*pi)[2];
  auto parse = [&](const std::string& text) { return ParseFormula(text, target); };
  std::string v1 = "v1:" + v, v2 = "v2:" + v, w1 = "w1:" + v, w2 = "w2:" + v;
  std::string swap = "((v1 = w1 & v2 = w2) | (v1 = w2 & v2 = w1))";
  return {
      parse("forall " + v1 + ". forall " + v2 + ". (~(v1 = v2) -> exists s1:" + s +
            ". Pi(v1, v2, s1))"),
      parse("forall " + v1 + ". forall s1:" + s + ". ~Pi(v1, v1, s1)"),
      parse("forall " + v1 + ". forall " + v2 + ". forall " + w1 + ". forall " + w2 +
            ". forall s1:" + s + ". forall s2:" + s + ". (Pi(v1, v2, s1) & Pi(w1, w2, s2) -> ((s1 = s2 -> " +
            swap + ") & (" + swap + " -> s1 = s2)))"),
  };
}

FiniteStructure AutEncode(const FiniteStructure& m, const ElementMap& sigma) {
  const Signature& src = m.signature();
  if (src.sorts().size() != 1) throw Error("automorphism encoding needs a one-sorted structure");
  if (!IsAutomorphism(m, sigma)) throw Error("sigma is not an automorphism");
  const std::string v = src.sorts()[0];
  Signature sig;
  for (const std::string suffix : {"_1", "_2"}) {
    sig.AddSort(v + suffix);
    for (const auto& [name, args] : src.relations()) {
      sig.AddRelation(name + suffix, std::vector<std::string>(args.size(), v + suffix));
    }
    for (const auto& [name, type] : src.functions()) {
      sig.AddFunction(name + suffix, std::vector<std::string>(type.args.size(), v + suffix),
                      v + suffix);
    }
  }
  sig.AddFunction("f", {v + "_1"}, v + "_2");
  sig.AddFunction("g", {v + "_1"}, v + "_2");
  FiniteStructure p(m.name(), sig);
  p.SetUniverse(v + "_1", m.Universe(v));
  p.SetUniverse(v + "_2", m.Universe(v));
  CopyRenamed(m, "_1", p);
  CopyRenamed(m, "_2", p);
  for (int i = 0; i < m.Size(v); ++i) {
    p.SetValue("f", {i}, i);
    p.SetValue("g", {i}, sigma[0][i]);
  }
  return p;
}

AutDecoded AutDecode(const FiniteStructure& p) {
  const Signature& sig = p.signature();
  const FunctionType& f = RequireFunction(sig, "f");
  const FunctionType& g = RequireFunction(sig, "g");
  if (f.args.size() != 1 || !(f == g) || f.args[0] == f.result) {
    throw Error("f and g must both map one copy onto the other");
  }
  const std::string s1 = f.args[0], s2 = f.result;
  std::string v = StripSuffix(s1, "_1");
  if (v.empty() || s2 != v + "_2") throw Error("expected sorts named V_1 and V_2");
  Signature base;
  base.AddSort(v);
  for (const auto& [name, args] : sig.relations()) {
    std::string b = StripSuffix(name, "_1");
    if (!b.empty() && !args.empty() && args[0] == s1) {
      base.AddRelation(b, std::vector<std::string>(args.size(), v));
    }
  }
  for (const auto& [name, type] : sig.functions()) {
    std::string b = StripSuffix(name, "_1");
    if (!b.empty() && type.result == s1) {
      base.AddFunction(b, std::vector<std::string>(type.args.size(), v), v);
    }
  }
  int n = p.Size(s1);
  if (p.Size(s2) != n) throw Error("the two copies differ in size");
  std::vector<int> fm(n), gm(n);
  for (int i = 0; i < n; ++i) {
    fm[i] = p.Apply("f", {i});
    gm[i] = p.Apply("g", {i});
  }
  FiniteStructure m(p.name(), base);
  m.SetUniverse(v, p.Universe(s1));
  FiniteStructure copy2(p.name(), base);
  copy2.SetUniverse(v, p.Universe(s2));
  for (const auto& [name, args] : base.relations()) {
    TupleSpace space(m, args);
    for (size_t c = 0; c < space.Count(); ++c) {
      auto t = space.Decode(c);
      if (p.Holds(name + "_1", t)) m.SetHolds(name, t, true);
      if (p.Holds(name + "_2", t)) copy2.SetHolds(name, t, true);
    }
  }
  for (const auto& [name, type] : base.functions()) {
    TupleSpace space(m, type.args);
    for (size_t c = 0; c < space.Count(); ++c) {
      auto t = space.Decode(c);
      m.SetValue(name, t, p.Apply(name + "_1", t));
      copy2.SetValue(name, t, p.Apply(name + "_2", t));
    }
  }
  // Each of f and g must be an isomorphism from the first copy to the second.
  for (const auto* h : {&fm, &gm}) {
    if (std::set<int>(h->begin(), h->end()).size() != static_cast<size_t>(n)) {
      throw Error(std::string(h == &fm ? "f" : "g") + " is not a bijection");
    }
    auto image = [&](std::vector<int> t) {
      for (int& x : t) x = (*h)[x];
      return t;
    };
    for (const auto& [name, args] : base.relations()) {
      TupleSpace space(m, args);
      for (size_t c = 0; c < space.Count(); ++c) {
        auto t = space.Decode(c);
        if (m.Holds(name, t) != copy2.Holds(name, image(t))) {
          throw Error(std::string(h == &fm ? "f" : "g") + " does not preserve " + name);
        }
      }
    }
    for (const auto& [name, type] : base.functions()) {
      TupleSpace space(m, type.args);
      for (size_t c = 0; c < space.Count(); ++c) {
        auto t = space.Decode(c);
        if ((*h)[m.Apply(name, t)] != copy2.Apply(name, image(t))) {
          throw Error(std::string(h == &fm ? "f" : "g") + " does not preserve " + name);
        }
      }
    }
  }
  AutDecoded out{m, {std::vector<int>(n)}};
  std::vector<int> finv(n);
  for (int i = 0; i < n; ++i) finv[fm[i]] = i;
  for (int i = 0; i < n; ++i) out.sigma[0][i] = finv[gm[i]];
  return out;
}

FiniteStructure SkolemEncode(const FiniteStructure& m, const Formula& phi,
                             const std::vector<Variable>& x, const Variable& y,
                             const std::vector<int>& f) {
  if (x.empty()) throw Error("Skolem encoding needs at least one x variable");
  TupleSpace xs(m, SortsOf(x));
  if (f.size() != xs.Count()) throw Error("Skolem table has the wrong size");
  std::vector<Variable> xy = x;
  xy.push_back(y);
  TupleSpace space(m, SortsOf(xy));
  auto bind = [&](const std::vector<int>& t) {
    Assignment a;
    for (size_t i = 0; i < xy.size(); ++i) a[xy[i]] = t[i];
    return a;
  };
  for (size_t c = 0; c < xs.Count(); ++c) {
    auto t = xs.Decode(c);
    if (f[c] < 0 || f[c] >= m.Size(y.sort)) throw Error("Skolem table value out of range");
    t.push_back(f[c]);
    if (!Evaluate(m, phi, bind(t))) {
      throw Error("f violates phi at " + PrintTuple(m, SortsOf(xy), t));
    }
  }
  TupleSet e = ExtensionOf(m, phi, xy);
  std::vector<size_t> codes = e.Elements();

  Signature sig = m.signature();
  std::string es = FreshName(sig, "E");
  sig.AddSort(es);
  for (size_t i = 0; i < x.size(); ++i) {
    sig.AddFunction("px_" + std::to_string(i + 1), {es}, x[i].sort);
  }
  sig.AddFunction("py", {es}, y.sort);
  sig.AddFunction("g", SortsOf(x), es);
  FiniteStructure p(m.name(), sig);
  for (const auto& s : m.signature().sorts()) p.SetUniverse(s, m.Universe(s));
  std::vector<std::string> names;
  for (size_t k = 0; k < codes.size(); ++k) names.push_back("e" + std::to_string(k));
  p.SetUniverse(es, names);
  CopyRenamed(m, "", p);
  std::map<size_t, int> index;
  for (size_t k = 0; k < codes.size(); ++k) {
    index[codes[k]] = static_cast<int>(k);
    auto t = space.Decode(codes[k]);
    int kk = static_cast<int>(k);
    for (size_t i = 0; i < x.size(); ++i) p.SetValue("px_" + std::to_string(i + 1), {kk}, t[i]);
    p.SetValue("py", {kk}, t.back());
  }
  for (size_t c = 0; c < xs.Count(); ++c) {
    auto t = xs.Decode(c);
    auto full = t;
    full.push_back(f[c]);
    p.SetValue("g", t, index.at(space.Encode(full)));
  }
  return p;
}

SkolemDecoded SkolemDecode(const FiniteStructure& p) {
  const Signature& sig = p.signature();
  const FunctionType& g = RequireFunction(sig, "g");
  RequireFunction(sig, "py");
  const std::string es = g.result;
  size_t n = g.args.size();
  for (size_t i = 0; i < n; ++i) {
    const FunctionType& px = RequireFunction(sig, "px_" + std::to_string(i + 1));
    if (px.args != std::vector<std::string>{es} || px.result != g.args[i]) {
      throw Error("px_" + std::to_string(i + 1) + " has the wrong type");
    }
  }
  Signature base;
  for (const auto& s : sig.sorts()) {
    if (s != es) base.AddSort(s);
  }
  auto internal = [&](const std::string& name) {
    return name == "g" || name == "py" || name.rfind("px_", 0) == 0;
  };
  for (const auto& [name, args] : sig.relations()) {
    if (std::find(args.begin(), args.end(), es) == args.end()) base.AddRelation(name, args);
  }
  for (const auto& [name, type] : sig.functions()) {
    if (!internal(name)) base.AddFunction(name, type.args, type.result);
  }
  SkolemDecoded out{Reduct(p, base), {}};
  TupleSpace xs(p, g.args);
  for (size_t c = 0; c < xs.Count(); ++c) {
    auto t = xs.Decode(c);
    int e = p.Apply("g", t);
    for (size_t i = 0; i < n; ++i) {
      if (p.Apply("px_" + std::to_string(i + 1), {e}) != t[i]) {
        throw Error("g is not a section at " + PrintTuple(p, g.args, t));
      }
    }
    out.f.push_back(p.Apply("py", {e}));
  }
  return out;
}

GenericPredicateReport GenericPredicateCheck(const FiniteStructure& m, const std::string& pred,
                                             const DefinabilityClass& cls, int n_max) {
  const auto* p = m.signature().Relation(pred);
  if (!p || p->size() != 1) throw Error(pred + " is not a unary predicate");
  if (cls.signature.HasSymbol(pred)) throw Error("the class language must not contain " + pred);
  const std::string v = (*p)[0];
  GenericPredicateReport rep;
  rep.approximate = !cls.signature.Symbols().empty();
  auto host = std::make_shared<const FiniteStructure>(m);
  FiniteStructure reduct = Reduct(m, cls.signature);
  int size = m.Size(v);
  for (int n = 1; n <= n_max; ++n) {
    FiniteStructure extended = ExtendFresh(reduct, n, {v});
    std::vector<Variable> vars;
    for (int i = 0; i < n; ++i) vars.push_back({"x" + std::to_string(i + 1), v});
    DefinableAlgebra alg(host, cls, vars);
    for (const auto& x : alg.Sets()) {
      ++rep.sets_checked;
      Assignment a = x.params;
      for (int i = 0; i < n; ++i) a[x.vars[i]] = size + i;
      if (!Evaluate(extended, x.formula, a)) continue;
      ++rep.large_sets;
      std::set<size_t> seen;
      for (size_t code : x.extension.Elements()) {
        auto t = alg.space().Decode(code);
        size_t mask = 0;
        for (int i = 0; i < n; ++i) {
          if (m.Holds(pred, {t[i]})) mask |= size_t{1} << i;
        }
        seen.insert(mask);
      }
      for (size_t mask = 0; mask < (size_t{1} << n); ++mask) {
        if (seen.count(mask)) continue;
        std::vector<bool> pattern(n);
        for (int i = 0; i < n; ++i) pattern[i] = mask >> i & 1;
        rep.failures.push_back({n, x, pattern});
      }
    }
  }
  return rep;
}

}  // namespace fusionkit
