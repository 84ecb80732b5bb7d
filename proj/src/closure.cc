#include "fusionkit/closure.h"

#include <algorithm>
#include <functional>
#include <numeric>

#include "fusionkit/definable.h"
#include "fusionkit/parse.h"

namespace fusionkit {

ElementMap IdentityMap(const FiniteStructure& s) {
  ElementMap m(s.signature().sorts().size());
  for (size_t so = 0; so < m.size(); ++so) {
    m[so].resize(s.Size(static_cast<int>(so)));
    std::iota(m[so].begin(), m[so].end(), 0);
  }
  return m;
}

ElementMap Compose(const ElementMap& outer, const ElementMap& inner) {
  ElementMap out = inner;
  for (size_t so = 0; so < inner.size(); ++so) {
    for (size_t i = 0; i < inner[so].size(); ++i) out[so][i] = outer[so][inner[so][i]];
  }
  return out;
}

ElementMap Inverse(const ElementMap& m) {
  ElementMap out = m;
  for (size_t so = 0; so < m.size(); ++so) {
    for (size_t i = 0; i < m[so].size(); ++i) out[so][m[so][i]] = static_cast<int>(i);
  }
  return out;
}

namespace {

// Backtracking search for automorphisms with per-element pruning.
class AutomorphismSearch {
 public:
  explicit AutomorphismSearch(const FiniteStructure& s) : s_(s) {
    const auto& sig = s.signature();
    nsorts_ = sig.sorts().size();
    for (size_t so = 0; so < nsorts_; ++so) {
      for (int i = 0; i < s.Size(static_cast<int>(so)); ++i) {
        all_.push_back({static_cast<int>(so), i});
      }
    }
    ComputeColors();
  }

  // Finds automorphisms fixing `fixed`, with optional forced pairs. Stops
  // after `limit` results when limit > 0.
  std::vector<ElementMap> Run(const ElementSet& fixed,
                              const std::vector<std::pair<ElementRef, ElementRef>>& forced,
                              size_t limit) {
    order_.clear();
    forced_.clear();
    for (const auto& e : fixed) {
      order_.push_back(e);
      forced_[e] = e;
    }
    for (const auto& [from, to] : forced) {
      if (forced_.count(from)) {
        if (!(forced_[from] == to)) return {};
        continue;
      }
      if (from.sort != to.sort || colors_.at(from) != colors_.at(to)) return {};
      order_.push_back(from);
      forced_[from] = to;
    }
    for (const auto& e : all_) {
      if (!forced_.count(e)) order_.push_back(e);
    }
    position_.clear();
    for (size_t k = 0; k < order_.size(); ++k) position_[order_[k]] = static_cast<int>(k);
    BuildChecks();
    image_.assign(nsorts_, {});
    used_.assign(nsorts_, {});
    for (size_t so = 0; so < nsorts_; ++so) {
      image_[so].assign(s_.Size(static_cast<int>(so)), -1);
      used_[so].assign(s_.Size(static_cast<int>(so)), false);
    }
    results_.clear();
    limit_ = limit;
    Assign(0);
    return results_;
  }

 private:
  struct RelCheck {
    const FiniteStructure::RelationTable* table;
    size_t code;
    std::vector<ElementRef> elems;
  };
  struct FunCheck {
    const FiniteStructure::FunctionTable* table;
    std::vector<ElementRef> args;
    ElementRef result;
  };

  void ComputeColors() {
    for (const auto& e : all_) colors_[e] = {e.sort};
    const auto& sig = s_.signature();
    for (const auto& [name, _] : sig.relations()) {
      const auto& t = s_.relation(name);
      TupleSpace space(Sizes(t.sorts));
      std::map<ElementRef, std::vector<int>> counts;
      for (size_t c = 0; c < t.table.size(); ++c) {
        auto tuple = space.Decode(c);
        bool diag = true;
        for (size_t k = 0; k < tuple.size(); ++k) {
          diag = diag && t.sorts[k] == t.sorts[0] && tuple[k] == tuple[0];
        }
        for (size_t k = 0; k < tuple.size(); ++k) {
          auto& v = counts[{t.sorts[k], tuple[k]}];
          v.resize(tuple.size() + 1, 0);
          if (t.table[c]) ++v[k];
          if (t.table[c] && diag) ++v[tuple.size()];
        }
      }
      for (auto& [e, v] : counts) colors_[e].insert(colors_[e].end(), v.begin(), v.end());
    }
    for (const auto& [name, _] : sig.functions()) {
      const auto& t = s_.function(name);
      TupleSpace space(Sizes(t.sorts));
      std::map<ElementRef, int> preimages;
      for (size_t c = 0; c < t.table.size(); ++c) {
        if (t.table[c] >= 0) ++preimages[{t.result, t.table[c]}];
        auto tuple = space.Decode(c);
        if (tuple.size() == 1 && t.sorts[0] == t.result && t.table[c] == tuple[0]) {
          colors_[{t.sorts[0], tuple[0]}].push_back(-1);
        }
      }
      for (const auto& e : all_) {
        if (e.sort == t.result) colors_[e].push_back(preimages[e]);
      }
    }
  }

  std::vector<int> Sizes(const std::vector<int>& sorts) const {
    std::vector<int> out;
    for (int so : sorts) out.push_back(s_.Size(so));
    return out;
  }

  void BuildChecks() {
    rel_checks_.assign(order_.size(), {});
    fun_checks_.assign(order_.size(), {});
    const auto& sig = s_.signature();
    for (const auto& [name, _] : sig.relations()) {
      const auto& t = s_.relation(name);
      TupleSpace space(Sizes(t.sorts));
      for (size_t c = 0; c < t.table.size(); ++c) {
        auto tuple = space.Decode(c);
        RelCheck rc{&t, c, {}};
        int last = 0;
        for (size_t k = 0; k < tuple.size(); ++k) {
          rc.elems.push_back({t.sorts[k], tuple[k]});
          last = std::max(last, position_[rc.elems.back()]);
        }
        if (tuple.empty()) continue;
        rel_checks_[last].push_back(std::move(rc));
      }
    }
    for (const auto& [name, _] : sig.functions()) {
      const auto& t = s_.function(name);
      TupleSpace space(Sizes(t.sorts));
      for (size_t c = 0; c < t.table.size(); ++c) {
        if (t.table[c] < 0) continue;
        auto tuple = space.Decode(c);
        FunCheck fc{&t, {}, {t.result, t.table[c]}};
        int last = position_[fc.result];
        for (size_t k = 0; k < tuple.size(); ++k) {
          fc.args.push_back({t.sorts[k], tuple[k]});
          last = std::max(last, position_[fc.args.back()]);
        }
        fun_checks_[last].push_back(std::move(fc));
      }
    }
  }

  size_t Code(const std::vector<int>& sorts, const std::vector<int>& tuple) const {
    size_t code = 0;
    for (size_t k = 0; k < tuple.size(); ++k) code = code * s_.Size(sorts[k]) + tuple[k];
    return code;
  }

  bool Consistent(size_t k) const {
    for (const auto& rc : rel_checks_[k]) {
      std::vector<int> img;
      for (const auto& e : rc.elems) img.push_back(image_[e.sort][e.index]);
      if (rc.table->table[rc.code] != rc.table->table[Code(rc.table->sorts, img)]) return false;
    }
    for (const auto& fc : fun_checks_[k]) {
      std::vector<int> img;
      for (const auto& e : fc.args) img.push_back(image_[e.sort][e.index]);
      int v = fc.table->table[Code(fc.table->sorts, img)];
      if (v != image_[fc.result.sort][fc.result.index]) return false;
    }
    return true;
  }

  bool Assign(size_t k) {
    if (k == order_.size()) {
      results_.push_back(image_);
      return limit_ == 0 || results_.size() < limit_;
    }
    const ElementRef e = order_[k];
    std::vector<int> candidates;
    auto f = forced_.find(e);
    if (f != forced_.end()) {
      candidates.push_back(f->second.index);
    } else {
      for (int d = 0; d < s_.Size(e.sort); ++d) {
        if (colors_.at({e.sort, d}) == colors_.at(e)) candidates.push_back(d);
      }
    }
    for (int d : candidates) {
      if (used_[e.sort][d]) continue;
      image_[e.sort][e.index] = d;
      used_[e.sort][d] = true;
      bool go_on = true;
      if (Consistent(k)) go_on = Assign(k + 1);
      used_[e.sort][d] = false;
      image_[e.sort][e.index] = -1;
      if (!go_on) return false;
    }
    return true;
  }

  const FiniteStructure& s_;
  size_t nsorts_ = 0;
  std::vector<ElementRef> all_;
  std::map<ElementRef, std::vector<int>> colors_;
  std::vector<ElementRef> order_;
  std::map<ElementRef, ElementRef> forced_;
  std::map<ElementRef, int> position_;
  std::vector<std::vector<RelCheck>> rel_checks_;
  std::vector<std::vector<FunCheck>> fun_checks_;
  ElementMap image_;
  std::vector<std::vector<bool>> used_;
  std::vector<ElementMap> results_;
  size_t limit_ = 0;
};

}  // namespace

bool IsAutomorphism(const FiniteStructure& s, const ElementMap& m) {
  std::vector<std::pair<ElementRef, ElementRef>> forced;
  if (m.size() != s.signature().sorts().size()) return false;
  for (size_t so = 0; so < m.size(); ++so) {
    if (static_cast<int>(m[so].size()) != s.Size(static_cast<int>(so))) return false;
    for (size_t i = 0; i < m[so].size(); ++i) {
      int d = m[so][i];
      if (d < 0 || d >= s.Size(static_cast<int>(so))) return false;
      forced.push_back({{static_cast<int>(so), static_cast<int>(i)}, {static_cast<int>(so), d}});
    }
  }
  AutomorphismSearch search(s);
  return !search.Run({}, forced, 1).empty();
}

std::vector<ElementMap> Automorphisms(const FiniteStructure& s, const ElementSet& fixed) {
  AutomorphismSearch search(s);
  return search.Run(fixed, {}, 0);
}

std::optional<ElementMap> FindAutomorphism(const FiniteStructure& s, const ElementSet& fixed,
                                           ElementRef from, ElementRef to) {
  AutomorphismSearch search(s);
  auto found = search.Run(fixed, {{from, to}}, 1);
  if (found.empty()) return std::nullopt;
  return found[0];
}

std::map<ElementRef, ElementRef> Orbits(const FiniteStructure& s, const ElementSet& fixed) {
  std::map<ElementRef, ElementRef> parent;
  std::vector<ElementRef> all;
  for (size_t so = 0; so < s.signature().sorts().size(); ++so) {
    for (int i = 0; i < s.Size(static_cast<int>(so)); ++i) {
      ElementRef e{static_cast<int>(so), i};
      all.push_back(e);
      parent[e] = e;
    }
  }
  std::function<ElementRef(ElementRef)> find = [&](ElementRef e) {
    while (!(parent[e] == e)) e = parent[e] = parent[parent[e]];
    return e;
  };
  auto merge = [&](ElementRef a, ElementRef b) {
    a = find(a);
    b = find(b);
    if (b < a) std::swap(a, b);
    parent[b] = a;
  };
  AutomorphismSearch search(s);
  for (const auto& e : all) {
    if (fixed.count(e)) continue;
    for (int d = e.index + 1; d < s.Size(e.sort); ++d) {
      ElementRef t{e.sort, d};
      if (fixed.count(t) || find(e) == find(t)) continue;
      auto found = search.Run(fixed, {{e, t}}, 1);
      if (found.empty()) continue;
      const auto& m = found[0];
      for (size_t so = 0; so < m.size(); ++so) {
        for (size_t i = 0; i < m[so].size(); ++i) {
          merge({static_cast<int>(so), static_cast<int>(i)}, {static_cast<int>(so), m[so][i]});
        }
      }
    }
  }
  std::map<ElementRef, ElementRef> out;
  for (const auto& e : all) out[e] = find(e);
  return out;
}

ElementSet OrbitClosure(const FiniteStructure& s, const ElementSet& a, ClosureMode mode) {
  auto orbits = Orbits(s, a);
  std::map<ElementRef, int> size;
  for (const auto& [e, rep] : orbits) ++size[rep];
  int limit = mode.kind == ClosureMode::Kind::kDcl ? 1 : mode.threshold;
  ElementSet out = a;
  for (const auto& [e, rep] : orbits) {
    if (size[rep] <= limit) out.insert(e);
  }
  return out;
}

ElementSet Ccl(const FiniteStructure& s, const LanguageFamily& fam, const ElementSet& a,
               ClosureMode mode, std::vector<ElementSet>* trace) {
  std::vector<FiniteStructure> reducts;
  for (const auto& l : fam.languages()) reducts.push_back(Reduct(s, l.signature));
  ElementSet cur = a;
  while (true) {
    ElementSet next = cur;
    for (const auto& r : reducts) next = OrbitClosure(r, next, mode);
    if (trace) trace->push_back(next);
    if (next == cur) return cur;
    cur = std::move(next);
  }
}

std::string ElementConstant(const FiniteStructure& s, ElementRef e) {
  const auto& sig = s.signature();
  const std::string& id = s.Universe(e.sort)[e.index];
  bool unique = true;
  for (size_t so = 0; so < sig.sorts().size(); ++so) {
    if (static_cast<int>(so) == e.sort) continue;
    const auto& u = s.Universe(static_cast<int>(so));
    unique = unique && std::find(u.begin(), u.end(), id) == u.end();
  }
  if (unique && IsIdentifier(id) && !sig.HasSymbol(id)) return id;
  return "c" + std::to_string(e.sort) + "_" + std::to_string(e.index);
}

FlatDiagram ComputeFlatDiagram(const FiniteStructure& s) {
  FlatDiagram d;
  d.signature = s.signature();
  const auto& sorts = s.signature().sorts();
  std::map<ElementRef, Term> consts;
  for (size_t so = 0; so < sorts.size(); ++so) {
    for (int i = 0; i < s.Size(static_cast<int>(so)); ++i) {
      ElementRef e{static_cast<int>(so), i};
      std::string name = ElementConstant(s, e);
      d.names[e] = name;
      d.signature.AddFunction(name, {}, sorts[so]);
      consts.emplace(e, Term::Apply(name, {}));
    }
  }
  for (size_t so = 0; so < sorts.size(); ++so) {
    int n = s.Size(static_cast<int>(so));
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        Formula eq = Formula::Equals(consts.at({static_cast<int>(so), i}),
                                     consts.at({static_cast<int>(so), j}));
        d.literals.push_back(i == j ? eq : Formula::Not(eq));
      }
    }
  }
  for (const auto& [name, args] : s.signature().relations()) {
    const auto& t = s.relation(name);
    TupleSpace space(s, args);
    for (size_t c = 0; c < space.Count(); ++c) {
      auto tuple = space.Decode(c);
      std::vector<Term> terms;
      for (size_t k = 0; k < tuple.size(); ++k) terms.push_back(consts.at({t.sorts[k], tuple[k]}));
      Formula a = Formula::Relation(name, terms);
      d.literals.push_back(t.table[c] ? a : Formula::Not(a));
    }
  }
  for (const auto& [name, f] : s.signature().functions()) {
    const auto& t = s.function(name);
    TupleSpace space(s, f.args);
    for (size_t c = 0; c < space.Count(); ++c) {
      auto tuple = space.Decode(c);
      std::vector<Term> terms;
      for (size_t k = 0; k < tuple.size(); ++k) terms.push_back(consts.at({t.sorts[k], tuple[k]}));
      for (int b = 0; b < s.Size(t.result); ++b) {
        Formula a = Formula::Equals(Term::Apply(name, terms), consts.at({t.result, b}));
        d.literals.push_back(t.table[c] == b ? a : Formula::Not(a));
      }
    }
  }
  return d;
}

bool IsMorphism(const PartialMap& map, const FiniteStructure& s1, const FiniteStructure& s2,
                MorphismMode mode) {
  if (s1.signature().sorts() != s2.signature().sorts()) return false;
  if (!s1.signature().IsSubsignatureOf(s2.signature())) return false;
  std::map<ElementRef, ElementRef> m;
  for (const auto& [a, b] : map) {
    if (a.sort != b.sort) return false;
    auto [it, fresh] = m.emplace(a, b);
    if (!fresh && !(it->second == b)) return false;
  }
  if (mode.kind == MorphismMode::Kind::kPartialElementary) {
    TypeInterner types(s1.signature());
    std::vector<ElementRef> dom, img;
    for (const auto& [a, b] : map) {
      dom.push_back(a);
      img.push_back(b);
    }
    return types.TypeOf(s1, dom, mode.rank) == types.TypeOf(s2, img, mode.rank);
  }
  const auto& sorts = s1.signature().sorts();
  for (size_t so = 0; so < sorts.size(); ++so) {
    std::set<int> seen;
    for (int i = 0; i < s1.Size(static_cast<int>(so)); ++i) {
      auto it = m.find({static_cast<int>(so), i});
      if (it == m.end()) return false;
      if (!seen.insert(it->second.index).second) return false;
    }
  }
  auto image = [&](const std::vector<int>& sorts_of, const std::vector<int>& tuple) {
    std::vector<int> out;
    for (size_t k = 0; k < tuple.size(); ++k) out.push_back(m.at({sorts_of[k], tuple[k]}).index);
    return out;
  };
  for (const auto& [name, args] : s1.signature().relations()) {
    const auto& t = s1.relation(name);
    TupleSpace space(s1, args);
    for (size_t c = 0; c < space.Count(); ++c) {
      auto tuple = space.Decode(c);
      if (s1.Holds(name, tuple) != s2.Holds(name, image(t.sorts, tuple))) return false;
    }
  }
  for (const auto& [name, f] : s1.signature().functions()) {
    const auto& t = s1.function(name);
    TupleSpace space(s1, f.args);
    for (size_t c = 0; c < space.Count(); ++c) {
      auto tuple = space.Decode(c);
      int v = t.table[c];
      if (v < 0) continue;
      if (s2.Apply(name, image(t.sorts, tuple)) != m.at({t.result, v}).index) return false;
    }
  }
  return true;
}

std::string PrintElementSet(const FiniteStructure& s, const ElementSet& a) {
  bool many = s.signature().sorts().size() > 1;
  std::string out = "{";
  bool first = true;
  for (const auto& e : a) {
    if (!first) out += ", ";
    first = false;
    if (many) out += s.signature().sorts()[e.sort] + ":";
    out += s.Universe(e.sort)[e.index];
  }
  return out + "}";
}

}  // namespace fusionkit
