#include "fusionkit/rank.h"

#include <algorithm>
#include <map>

#include "fusionkit/parse.h"

namespace fusionkit {

std::string RankToString(int dim) {
  return dim == kMinusInfinity ? "-inf" : std::to_string(dim);
}

namespace {

std::string Trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

int ParseDim(const std::string& text) {
  std::string t = Trim(text);
  if (t == "-inf") return kMinusInfinity;
  try {
    size_t used = 0;
    int v = std::stoi(t, &used);
    if (used == t.size() && v >= 0) return v;
  } catch (const std::exception&) {
  }
  throw Error("bad rank value '" + t + "'");
}

std::vector<long long> GrowthCounts(const DefinableAlgebra& alg, const Formula& f) {
  FiniteStructure base = Reduct(*alg.host(), alg.cls().signature);
  std::vector<long long> counts;
  for (size_t k = 0; k <= alg.vars().size(); ++k) {
    FiniteStructure ext = ExtendFresh(base, static_cast<int>(k));
    counts.push_back(static_cast<long long>(ExtensionOf(ext, f, alg.vars(), alg.params()).Count()));
  }
  return counts;
}

}  // namespace

int InterpolationDegree(const std::vector<long long>& counts) {
  std::vector<long long> d = counts;
  int degree = kMinusInfinity;
  for (size_t order = 0; !d.empty(); ++order) {
    if (std::any_of(d.begin(), d.end(), [](long long v) { return v != 0; })) {
      degree = static_cast<int>(order);
    }
    std::vector<long long> next;
    for (size_t i = 1; i < d.size(); ++i) next.push_back(d[i] - d[i - 1]);
    d = std::move(next);
  }
  return degree;
}

RankFunction RankFunction::Threshold(int t) {
  if (t < 0) throw Error("threshold must be nonnegative");
  RankFunction r;
  r.kind_ = Kind::kThreshold;
  r.name_ = "threshold:" + std::to_string(t);
  r.t_ = t;
  r.block_ = [t](const DefinableAlgebra& alg, size_t b) {
    return static_cast<int>(alg.Block(b).Count()) > t ? 1 : 0;
  };
  return r;
}

RankFunction RankFunction::Growth() {
  RankFunction r;
  r.kind_ = Kind::kGrowth;
  r.name_ = "growth";
  r.block_ = [](const DefinableAlgebra& alg, size_t b) {
    return InterpolationDegree(GrowthCounts(alg, alg.BlockFormula(b)));
  };
  return r;
}

RankFunction RankFunction::Table(std::vector<RankTableEntry> rows) {
  RankFunction r;
  r.kind_ = Kind::kTable;
  r.name_ = "table";
  r.table_ = std::move(rows);
  return r;
}

RankFunction RankFunction::Weighted(std::function<int(const std::vector<int>&)> weight,
                                    std::string name) {
  RankFunction r;
  r.kind_ = Kind::kWeighted;
  r.name_ = std::move(name);
  r.block_ = [weight](const DefinableAlgebra& alg, size_t b) {
    int best = kMinusInfinity;
    for (size_t c : alg.Block(b).Elements()) {
      best = std::max(best, weight(alg.space().Decode(c)));
    }
    return best;
  };
  return r;
}

RankFunction RankFunction::Custom(SetEvaluator eval, std::string name) {
  RankFunction r;
  r.kind_ = Kind::kCustom;
  r.name_ = std::move(name);
  r.set_ = std::move(eval);
  return r;
}

std::vector<RankTableEntry> RankFunction::ParseTable(const std::string& text) {
  std::vector<RankTableEntry> rows;
  size_t pos = 0;
  while (pos <= text.size()) {
    size_t nl = text.find('\n', pos);
    if (nl == std::string::npos) nl = text.size();
    std::string line = text.substr(pos, nl - pos);
    pos = nl + 1;
    if (auto h = line.find('#'); h != std::string::npos) line = line.substr(0, h);
    line = Trim(line);
    if (line.empty()) continue;
    size_t arrow = line.rfind("=>");
    if (arrow == std::string::npos) throw Error("rank table row needs 'FORMULA => DIM': " + line);
    rows.push_back({Trim(line.substr(0, arrow)), ParseDim(line.substr(arrow + 2))});
  }
  return rows;
}

RankFunction RankFunction::Parse(const std::string& text) {
  if (text == "growth") return Growth();
  if (text.rfind("threshold:", 0) == 0) {
    std::string t = text.substr(10);
    try {
      size_t used = 0;
      int v = std::stoi(t, &used);
      if (used == t.size()) return Threshold(v);
    } catch (const std::exception&) {
    }
    throw Error("bad threshold '" + t + "'");
  }
  if (text.rfind("table:", 0) == 0) {
    RankFunction r = Table(ParseTable(ReadFile(text.substr(6))));
    r.name_ = text;
    return r;
  }
  throw Error("unknown rank '" + text + "' (threshold:t | growth | table:FILE)");
}

std::vector<int> RankFunction::BlockDims(const DefinableAlgebra& alg) const {
  if (!atomic()) throw Error("rank " + name_ + " is not determined by class atoms");
  std::vector<int> out;
  for (size_t b = 0; b < alg.NumBlocks(); ++b) out.push_back(block_(alg, b));
  return out;
}

int RankFunction::SetDim(const DefinableAlgebra& alg, const TupleSet& x) const {
  if (kind_ == Kind::kCustom) return set_(alg, x);
  if (kind_ == Kind::kTable) {
    for (const auto& row : table_) {
      Formula f = ParseFormula(row.formula, alg.cls().signature, alg.vars());
      bool fits = true;
      for (const auto& v : FreeVariables(f)) {
        if (std::find(alg.vars().begin(), alg.vars().end(), v) == alg.vars().end() &&
            !alg.params().count(v)) {
          fits = false;
        }
      }
      if (fits && ExtensionOf(*alg.host(), f, alg.vars(), alg.params()) == x) return row.dim;
    }
    throw Error("rank table has no row for " + Print(alg.FormulaFor(x)));
  }
  int best = kMinusInfinity;
  for (size_t b = 0; b < alg.NumBlocks(); ++b) {
    if (alg.Block(b).SubsetOf(x)) best = std::max(best, block_(alg, b));
  }
  return best;
}

bool RankFunction::BlockSmall(const DefinableAlgebra& alg, size_t b) const {
  switch (kind_) {
    case Kind::kGrowth: {
      auto c = GrowthCounts(alg, alg.BlockFormula(b));
      return std::all_of(c.begin(), c.end(), [&](long long v) { return v == c[0]; });
    }
    case Kind::kWeighted:
      return block_(alg, b) <= 0;
    default:
      return static_cast<int>(alg.Block(b).Count()) <= t_;
  }
}

bool RankFunction::SetSmall(const DefinableAlgebra& alg, const TupleSet& x) const {
  for (size_t b = 0; b < alg.NumBlocks(); ++b) {
    if (alg.Block(b).SubsetOf(x) && !BlockSmall(alg, b)) return false;
  }
  return true;
}

RankedAlgebra::RankedAlgebra(std::shared_ptr<const DefinableAlgebra> alg, RankFunction r)
    : alg_(std::move(alg)), r_(std::move(r)) {
  if (r_.atomic()) block_dims_ = r_.BlockDims(*alg_);
  for (size_t b = 0; b < alg_->NumBlocks(); ++b) {
    block_small_.push_back(r_.atomic() ? r_.BlockSmall(*alg_, b) : false);
  }
}

bool RankedAlgebra::Small(const TupleSet& x) const {
  if (!r_.atomic()) return r_.SetSmall(*alg_, x);
  for (size_t b : BlocksIn(x)) {
    if (!block_small_[b]) return false;
  }
  return true;
}

RankedAlgebra::RankedAlgebra(StructurePtr host, const DefinabilityClass& cls,
                             std::vector<Variable> vars, RankFunction r)
    : RankedAlgebra(std::make_shared<DefinableAlgebra>(std::move(host), cls, std::move(vars)),
                    std::move(r)) {}

int RankedAlgebra::Dim(const TupleSet& x) const {
  if (!alg_->IsDefinable(x)) throw Error("rank is only defined on class-definable sets");
  if (!r_.atomic()) return r_.SetDim(*alg_, x);
  int best = kMinusInfinity;
  for (size_t b = 0; b < alg_->NumBlocks(); ++b) {
    if (alg_->Block(b).SubsetOf(x)) best = std::max(best, block_dims_[b]);
  }
  return best;
}

int RankedAlgebra::BlockDim(size_t block) const {
  if (r_.atomic()) return block_dims_[block];
  return r_.SetDim(*alg_, alg_->Block(block));
}

std::vector<size_t> RankedAlgebra::BlocksIn(const TupleSet& x) const {
  std::vector<size_t> out;
  for (size_t b = 0; b < alg_->NumBlocks(); ++b) {
    if (alg_->Block(b).SubsetOf(x)) out.push_back(b);
  }
  return out;
}

std::vector<TupleSet> RankedAlgebra::ClassSubsets(const TupleSet& x) const {
  std::vector<TupleSet> out;
  if (boolean()) {
    auto blocks = BlocksIn(x);
    if (blocks.size() > 20) throw Error("too many class subsets to enumerate");
    for (size_t mask = 0; mask < (size_t{1} << blocks.size()); ++mask) {
      TupleSet s(universe());
      for (size_t i = 0; i < blocks.size(); ++i) {
        if (mask >> i & 1) s = s | alg_->Block(blocks[i]);
      }
      out.push_back(std::move(s));
    }
    return out;
  }
  for (const auto& d : Sets()) {
    if (d.extension.SubsetOf(x)) out.push_back(d.extension);
  }
  return out;
}

namespace {

bool AlmostSubsetIn(const RankedAlgebra& ra, const TupleSet& a, const TupleSet& b) {
  TupleSet diff = a - b;
  return diff.Empty() || ra.Dim(diff) < ra.Dim(a);
}

}  // namespace

bool AlmostIrreducibleByCovers(const RankedAlgebra& ra, const TupleSet& x) {
  auto subs = ra.ClassSubsets(x);
  for (size_t i = 0; i < subs.size(); ++i) {
    for (size_t j = i; j < subs.size(); ++j) {
      if (!((subs[i] | subs[j]) == x)) continue;
      if (!AlmostSubsetIn(ra, x, subs[i]) && !AlmostSubsetIn(ra, x, subs[j])) return false;
    }
  }
  return true;
}

int RankedAlgebra::Degree(const TupleSet& x) const {
  if (x.Empty()) return 0;
  int d = Dim(x);
  if (r_.atomic() && boolean()) {
    int m = 0;
    for (size_t b : BlocksIn(x)) m += block_dims_[b] == d;
    return m;
  }
  std::vector<TupleSet> cands;
  for (const auto& s : Sets()) {
    if (!s.extension.Empty() && AlmostIrreducibleByCovers(*this, s.extension)) {
      cands.push_back(s.extension);
    }
  }
  if (cands.size() > 64) throw Error("degree search over too many candidates");
  int max_m = static_cast<int>(std::min<size_t>(cands.size(), 4));
  std::vector<size_t> pick;
  std::function<bool(size_t, int, const TupleSet&)> search = [&](size_t from, int left,
                                                                 const TupleSet& u) {
    if (left == 0) return AlmostSubsetIn(*this, x, u) && AlmostSubsetIn(*this, u, x);
    for (size_t i = from; i < cands.size(); ++i) {
      if (search(i + 1, left - 1, u | cands[i])) return true;
    }
    return false;
  };
  for (int m = 1; m <= max_m; ++m) {
    if (search(0, m, TupleSet(universe()))) return m;
  }
  throw Error("no decomposition into at most " + std::to_string(max_m) +
              " almost irreducible sets");
}

RankReport ValidateRank(const RankedAlgebra& ra) {
  RankReport rep;
  const auto& sets = ra.Sets();
  std::map<TupleSet, int> dims;
  for (const auto& s : sets) {
    ++rep.sets_checked;
    try {
      dims[s.extension] = ra.Dim(s.extension);
    } catch (const Error& e) {
      rep.violations.push_back({0, {s}, e.what()});
    }
  }
  for (const auto& s : sets) {
    auto it = dims.find(s.extension);
    if (it == dims.end()) continue;
    int d = it->second;
    bool empty = s.extension.Empty();
    if ((d == kMinusInfinity) != empty) {
      rep.violations.push_back({2, {s}, "dim = " + RankToString(d) +
                                            (empty ? " on the empty set" : " on a nonempty set")});
    }
    if (!empty && d != kMinusInfinity) {
      bool small = ra.Small(s.extension);
      if ((d == 0) != small) {
        rep.violations.push_back({3, {s}, "dim = " + RankToString(d) + " on a " +
                                              (small ? "small" : "large") + " set"});
      }
    }
  }
  for (size_t i = 0; i < sets.size(); ++i) {
    auto a = dims.find(sets[i].extension);
    if (a == dims.end()) continue;
    for (size_t j = i + 1; j < sets.size(); ++j) {
      auto b = dims.find(sets[j].extension);
      if (b == dims.end()) continue;
      auto u = dims.find(sets[i].extension | sets[j].extension);
      if (u == dims.end()) continue;
      if (u->second != std::max(a->second, b->second)) {
        rep.violations.push_back(
            {1, {sets[i], sets[j]},
             "dim of union = " + RankToString(u->second) + ", max = " +
                 RankToString(std::max(a->second, b->second))});
      }
    }
  }
  return rep;
}

RankReport ValidateRank(const RankFunction& r, StructurePtr s, const DefinabilityClass& cls,
                        int max_arity) {
  RankReport total;
  std::vector<std::vector<std::string>> sort_tuples = {{}};
  const auto& sorts = s->signature().sorts();
  for (int n = 1; n <= max_arity; ++n) {
    std::vector<std::vector<std::string>> next;
    for (const auto& t : sort_tuples) {
      for (const auto& so : sorts) {
        auto u = t;
        u.push_back(so);
        next.push_back(u);
      }
    }
    sort_tuples = next;
    for (const auto& t : sort_tuples) {
      RankedAlgebra ra(s, cls, DefaultVariables(t), r);
      RankReport rep = ValidateRank(ra);
      total.sets_checked += rep.sets_checked;
      for (auto& v : rep.violations) total.violations.push_back(std::move(v));
    }
  }
  return total;
}

}  // namespace fusionkit
