#ifndef FUSIONKIT_RANK_H_
#define FUSIONKIT_RANK_H_

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "fusionkit/definable.h"
#include "fusionkit/logic.h"
#include "fusionkit/structure.h"

namespace fusionkit {

// Ordinal ranks are naturals; the empty set has rank kMinusInfinity.
constexpr int kMinusInfinity = -1;

std::string RankToString(int dim);

// One row of a tabulated rank: the set defined by `formula` has rank `dim`.
struct RankTableEntry {
  std::string formula;
  int dim = 0;
};

class RankFunction {
 public:
  enum class Kind { kThreshold, kGrowth, kTable, kWeighted, kCustom };
  using BlockEvaluator = std::function<int(const DefinableAlgebra&, size_t block)>;
  using SetEvaluator = std::function<int(const DefinableAlgebra&, const TupleSet&)>;

  // dim X = 1 iff X contains a class atom with more than t tuples.
  static RankFunction Threshold(int t);
  // Degree of the counting polynomial of each class atom over fresh extensions.
  static RankFunction Growth();
  static RankFunction Table(std::vector<RankTableEntry> rows);
  // dim X = max of per-tuple weights.
  static RankFunction Weighted(std::function<int(const std::vector<int>&)> weight,
                               std::string name = "weighted");
  // Arbitrary evaluator; axioms are whatever validation finds.
  static RankFunction Custom(SetEvaluator eval, std::string name = "custom");
  // "threshold:t", "growth", "table:FILE".
  static RankFunction Parse(const std::string& text);
  // Rows "FORMULA => DIM" with DIM a natural or -inf; # starts a comment.
  static std::vector<RankTableEntry> ParseTable(const std::string& text);

  Kind kind() const { return kind_; }
  const std::string& name() const { return name_; }
  int threshold() const { return t_; }
  // Max-additive over class atoms, so atoms determine every rank.
  bool atomic() const { return kind_ != Kind::kTable && kind_ != Kind::kCustom; }
  const std::vector<RankTableEntry>& table() const { return table_; }

  // Per-block ranks for atomic kinds.
  std::vector<int> BlockDims(const DefinableAlgebra& alg) const;
  // Rank of a class set for non-atomic kinds; throws if undefined.
  int SetDim(const DefinableAlgebra& alg, const TupleSet& x) const;
  // Kind-specific smallness used by the third axiom: per block for atomic
  // kinds (a set is small iff all its blocks are), per set otherwise.
  bool BlockSmall(const DefinableAlgebra& alg, size_t block) const;
  bool SetSmall(const DefinableAlgebra& alg, const TupleSet& x) const;

 private:
  Kind kind_ = Kind::kThreshold;
  std::string name_;
  int t_ = 1;
  std::vector<RankTableEntry> table_;
  BlockEvaluator block_;
  SetEvaluator set_;
};

// Degree of the polynomial through (k, counts[k]), k = 0..n-1.
int InterpolationDegree(const std::vector<long long>& counts);

// Rank evaluation bound to one algebra. Class sets are the algebra's sets.
class RankedAlgebra {
 public:
  RankedAlgebra(std::shared_ptr<const DefinableAlgebra> alg, RankFunction r);
  RankedAlgebra(StructurePtr host, const DefinabilityClass& cls, std::vector<Variable> vars,
                RankFunction r);

  const DefinableAlgebra& algebra() const { return *alg_; }
  std::shared_ptr<const DefinableAlgebra> algebra_ptr() const { return alg_; }
  const RankFunction& rank() const { return r_; }
  size_t universe() const { return alg_->space().Count(); }
  // Definable sets are closed under Boolean operations (no size cap).
  bool boolean() const { return !alg_->cls().max_formula_size.has_value(); }

  // Rank of a class-definable set; throws Error otherwise.
  int Dim(const TupleSet& x) const;
  int Dim(const DefinableSet& x) const { return Dim(x.extension); }
  int BlockDim(size_t block) const;
  bool Small(const TupleSet& x) const;
  // Blocks contained in x.
  std::vector<size_t> BlocksIn(const TupleSet& x) const;
  // Minimal m such that x is almost equal to a union of m almost irreducible
  // class sets.
  int Degree(const TupleSet& x) const;
  // Class sets contained in x.
  std::vector<TupleSet> ClassSubsets(const TupleSet& x) const;
  const std::vector<DefinableSet>& Sets() const { return alg_->Sets(); }

 private:
  std::shared_ptr<const DefinableAlgebra> alg_;
  RankFunction r_;
  std::vector<int> block_dims_;
  std::vector<bool> block_small_;
};

// X is almost equal to X1 or X2 for every cover X = X1 u X2 by class
// subsets, checked pair by pair.
bool AlmostIrreducibleByCovers(const RankedAlgebra& ra, const TupleSet& x);

struct RankViolation {
  int axiom = 0;  // 1: max, 2: emptiness, 3: smallness, 0: undefined
  std::vector<DefinableSet> sets;
  std::string detail;
};

struct RankReport {
  bool ok() const { return violations.empty(); }
  std::vector<RankViolation> violations;
  size_t sets_checked = 0;
};

// Checks the three rank axioms over all pairs of class sets.
RankReport ValidateRank(const RankedAlgebra& ra);
RankReport ValidateRank(const RankFunction& r, StructurePtr s, const DefinabilityClass& cls,
                        int max_arity = 1);

}  // namespace fusionkit

#endif  // FUSIONKIT_RANK_H_
