#ifndef FUSIONKIT_TOPOLOGY_H_
#define FUSIONKIT_TOPOLOGY_H_

#include <optional>
#include <string>
#include <vector>

#include "fusionkit/definable.h"
#include "fusionkit/logic.h"
#include "fusionkit/rank.h"
#include "fusionkit/structure.h"

namespace fusionkit {

// Basis formula beta(x, y): the sets beta(S, b), b in M^y, form an open basis
// on M^x.
struct TopologyBasis {
  StructurePtr host;
  Formula beta;
  std::vector<Variable> x;
  std::vector<Variable> y;

  // Parses "x1:S, x2:S ; y1:S : FORMULA".
  static TopologyBasis Parse(StructurePtr host, const std::string& text);
};

// Finite topology generated by a basis. Every point has a least open
// neighborhood, which is itself a basic set.
class FiniteTopology {
 public:
  // Throws Error unless the basis covers M^x and has the intersection property.
  explicit FiniteTopology(const TopologyBasis& basis);
  // Discrete or indiscrete topology on M^vars.
  static FiniteTopology Discrete(StructurePtr host, std::vector<Variable> vars);
  static FiniteTopology Indiscrete(StructurePtr host, std::vector<Variable> vars);
  // Reason the basis is invalid, or nullopt.
  static std::optional<std::string> Validate(const TopologyBasis& basis);

  const TopologyBasis& basis() const { return basis_; }
  const TupleSpace& space() const { return space_; }
  size_t universe() const { return space_.Count(); }
  // Distinct basic sets.
  const std::vector<TupleSet>& BasicSets() const { return basic_; }
  const TupleSet& Neighborhood(size_t p) const { return least_[p]; }

  bool IsOpen(const TupleSet& a) const;
  TupleSet Closure(const TupleSet& a) const;
  TupleSet Interior(const TupleSet& a) const;
  TupleSet Frontier(const TupleSet& a) const;
  // Every neighborhood of every point of Y meets A n Y.
  bool Dense(const TupleSet& a, const TupleSet& y) const;

 private:
  FiniteTopology() = default;
  void Build(const std::vector<TupleSet>& instances);

  TopologyBasis basis_;
  TupleSpace space_;
  std::vector<TupleSet> basic_;
  std::vector<TupleSet> least_;
};

// min over neighborhoods U of p of dim(U n X); the least one attains it.
int LocalDim(size_t p, const TupleSet& x, const FiniteTopology& t, const RankedAlgebra& ra);
TupleSet Essence(const TupleSet& x, const FiniteTopology& t, const RankedAlgebra& ra);
TupleSet Residue(const TupleSet& x, const FiniteTopology& t, const RankedAlgebra& ra);

struct TopologyOps {
  DefinableSet closure;
  DefinableSet interior;
  DefinableSet frontier;
  DefinableSet essence;
  DefinableSet residue;
};
// Sets outside the class carry tabulated formulas.
TopologyOps ComputeTopologyOps(const TupleSet& x, const FiniteTopology& t,
                               const RankedAlgebra& ra);

struct DimCompatIssue {
  enum class Kind {
    kFrontier,      // dim fr(X) >= dim X
    kResidue,       // dim rs(X) >= dim X
    kUndefinable,   // fr(X), rs(X) or a local piece is outside the class
    kEquivalence,   // pseudo-dense differs from dense in es(X)
    kDenseNotPseudoDense,  // dense in X but not pseudo-dense
  };
  Kind kind;
  DefinableSet x;
  std::optional<TupleSet> a;
  std::string detail;
};

struct DimCompatOptions {
  size_t samples = 100;  // sampled A per class set for the equivalence checks
  unsigned seed = 0;
};

struct DimCompatReport {
  bool frontier_inequality = true;
  bool residue_inequality = true;
  bool compatible() const { return frontier_inequality && residue_inequality && defined; }
  bool defined = true;
  std::vector<DimCompatIssue> issues;
  size_t sets_checked = 0;
  size_t samples_checked = 0;
};

// Checks both inequalities over every class set; with the frontier inequality
// also dense => pseudo-dense, and on compatible pairs pseudo-dense <=> dense
// in es(X), for sampled A.
DimCompatReport CheckDimCompatible(const FiniteTopology& t, const RankedAlgebra& ra,
                                   const DimCompatOptions& opt = {});
DimCompatReport CheckDimCompatible(const TopologyBasis& basis, const RankFunction& r,
                                   const DefinabilityClass& cls,
                                   const DimCompatOptions& opt = {});

struct OpenCoreReport {
  bool open_core() const { return failures.empty(); }
  // Expansion-definable sets whose closure is not base-definable.
  std::vector<DefinableSet> failures;
  size_t sets_checked = 0;
};

// The closure of each set definable in `expansion` is definable in `base`.
OpenCoreReport CheckOpenCore(const FiniteTopology& t, const DefinabilityClass& expansion,
                             const DefinabilityClass& base);

}  // namespace fusionkit

#endif  // FUSIONKIT_TOPOLOGY_H_
