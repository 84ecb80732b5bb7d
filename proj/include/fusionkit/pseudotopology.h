#ifndef FUSIONKIT_PSEUDOTOPOLOGY_H_
#define FUSIONKIT_PSEUDOTOPOLOGY_H_

#include <optional>
#include <string>
#include <vector>

#include "fusionkit/definable.h"
#include "fusionkit/fusion.h"
#include "fusionkit/logic.h"
#include "fusionkit/rank.h"
#include "fusionkit/structure.h"

namespace fusionkit {

struct PseudoDenseResult {
  bool dense = true;
  // A class subset of X of full rank missing A.
  std::optional<TupleSet> witness;
};

// A meets every nonempty class subset X' of X with dim X' = dim X.
PseudoDenseResult PseudoDense(const TupleSet& a, const TupleSet& x, const RankedAlgebra& ra);
// Same predicate by scanning every class subset of X.
PseudoDenseResult PseudoDenseBySubsetScan(const TupleSet& a, const TupleSet& x,
                                          const RankedAlgebra& ra);

enum class ClosureSearch { kAny, kLexMinimal };

// kAny: first class set in canonical order containing A in which A is
// pseudo-dense. kLexMinimal: a class set containing A with least (dim, degree).
std::optional<DefinableSet> PseudoClosure(const TupleSet& a, const RankedAlgebra& ra,
                                          ClosureSearch mode = ClosureSearch::kAny);
// All pseudo-closures of A in the class.
std::vector<TupleSet> AllPseudoClosures(const TupleSet& a, const RankedAlgebra& ra);

struct AlmostRelation {
  bool almost_subset = false;
  bool almost_equal = false;
};
// almost_subset: X1 \ X2 is empty or of rank below dim X1.
AlmostRelation AlmostRelations(const TupleSet& x1, const TupleSet& x2, const RankedAlgebra& ra);

// Every class cover X = X1 u X2 has X almost equal to X1 or X2; the empty
// set qualifies vacuously.
bool IsAlmostIrreducible(const TupleSet& x, const RankedAlgebra& ra);
// Exhaustive version over all pairs of class subsets.
bool IsAlmostIrreducibleByCovers(const TupleSet& x, const RankedAlgebra& ra);

struct ApproximabilityFailure {
  DefinableSet set;
};
struct ApproximabilityReport {
  bool approximable() const { return failures.empty(); }
  std::vector<ApproximabilityFailure> failures;
  size_t sets_checked = 0;
};

// Each set definable in `expansion` over S' needs a pseudo-closure in
// `base` (a class over a reduct signature), arities 1..max_arity.
ApproximabilityReport CheckApproximable(StructurePtr s, const DefinabilityClass& expansion,
                                        const DefinabilityClass& base, const RankFunction& r,
                                        int max_arity = 1);

struct ApproxViolation {
  std::vector<int> indices;
  std::vector<DefinableSet> sets;
  // Nonempty common set in which every member is pseudo-dense.
  DefinableSet common;
};
struct ApproxReport {
  bool approximately_interpolative() const { return violations.empty(); }
  std::vector<ApproxViolation> violations;
  size_t families_checked = 0;
};

// Families (X_i) simultaneously pseudo-dense in a nonempty common class set
// with empty intersection. The rank is evaluated on the common class.
ApproxReport CheckApproxInterpolative(const FiniteStructure& s, const LanguageFamily& fam,
                                      const RankFunction& r, const InterpolativeOptions& opt);

// Core search over explicit candidates: common[k] are common class sets,
// candidates[i] the sets for index i; first violating family per common set.
struct ApproxCandidates {
  std::vector<DefinableSet> common;
  std::vector<std::vector<DefinableSet>> per_index;
};
std::vector<ApproxViolation> FindApproxViolations(const ApproxCandidates& c,
                                                  const RankedAlgebra& ra,
                                                  size_t* families_checked = nullptr);

// forall y, z_1..z_n ((gamma(y) & AND delta_i(y, z_i)) -> exists x AND phi_i(x, z_i)).
struct AxiomSchemaInstance {
  Formula phi_common;
  std::vector<Variable> x;
  std::vector<Variable> y;
  std::vector<Formula> phis;
  std::vector<std::vector<Variable>> zs;
  std::vector<Formula> deltas;
  std::optional<Formula> gamma;
};

// Throws Error when a formula uses variables outside its slots or the
// variable groups overlap.
Formula EmitPtAxiom(const AxiomSchemaInstance& inst);

// Tabulated delta(y, z): true exactly on the listed (y ++ z) tuples, written
// as a disjunction of parameter equalities with its parameter assignment.
struct TabulatedFormula {
  Formula formula;
  Assignment params;
};
TabulatedFormula TabulateRelation(const FiniteStructure& s, const std::vector<Variable>& vars,
                                  const std::vector<std::vector<int>>& rows);

// Fills inst.deltas with tabulated delta_i(y, z_i): phi_common(M, y) is
// nonempty and phi_i(M, z_i) is pseudo-dense in it. Returns the parameters
// the tabulations use.
Assignment TabulateDeltas(StructurePtr s, AxiomSchemaInstance& inst, const RankedAlgebra& ra);

enum class InfinityTrigger {
  // Fires when the representatives exceed what any class set of that rank
  // inside X can hold; never fires on a finite Boolean class.
  kCapacity,
  // Fires above the threshold of a threshold rank.
  kThreshold,
};

struct InductiveOptions {
  InfinityTrigger trigger = InfinityTrigger::kCapacity;
  // Check that X and the members of D are almost irreducible and that D
  // represents every almost irreducible class set.
  bool verify = true;
};

struct InductiveStep {
  int alpha = 0;
  size_t representatives = 0;
  bool triggered = false;
};

struct InductiveResult {
  bool dense = false;
  std::vector<InductiveStep> steps;
  TupleSet residual;  // A after stripping
};

// Descends alpha = dim X - 1 .. 0; at each level counts D_alpha(A, X) up to
// almost equality, answers yes on the trigger, and otherwise strips the
// representatives from A. Finally A is pseudo-dense iff what is left meets X.
InductiveResult PseudoDenseInductive(const TupleSet& a, const TupleSet& x,
                                     const std::vector<TupleSet>& d, const RankedAlgebra& ra,
                                     const InductiveOptions& opt = {});

// One representative per almost-equality class of almost irreducible sets.
std::vector<TupleSet> RepresentativeSystem(const RankedAlgebra& ra);

enum class CellMode { kDecomposition, kPatching };

struct CellCover {
  std::vector<size_t> cells;  // indices into C
  // Patching: for each chosen cell, a class-definable bijection from the
  // corresponding part of X onto the cell, as (from, to) tuple codes.
  std::vector<std::vector<std::pair<size_t, size_t>>> bijections;
};

// Smallest subfamily of C whose union U has dim(X sym-diff U) < dim X.
// Patching additionally asks for pieces X^j = X n C_j' with bijections.
std::optional<CellCover> DecomposePseudoCells(const TupleSet& x, const std::vector<TupleSet>& c,
                                              const RankedAlgebra& ra,
                                              CellMode mode = CellMode::kDecomposition);

}  // namespace fusionkit

#endif  // FUSIONKIT_PSEUDOTOPOLOGY_H_
