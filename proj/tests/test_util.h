#ifndef FUSIONKIT_TESTS_TEST_UTIL_H_
#define FUSIONKIT_TESTS_TEST_UTIL_H_

#include <memory>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "fusionkit/definable.h"
#include "fusionkit/logic.h"
#include "fusionkit/parse.h"
#include "fusionkit/pseudotopology.h"
#include "fusionkit/rank.h"
#include "fusionkit/structure.h"
#include "fusionkit/topology.h"

namespace fusionkit::testing {

Signature SignatureFrom(const std::string& text);
FiniteStructure StructureFrom(const std::string& text);
StructurePtr Share(FiniteStructure s);

struct FormulaOptions {
  int depth = 3;
  bool quantifiers = false;
  int max_rank = 1;
  int term_depth = 2;
};

Term RandomTerm(const Signature& sig, const std::string& sort,
                const std::vector<Variable>& vars, int depth, std::mt19937& rng);
Formula RandomFormula(const Signature& sig, const std::vector<Variable>& vars,
                      const FormulaOptions& opt, std::mt19937& rng);
Formula RandomSentence(const Signature& sig, int depth, int max_rank, std::mt19937& rng);

// Pure-set signature with one sort V and the listed unary predicates.
Signature UnarySignature(const std::vector<std::string>& preds);
FiniteStructure PureSet(int n, const std::vector<std::string>& preds = {},
                        const std::vector<std::vector<int>>& members = {});

// Every subset of M^vars, as tuple sets.
std::vector<TupleSet> AllSubsets(size_t universe);

// Boolean algebra generated by `gens` inside a universe of the given size.
std::set<TupleSet> GeneratedAlgebra(const std::vector<TupleSet>& gens, size_t universe);

// Definable subsets of M^vars of quantifier rank <= 1, computed as the
// Boolean algebra generated by atoms and projections of quantifier-free sets.
std::set<TupleSet> RankOneOracle(const FiniteStructure& s, const Signature& sig,
                                 const std::vector<Variable>& vars, const Assignment& params,
                                 int max_rank, int term_depth = 1);

bool SameOnAll(const std::vector<FiniteStructure>& models, const Formula& a, const Formula& b,
               const std::vector<Variable>& vars);

// Every loopless undirected graph on n labelled vertices (relation E).
std::vector<FiniteStructure> AllGraphs(int n);

// Random preorder on n points as the binary relation Le (reflexive and
// transitive closure of random edges).
FiniteStructure RandomPreorder(int n, std::mt19937& rng);
// Basis Le(x, y): the down-set of y, giving the Alexandrov topology.
TopologyBasis DownSetBasis(StructurePtr host);

// Counts per basic-facts item (index 1..6) over all A in `as` and all class
// sets X, X' of the ranked algebra. Item 1 is counted only where the class
// atoms inside X are singletons.
struct BasicFactsTally {
  size_t instances[7] = {};
  size_t failures[7] = {};
  std::vector<std::string> examples;
  size_t total_failures() const;
};
void CheckBasicFacts(const RankedAlgebra& ra, const std::vector<TupleSet>& as,
                     BasicFactsTally& tally);

// Emits the axiom for one schema instance with deltas tabulated from pseudo
// density (and nonemptiness of the common set), evaluates it on S, and runs
// the family check on the same parametrized sets.
struct CoherenceResult {
  bool axiom_true = false;
  bool checker_passes = false;
  Formula axiom;
};
CoherenceResult RunCoherence(StructurePtr s, const Formula& phi_common,
                             const std::vector<Variable>& x, const std::vector<Variable>& y,
                             const std::vector<Formula>& phis,
                             const std::vector<std::vector<Variable>>& zs,
                             const RankedAlgebra& ra);

}  // namespace fusionkit::testing

#endif  // FUSIONKIT_TESTS_TEST_UTIL_H_
