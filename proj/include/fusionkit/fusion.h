#ifndef FUSIONKIT_FUSION_H_
#define FUSIONKIT_FUSION_H_

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fusionkit/closure.h"
#include "fusionkit/definable.h"
#include "fusionkit/logic.h"
#include "fusionkit/structure.h"

namespace fusionkit {

// L-cap-definable supersets X^i of the X_i with empty intersection.
struct SeparationCertificate {
  std::vector<DefinableSet> sets;
};

// Valid iff every X_i lies in X^i and the X^i have empty intersection.
bool VerifySeparation(const std::vector<TupleSet>& xs, const SeparationCertificate& cert);

// A separating family exists iff the least definable supersets (hulls) have
// empty intersection; the hulls are returned as the certificate.
std::optional<SeparationCertificate> FindSeparation(const std::vector<TupleSet>& xs,
                                                    const DefinableAlgebra& common);
// Builds the algebra of `cls` over the host and variables of xs[0].
// Throws Error on an arity or sort mismatch.
std::optional<SeparationCertificate> FindSeparation(const std::vector<DefinableSet>& xs,
                                                    const DefinabilityClass& cls);

struct InterpolativeOptions {
  // Classes with an empty signature default to the family's languages.
  DefinabilityClass common;
  std::vector<DefinabilityClass> per_index;
  int max_family = 2;
  int max_arity = 1;
  // Keep one violation per orbit of Aut(S|L-cap) acting on families.
  bool dedup = true;
};

struct InterpolativeViolation {
  std::vector<int> indices;
  std::vector<DefinableSet> sets;
  // Hulls over L-cap and a tuple in all of them: no separation exists.
  std::vector<TupleSet> hulls;
  std::vector<int> common_point;
};

struct InterpolativityReport {
  bool interpolative() const { return violations.empty(); }
  std::vector<InterpolativeViolation> violations;
  size_t families_checked = 0;
};

InterpolativityReport CheckInterpolative(const FiniteStructure& s, const LanguageFamily& fam,
                                         const InterpolativeOptions& opt);

// Fills empty class signatures from the family and checks S against it.
InterpolativeOptions ResolveClasses(const LanguageFamily& fam, InterpolativeOptions opt);

// Visits, for arity 1..max_arity and each sort tuple, the reduct algebras
// S|L_i and S|L-cap over the default variables.
struct ReductAlgebras {
  std::vector<Variable> vars;
  std::vector<DefinableAlgebra> per_index;
  DefinableAlgebra common;
};
void ForEachArity(const FiniteStructure& s, const LanguageFamily& fam,
                  const InterpolativeOptions& opt,
                  const std::function<void(const ReductAlgebras&)>& visit);

// Sentences verified over all structures with 1..max_size elements per sort.
struct ModelClass {
  int max_size = 3;
};

// All models (up to isomorphism) of `f` over `sig` in the class.
std::vector<FiniteStructure> ClassModels(const Signature& sig, const Formula& f,
                                         const ModelClass& mc);

struct PairwiseOptions {
  ModelClass models;
  // Candidate sentences up to this size, rank and variable pool.
  int max_size = 5;
  int max_rank = 2;
  int vars_per_sort = 2;
  // Characteristic sentences are tried up to this rank when search fails.
  int max_hintikka_rank = 4;
};

// Raised when phi1 and phi2 have a joint model in the class.
class ConsistentPairError : public Error {
 public:
  ConsistentPairError(const std::string& message, FiniteStructure model)
      : Error(message), model_(std::move(model)) {}
  const FiniteStructure& model() const { return model_; }

 private:
  FiniteStructure model_;
};

// First L-cap sentence psi with phi1 |= psi and phi2 |= ~psi over the class,
// falling back to a disjunction of characteristic sentences.
std::optional<Formula> PairwiseInterpolantBruteforce(const Formula& phi1, const Signature& sig1,
                                                     const Formula& phi2, const Signature& sig2,
                                                     const PairwiseOptions& opt);

using PairwiseOracle = std::function<std::optional<Formula>(
    const Formula& phi1, const Signature& sig1, const Formula& phi2, const Signature& sig2)>;

PairwiseOracle BruteforceOracle(PairwiseOptions opt);

struct InterpolantFamily {
  std::vector<Formula> formulas;
};

// Raised when the oracle finds no interpolant; names the offending pair.
class OracleFailure : public Error {
 public:
  OracleFailure(const std::string& message, Formula left, Formula right)
      : Error(message), left_(std::move(left)), right_(std::move(right)) {}
  const Formula& left() const { return left_; }
  const Formula& right() const { return right_; }

 private:
  Formula left_;
  Formula right_;
};

// One L-cap sentence per input sentence, each entailed by its input and
// jointly inconsistent, built by induction on the number of sentences.
InterpolantFamily NaryInterpolants(const std::vector<Formula>& phis, const LanguageFamily& fam,
                                   const PairwiseOracle& oracle);

// Index-wise entailment and joint inconsistency over the class.
struct InterpolantCheck {
  bool entailed = true;
  bool inconsistent = true;
  std::string detail;
};
InterpolantCheck VerifyInterpolants(const std::vector<Formula>& phis,
                                    const InterpolantFamily& fam_out, const LanguageFamily& fam,
                                    const ModelClass& mc);

struct JcpFailure {
  ElementSet base;
  std::string sort;
  // Element realizing each index's type over the base.
  std::vector<int> realizers;
};

struct JcpReport {
  bool holds() const { return failures.empty(); }
  std::vector<JcpFailure> failures;
  size_t bases_checked = 0;
};

// For every closed base B with |B| <= max_base and every choice of per-index
// 1-types over B with a common L-cap restriction, checks joint realization.
JcpReport CheckJcp(const FiniteStructure& s, const LanguageFamily& fam, int max_base, int qrank,
                   ClosureMode mode = ClosureMode::Dcl());

// Extension of S by up to `max_new` elements per sort in which every reduct
// S|L_i keeps the rank-q types of old tuples and the X_i meet; relational
// signatures only.
std::optional<FiniteStructure> ProbeExtension(const FiniteStructure& s, const LanguageFamily& fam,
                                              const InterpolativeViolation& v, int max_new,
                                              int rank);

}  // namespace fusionkit

#endif  // FUSIONKIT_FUSION_H_
