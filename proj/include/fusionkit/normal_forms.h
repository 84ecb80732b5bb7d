#ifndef FUSIONKIT_NORMAL_FORMS_H_
#define FUSIONKIT_NORMAL_FORMS_H_

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fusionkit/logic.h"
#include "fusionkit/structure.h"

namespace fusionkit {

// exists y. matrix, with matrix flat and at most one witness y per x.
struct EFlatFormula {
  std::vector<Variable> x;
  std::vector<Variable> y;
  Formula matrix;
  std::vector<std::string> trace;

  Formula ToFormula() const { return Formula::Exists(y, matrix); }
};

// Witness variables _w0, _w1, ... avoiding the names already in use.
class WitnessNames {
 public:
  WitnessNames() : names_("_w") {}
  explicit WitnessNames(const Formula& avoid) : names_("_w", VariableNames(avoid)) {}
  Variable Next(const std::string& sort) { return names_.Next(sort); }
  void Reserve(const Formula& f);

 private:
  FreshNames names_;
};

// phi_t(x, y), equivalent to t(x) = y.
EFlatFormula FlattenTerm(const Term& t, const Variable& result, const Signature& sig,
                         WitnessNames* names = nullptr);
// Throws Error when `lit` is not a literal.
EFlatFormula LiteralToEFlat(const Formula& lit, const Signature& sig,
                            WitnessNames* names = nullptr);
// Conjunction with witnesses renamed apart; the empty list gives true.
EFlatFormula EFlatConjoin(const std::vector<EFlatFormula>& fs, WitnessNames* names = nullptr);

// Disjunctive normal form as lists of literals. Fails past `max_disjuncts`.
std::vector<std::vector<Formula>> Dnf(const Formula& f,
                                      std::optional<size_t> max_disjuncts = std::nullopt);
Formula DnfFormula(const Formula& f, std::optional<size_t> max_disjuncts = std::nullopt);
// Throws Error unless `f` is quantifier-free. The empty list stands for false.
std::vector<EFlatFormula> QfToEFlatDisjunction(
    const Formula& f, const Signature& sig,
    std::optional<size_t> max_disjuncts = std::nullopt);
// Replaces every atom by its E-flat form.
Formula FlattenAtoms(const Formula& f, const Signature& sig);

// exists y. matrix with matrix quantifier-free and at most `bound` witnesses
// per x in every structure of the named scope.
struct BoundedFormula {
  std::vector<Variable> y;
  Formula matrix;
  int bound = 1;
  std::string scope;

  Formula ToFormula() const { return Formula::Exists(y, matrix); }
};

// Witnesses y for `matrix` under `a`, by backtracking over the conjuncts;
// stops once `limit` are found.
int CountWitnesses(const FiniteStructure& s, const Formula& matrix, const std::vector<Variable>& y,
                   const Assignment& a, int limit);
// Truth of exists y. matrix under `a`.
bool HoldsExists(const FiniteStructure& s, const Formula& matrix, const std::vector<Variable>& y,
                 const Assignment& a);

BoundedFormula BeConjoin(const std::vector<BoundedFormula>& fs, const std::string& scope = "");
// Largest number of witnesses over all x tuples and structures.
int MaxWitnesses(const Formula& matrix, const std::vector<Variable>& x,
                 const std::vector<Variable>& y, const std::vector<FiniteStructure>& models);
bool CheckBound(const BoundedFormula& f, const std::vector<FiniteStructure>& models);

// Literal buckets keyed by language label; kCommonBucket holds L-cap literals.
inline constexpr char kCommonBucket[] = "common";
std::map<std::string, Formula> SplitFlat(const Formula& f, const LanguageFamily& fam,
                                         const std::vector<std::string>& duplicate_into = {});
std::vector<Formula> Conjuncts(const Formula& f);

struct Theory {
  Signature signature;
  std::vector<Formula> axioms;
};

// Replaces each function f by a relation R_f holding its graph.
class Relationalization {
 public:
  explicit Relationalization(const Theory& t);

  const Theory& theory() const { return theory_; }
  const std::map<std::string, std::string>& relation_for() const { return relation_for_; }
  Formula Translate(const Formula& f) const;
  FiniteStructure TranslateStructure(const FiniteStructure& s) const;

 private:
  Theory source_;
  Theory theory_;
  std::map<std::string, std::string> relation_for_;
};

// Canonical representative up to reordering of conjunctions and
// disjunctions, orientation of equalities and names of bound variables.
Formula Canonicalize(const Formula& f);

// x, y, z, u, v, w for one sort; x<k>_<sort> otherwise.
std::vector<Variable> PoolVariables(const Signature& sig, int per_sort);
// Canonical formulas over `pool` of quantifier rank <= qrank, deduplicated;
// entry k holds those first reached at size k.
std::vector<std::vector<Formula>> EnumerateFormulas(const Signature& sig,
                                                    const std::vector<Variable>& pool, int qrank,
                                                    int max_size, int term_depth = 1);

struct MorleyOptions {
  int max_size = 4;
  // Free variables formulas may use, per sort.
  int vars_per_sort = 2;
  int term_depth = 1;
};

// New relation D(x) with axiom forall x (D(x) <-> phi(x)) for each
// canonical L_i-formula phi of quantifier rank <= q within the options.
class Morleyization {
 public:
  struct Definition {
    std::string label;
    std::string symbol;
    std::vector<Variable> args;
    Formula formula;
  };

  Morleyization(const LanguageFamily& fam, const std::vector<Theory>& theories, int qrank,
                MorleyOptions opt = {});

  const LanguageFamily& base() const { return base_; }
  const LanguageFamily& expanded() const { return expanded_; }
  const std::vector<Definition>& definitions() const { return definitions_; }
  // Per language label: the theory plus the definitional axioms.
  const std::map<std::string, Theory>& theories() const { return theories_; }
  std::vector<Formula> Axioms() const;

  // The atom naming `f` in language `label`; throws if out of range.
  Formula Atomize(const std::string& label, const Formula& f) const;
  // Interprets every new symbol by its defining formula.
  FiniteStructure ExpandStructure(const FiniteStructure& s) const;

 private:
  LanguageFamily base_;
  LanguageFamily expanded_;
  int qrank_;
  std::vector<Definition> definitions_;
  std::map<std::pair<std::string, std::string>, size_t> index_;
  std::map<std::string, Theory> theories_;
};

}  // namespace fusionkit

#endif  // FUSIONKIT_NORMAL_FORMS_H_
