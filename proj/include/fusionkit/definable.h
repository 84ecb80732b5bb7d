#ifndef FUSIONKIT_DEFINABLE_H_
#define FUSIONKIT_DEFINABLE_H_

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "fusionkit/logic.h"
#include "fusionkit/structure.h"

namespace fusionkit {

struct ParameterSpec {
  enum class Mode { kNone, kAll, kList };
  Mode mode = Mode::kNone;
  std::vector<std::pair<std::string, std::string>> elements;  // (sort, id)

  static ParameterSpec None() { return {}; }
  static ParameterSpec All() { return {Mode::kAll, {}}; }
  static ParameterSpec List(std::vector<std::pair<std::string, std::string>> e) {
    return {Mode::kList, std::move(e)};
  }
  // "none", "all", or "a,b" / "V:a,W:b".
  static ParameterSpec Parse(const std::string& text, const Signature& sig);
};

// Formulas of quantifier rank <= max_rank over `signature`, with parameters
// from `params`. Terms inside atoms are nested at most `term_depth` deep.
struct DefinabilityClass {
  Signature signature;
  int max_rank = 0;
  ParameterSpec params;
  int term_depth = 1;
  std::optional<int> max_formula_size;
};

std::vector<ElementRef> ResolveParameters(const FiniteStructure& s,
                                          const ParameterSpec& p);
Variable ParameterVariable(const FiniteStructure& s, ElementRef e);

struct DefinableSet {
  StructurePtr host;
  Formula formula;
  std::vector<Variable> vars;
  Assignment params;
  TupleSet extension;

  std::vector<std::string> sorts() const { return SortsOf(vars); }
  bool Empty() const { return extension.Empty(); }
  size_t Count() const { return extension.Count(); }
  std::string ToString() const;
};

DefinableSet MakeDefinable(StructurePtr host, Formula f, std::vector<Variable> vars,
                           Assignment params = {});
// Set operations carry combined formulas and merged parameters.
DefinableSet Union(const DefinableSet& a, const DefinableSet& b);
DefinableSet Intersect(const DefinableSet& a, const DefinableSet& b);
DefinableSet Difference(const DefinableSet& a, const DefinableSet& b);
DefinableSet Complement(const DefinableSet& a);
DefinableSet EmptySet(StructurePtr host, std::vector<Variable> vars);
DefinableSet FullSet(StructurePtr host, std::vector<Variable> vars);

// Tabulated set: a disjunction of parameter equalities naming each tuple.
DefinableSet TabulatedSet(StructurePtr host, std::vector<Variable> vars,
                          const TupleSet& ext);

std::vector<Variable> DefaultVariables(const std::vector<std::string>& sorts);

// All subsets of M^vars definable in a class. The definable sets are exactly
// the unions of blocks of a partition computed by rank-wise refinement.
class DefinableAlgebra {
 public:
  DefinableAlgebra(StructurePtr host, DefinabilityClass cls, std::vector<Variable> vars);

  const StructurePtr& host() const { return host_; }
  const DefinabilityClass& cls() const { return cls_; }
  const std::vector<Variable>& vars() const { return vars_; }
  const Assignment& params() const { return params_; }
  const TupleSpace& space() const { return space_; }
  size_t NumBlocks() const { return blocks_.size(); }
  const TupleSet& Block(size_t i) const { return blocks_[i]; }
  const Formula& BlockFormula(size_t i) const { return block_formulas_[i]; }
  // Block index of each tuple code.
  int BlockOf(size_t code) const { return block_of_[code]; }

  bool IsDefinable(const TupleSet& s) const;
  // Least definable superset.
  TupleSet Hull(const TupleSet& s) const;
  // Greatest definable subset.
  TupleSet Kernel(const TupleSet& s) const;
  // Throws if `s` is not definable.
  DefinableSet Make(const TupleSet& s) const;
  Formula FormulaFor(const TupleSet& s) const;

  // Every definable set exactly once, ordered by formula size, then text.
  const std::vector<DefinableSet>& Sets() const;

 private:
  StructurePtr host_;
  DefinabilityClass cls_;
  std::vector<Variable> vars_;
  Assignment params_;
  TupleSpace space_;
  std::vector<int> block_of_;
  std::vector<TupleSet> blocks_;
  std::vector<Formula> block_formulas_;
  std::vector<std::pair<TupleSet, Formula>> primitives_;
  mutable std::optional<std::vector<DefinableSet>> sets_;
};

std::vector<DefinableSet> EnumerateDefinable(StructurePtr host, const DefinabilityClass& cls,
                                             const std::vector<Variable>& vars);

// Rank-q types of tuples, comparable across structures of one signature.
class TypeInterner {
 public:
  TypeInterner(Signature sig, int term_depth = 1);

  int TypeOf(const FiniteStructure& s, const std::vector<ElementRef>& tuple, int rank);
  // Sentence-level type (empty tuple).
  int TheoryOf(const FiniteStructure& s, int rank) { return TypeOf(s, {}, rank); }
  // A formula true of exactly the tuples of this type.
  Formula Characteristic(int id, const std::vector<Variable>& vars) const;

 private:
  struct Entry {
    int rank;
    std::vector<int> sorts;
    std::vector<uint8_t> atoms;           // rank 0
    int parent = -1;                      // rank > 0
    std::vector<std::vector<int>> children;  // per sort, sorted type ids
  };
  int Intern(Entry e);
  const std::vector<Formula>& AtomFormulas(const std::vector<int>& sorts) const;

  Signature sig_;
  int term_depth_;
  std::vector<Entry> entries_;
  std::map<std::string, int> index_;
  mutable std::map<std::vector<int>, std::vector<Formula>> atom_cache_;
};

// Atomic formulas over variables v0..v(n-1) with the given sort indices;
// used by the partition and type machinery.
std::vector<Formula> AtomicFormulas(const Signature& sig, const std::vector<Variable>& vars,
                                    int term_depth);

}  // namespace fusionkit

#endif  // FUSIONKIT_DEFINABLE_H_
