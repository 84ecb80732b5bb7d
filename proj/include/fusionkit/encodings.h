#ifndef FUSIONKIT_ENCODINGS_H_
#define FUSIONKIT_ENCODINGS_H_

#include <map>
#include <string>
#include <vector>

#include "fusionkit/closure.h"
#include "fusionkit/definable.h"
#include "fusionkit/logic.h"
#include "fusionkit/structure.h"

namespace fusionkit {

struct EncodedPair {
  FiniteStructure source;
  FiniteStructure target;
  // Source elements to target elements and back, where defined.
  std::map<ElementRef, ElementRef> forward;
  std::map<ElementRef, ElementRef> backward;
};

// Graph (V; E) to (V, S; Pi, ES): S holds the unordered pairs of distinct
// vertices, Pi(v1, v2, s) is the quotient map and ES the image of E.
EncodedPair RgEncode(const FiniteStructure& g);
// Throws Error when Pi is not the quotient of distinct pairs by swapping.
FiniteStructure RgDecode(const FiniteStructure& p);
// Shape axioms on the target signature: Pi is defined exactly on distinct
// pairs and identifies two pairs iff they agree up to swapping.
std::vector<Formula> RgShapeAxioms(const Signature& target);

// (M; sigma) to (M_1, M_2; f, g) with two renamed copies of the language,
// f the identity and g = sigma.
FiniteStructure AutEncode(const FiniteStructure& m, const ElementMap& sigma);
struct AutDecoded {
  FiniteStructure m;
  ElementMap sigma;  // f^-1 o g
};
// Throws Error unless f and g are isomorphisms between the copies.
AutDecoded AutDecode(const FiniteStructure& p);

// (M; f) with phi(a, f(a)) for all a, to (M, E; px_1..px_n, py, g): E is
// phi(M), the px_i and py are the projections and g(a) = (a, f(a)).
// f is indexed by tuple code over the sorts of x.
FiniteStructure SkolemEncode(const FiniteStructure& m, const Formula& phi,
                             const std::vector<Variable>& x, const Variable& y,
                             const std::vector<int>& f);
struct SkolemDecoded {
  FiniteStructure m;
  std::vector<int> f;  // py o g
};
// Throws Error unless g is a section of the projections.
SkolemDecoded SkolemDecode(const FiniteStructure& p);

struct GenericPredicateFailure {
  int n = 0;
  DefinableSet x;
  // pattern[k]: coordinate k in P.
  std::vector<bool> pattern;
};

struct GenericPredicateReport {
  bool generic() const { return failures.empty(); }
  std::vector<GenericPredicateFailure> failures;
  size_t sets_checked = 0;
  size_t large_sets = 0;
  // Largeness by fresh extension is exact only over pure equality.
  bool approximate = false;
};

// For n = 1..n_max, every large class-definable X in M^n meets every
// product of P and its complement. Largeness: a pairwise distinct tuple of
// fresh elements satisfies X's formula in M extended by n fresh elements.
GenericPredicateReport GenericPredicateCheck(const FiniteStructure& m, const std::string& pred,
                                             const DefinabilityClass& cls, int n_max);

}  // namespace fusionkit

#endif  // FUSIONKIT_ENCODINGS_H_
