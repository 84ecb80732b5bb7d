#ifndef FUSIONKIT_CLOSURE_H_
#define FUSIONKIT_CLOSURE_H_

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "fusionkit/logic.h"
#include "fusionkit/structure.h"

namespace fusionkit {

// perm[sort][i] is the image of element i of that sort.
using ElementMap = std::vector<std::vector<int>>;
using ElementSet = std::set<ElementRef>;

ElementMap IdentityMap(const FiniteStructure& s);
ElementMap Compose(const ElementMap& outer, const ElementMap& inner);
ElementMap Inverse(const ElementMap& m);
bool IsAutomorphism(const FiniteStructure& s, const ElementMap& m);

// All automorphisms fixing `fixed` pointwise, by backtracking.
std::vector<ElementMap> Automorphisms(const FiniteStructure& s, const ElementSet& fixed = {});
// One automorphism fixing `fixed` and sending `from` to `to`, if any.
std::optional<ElementMap> FindAutomorphism(const FiniteStructure& s, const ElementSet& fixed,
                                           ElementRef from, ElementRef to);
// Orbits of Aut(S/fixed), as a representative per element.
std::map<ElementRef, ElementRef> Orbits(const FiniteStructure& s, const ElementSet& fixed);

// dcl keeps fixed points of Aut(S/A); acl keeps elements whose orbit has at
// most `threshold` elements.
struct ClosureMode {
  enum class Kind { kDcl, kAcl };
  Kind kind = Kind::kDcl;
  int threshold = 1;
  static ClosureMode Dcl() { return {Kind::kDcl, 1}; }
  static ClosureMode Acl(int t) { return {Kind::kAcl, t}; }
};

ElementSet OrbitClosure(const FiniteStructure& s, const ElementSet& a, ClosureMode mode);

// Least set containing `a` closed in every reduct S|L_i. `trace` receives the
// set after each pass over the family.
ElementSet Ccl(const FiniteStructure& s, const LanguageFamily& fam, const ElementSet& a,
               ClosureMode mode, std::vector<ElementSet>* trace = nullptr);

// The flat literals true in `s`, over constants naming every element.
struct FlatDiagram {
  Signature signature;  // s's signature plus one constant per element
  std::map<ElementRef, std::string> names;
  std::vector<Formula> literals;
};
std::string ElementConstant(const FiniteStructure& s, ElementRef e);
FlatDiagram ComputeFlatDiagram(const FiniteStructure& s);

// Maps listed as (source, image) pairs.
using PartialMap = std::vector<std::pair<ElementRef, ElementRef>>;

struct MorphismMode {
  enum class Kind { kEmbedding, kPartialElementary };
  Kind kind = Kind::kEmbedding;
  int rank = 0;
  static MorphismMode Embedding() { return {Kind::kEmbedding, 0}; }
  static MorphismMode PartialElementary(int q) { return {Kind::kPartialElementary, q}; }
};

// Embedding: total, injective, preserves and reflects atomic formulas.
// Partial elementary: the domain tuple and its image satisfy the same
// formulas of quantifier rank <= q over the common signature.
bool IsMorphism(const PartialMap& map, const FiniteStructure& s1, const FiniteStructure& s2,
                MorphismMode mode);

std::string PrintElementSet(const FiniteStructure& s, const ElementSet& a);

}  // namespace fusionkit

#endif  // FUSIONKIT_CLOSURE_H_
