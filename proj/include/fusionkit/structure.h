#ifndef FUSIONKIT_STRUCTURE_H_
#define FUSIONKIT_STRUCTURE_H_

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "fusionkit/logic.h"

namespace fusionkit {

struct ElementRef {
  int sort = 0;
  int index = 0;
  auto operator<=>(const ElementRef&) const = default;
};

// Maps a variable to an element index within the variable's sort.
using Assignment = std::map<Variable, int>;

class FiniteStructure {
 public:
  FiniteStructure() = default;
  FiniteStructure(std::string name, Signature sig);

  const std::string& name() const { return name_; }
  void set_name(std::string n) { name_ = std::move(n); }
  const Signature& signature() const { return sig_; }

  // Must be called for every sort before tables are filled.
  void SetUniverse(const std::string& sort, std::vector<std::string> elements);
  int SortIndex(const std::string& sort) const;
  const std::vector<std::string>& Universe(const std::string& sort) const;
  const std::vector<std::string>& Universe(int sort) const { return universes_[sort]; }
  int Size(const std::string& sort) const;
  int Size(int sort) const { return static_cast<int>(universes_[sort].size()); }
  int TotalSize() const;
  int ElementIndex(const std::string& sort, const std::string& id) const;
  std::string ElementName(ElementRef e) const;

  void SetHolds(const std::string& rel, const std::vector<int>& args, bool v);
  bool Holds(const std::string& rel, const std::vector<int>& args) const;
  void SetValue(const std::string& fn, const std::vector<int>& args, int value);
  int Apply(const std::string& fn, const std::vector<int>& args) const;

  struct RelationTable {
    std::vector<int> sorts;
    std::vector<uint8_t> table;
  };
  struct FunctionTable {
    std::vector<int> sorts;
    int result = 0;
    std::vector<int> table;  // -1 marks an undefined entry
  };
  void SetRelationTable(const std::string& rel, std::vector<uint8_t> table);
  void SetFunctionTable(const std::string& fn, std::vector<int> table);
  const RelationTable& relation(const std::string& rel) const;
  const FunctionTable& function(const std::string& fn) const;
  size_t Offset(const std::vector<int>& sorts, const std::vector<int>& args) const;

  // Throws when a function entry is missing.
  void Validate() const;

  bool operator==(const FiniteStructure& o) const;

 private:
  void EnsureTables();

  std::string name_;
  Signature sig_;
  std::vector<std::vector<std::string>> universes_;
  std::vector<bool> universe_set_;
  std::map<std::string, RelationTable> relations_;
  std::map<std::string, FunctionTable> functions_;
};

using StructurePtr = std::shared_ptr<const FiniteStructure>;

// Structure files:
//   structure NAME
//   sort V = {a, b, c}
//   rel E : V V = {(a,b),(b,c)}
//   fun f : V -> V = {a->b, b->c, c->a}
std::vector<FiniteStructure> ParseStructureFile(const std::string& text);
FiniteStructure LoadStructure(const std::string& path);
std::string PrintStructure(const FiniteStructure& s);

FiniteStructure Reduct(const FiniteStructure& s, const Signature& sig);
// Adds the interpretations in `extra` (same universes) to `s`.
FiniteStructure Expand(const FiniteStructure& s, const FiniteStructure& extra);
// Adds `k` fresh elements to each listed sort (all sorts when empty). Only
// relational structures can be extended.
FiniteStructure ExtendFresh(const FiniteStructure& s, int k,
                            const std::vector<std::string>& sorts = {});

int EvaluateTerm(const FiniteStructure& s, const Term& t, const Assignment& a);
bool Evaluate(const FiniteStructure& s, const Formula& f, const Assignment& a = {});

// Mixed-radix index over M_{s1} x ... x M_{sn}.
class TupleSpace {
 public:
  TupleSpace() = default;
  TupleSpace(const FiniteStructure& s, const std::vector<std::string>& sorts);
  explicit TupleSpace(std::vector<int> sizes) : sizes_(std::move(sizes)) {}

  size_t Count() const;
  size_t Encode(const std::vector<int>& tuple) const;
  std::vector<int> Decode(size_t code) const;
  size_t arity() const { return sizes_.size(); }
  const std::vector<int>& sizes() const { return sizes_; }
  bool operator==(const TupleSpace&) const = default;

 private:
  std::vector<int> sizes_;
};

class TupleSet {
 public:
  TupleSet() = default;
  explicit TupleSet(size_t universe);
  static TupleSet Full(size_t universe);

  size_t universe() const { return n_; }
  bool Contains(size_t i) const { return (bits_[i >> 6] >> (i & 63)) & 1; }
  void Insert(size_t i) { bits_[i >> 6] |= uint64_t{1} << (i & 63); }
  void Erase(size_t i) { bits_[i >> 6] &= ~(uint64_t{1} << (i & 63)); }
  size_t Count() const;
  bool Empty() const;
  std::vector<size_t> Elements() const;

  TupleSet operator|(const TupleSet& o) const;
  TupleSet operator&(const TupleSet& o) const;
  TupleSet operator-(const TupleSet& o) const;
  TupleSet Complement() const;
  bool SubsetOf(const TupleSet& o) const;
  bool Intersects(const TupleSet& o) const;

  bool operator==(const TupleSet& o) const { return n_ == o.n_ && bits_ == o.bits_; }
  bool operator<(const TupleSet& o) const;
  size_t Hash() const;

 private:
  size_t n_ = 0;
  std::vector<uint64_t> bits_;
};

struct TupleSetHash {
  size_t operator()(const TupleSet& s) const { return s.Hash(); }
};

// Extension of `f` with free variables `vars` (and parameters `params`).
TupleSet ExtensionOf(const FiniteStructure& s, const Formula& f,
                     const std::vector<Variable>& vars,
                     const Assignment& params = {});

std::vector<std::string> SortsOf(const std::vector<Variable>& vars);
std::string PrintTuple(const FiniteStructure& s, const std::vector<std::string>& sorts,
                       const std::vector<int>& tuple);
std::string PrintAssignment(const FiniteStructure& s, const Assignment& a);

}  // namespace fusionkit

#endif  // FUSIONKIT_STRUCTURE_H_
