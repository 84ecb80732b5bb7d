#ifndef FUSIONKIT_LOGIC_H_
#define FUSIONKIT_LOGIC_H_

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace fusionkit {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised for malformed input text. Positions are 1-based.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, int line, int column);
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

struct FunctionType {
  std::vector<std::string> args;
  std::string result;
  bool operator==(const FunctionType&) const = default;
};

class Signature {
 public:
  void AddSort(const std::string& name);
  void AddRelation(const std::string& name, std::vector<std::string> args);
  void AddFunction(const std::string& name, std::vector<std::string> args,
                   std::string result);

  const std::vector<std::string>& sorts() const { return sorts_; }
  const std::map<std::string, std::vector<std::string>>& relations() const {
    return relations_;
  }
  const std::map<std::string, FunctionType>& functions() const {
    return functions_;
  }

  bool HasSort(const std::string& name) const;
  const std::vector<std::string>* Relation(const std::string& name) const;
  const FunctionType* Function(const std::string& name) const;
  bool HasSymbol(const std::string& name) const;
  bool IsRelational() const { return functions_.empty(); }

  // Relation and function names.
  std::set<std::string> Symbols() const;

  // Same sorts, only the listed symbols.
  Signature Restrict(const std::set<std::string>& symbols) const;
  Signature Union(const Signature& other) const;
  Signature Intersection(const Signature& other) const;
  bool IsSubsignatureOf(const Signature& other) const;

  bool operator==(const Signature&) const = default;

 private:
  std::vector<std::string> sorts_;
  std::map<std::string, std::vector<std::string>> relations_;
  std::map<std::string, FunctionType> functions_;
};

struct Variable {
  std::string name;
  std::string sort;
  auto operator<=>(const Variable&) const = default;
};

struct Term {
  enum class Kind { kVariable, kApply };

  static Term Var(Variable v);
  static Term Var(const std::string& name, const std::string& sort);
  static Term Apply(std::string symbol, std::vector<Term> args);

  bool is_var() const { return kind == Kind::kVariable; }
  int Depth() const;

  Kind kind = Kind::kVariable;
  Variable var;
  std::string symbol;
  std::vector<Term> args;

  bool operator==(const Term& o) const;
  bool operator<(const Term& o) const;
};

class Formula {
 public:
  enum class Kind {
    kTrue,
    kFalse,
    kEquals,
    kRelation,
    kNot,
    kAnd,
    kOr,
    kImplies,
    kExists,
    kForall
  };

  Formula();  // true

  static Formula True();
  static Formula False();
  static Formula Equals(Term lhs, Term rhs);
  static Formula Relation(std::string symbol, std::vector<Term> args);
  static Formula Not(Formula f);
  static Formula And(Formula a, Formula b);
  static Formula Or(Formula a, Formula b);
  static Formula Implies(Formula a, Formula b);
  static Formula Iff(Formula a, Formula b);
  static Formula Exists(Variable v, Formula body);
  static Formula Forall(Variable v, Formula body);
  static Formula Exists(const std::vector<Variable>& vs, Formula body);
  static Formula Forall(const std::vector<Variable>& vs, Formula body);
  // Left-nested; empty lists give true / false.
  static Formula Conjunction(const std::vector<Formula>& fs);
  static Formula Disjunction(const std::vector<Formula>& fs);
  // At most k elements satisfy body, expanded to plain first-order form.
  static Formula ExistsAtMost(int k, const Variable& v, const Formula& body);

  Kind kind() const { return node_->kind; }
  bool IsAtomic() const;
  bool IsQuantifier() const;
  bool IsBinary() const;
  const std::string& symbol() const { return node_->symbol; }
  const std::vector<Term>& terms() const { return node_->terms; }
  const Formula& operand() const { return node_->subs[0]; }
  const Formula& left() const { return node_->subs[0]; }
  const Formula& right() const { return node_->subs[1]; }
  const Formula& body() const { return node_->subs[0]; }
  const Variable& bound() const { return node_->bound; }

  // Number of atoms, connectives and quantifiers.
  int Size() const;

  bool operator==(const Formula& o) const;
  bool operator!=(const Formula& o) const { return !(*this == o); }

 private:
  struct Node {
    Kind kind;
    std::string symbol;
    std::vector<Term> terms;
    std::vector<Formula> subs;
    Variable bound;
  };
  explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

using Sentence = Formula;

struct Language {
  std::string label;
  Signature signature;
};

// Languages L_i sharing a common intersection.
class LanguageFamily {
 public:
  LanguageFamily() = default;
  explicit LanguageFamily(std::vector<Language> languages);

  const std::vector<Language>& languages() const { return languages_; }
  size_t size() const { return languages_.size(); }
  const Language& at(size_t i) const { return languages_.at(i); }
  const Language& Get(const std::string& label) const;
  int IndexOf(const std::string& label) const;
  const Signature& intersection() const { return intersection_; }
  const Signature& join() const { return join_; }

  // Pairwise intersections must equal the common intersection.
  void Validate() const;

 private:
  std::vector<Language> languages_;
  Signature intersection_;
  Signature join_;
};

enum class FormulaClass {
  kAtomicFlat,
  kFlat,
  kQuantifierFree,
  kExistential,
  kGeneral
};
std::string ToString(FormulaClass c);

std::set<Variable> FreeVariables(const Formula& f);
std::set<Variable> FreeVariables(const Term& t);
// Free variables in order of first occurrence.
std::vector<Variable> FreeVariableList(const Formula& f);
std::set<std::string> VariableNames(const Formula& f);
std::set<std::string> SymbolsOf(const Formula& f);

using Substitution = std::map<Variable, Term>;
Term Substitute(const Term& t, const Substitution& s);
// Capture-avoiding.
Formula Substitute(const Formula& f, const Substitution& s);
Formula Rename(const Formula& f, const std::map<Variable, Variable>& r);

int QuantifierRank(const Formula& f);
bool IsQuantifierFree(const Formula& f);
// x=y, R(x1..xn), f(x1..xn)=y, true or false.
bool IsAtomicFlat(const Formula& f);
// An atomic flat formula or its negation.
bool IsFlatLiteral(const Formula& f);
// A conjunction of flat literals.
bool IsFlat(const Formula& f);
// The most specific class.
FormulaClass Classify(const Formula& f);

// Every applicable class. be_block is the leading existential block of a
// be-shaped formula; the witness bound itself is semantic.
struct SyntacticFlags {
  bool atomic_flat = false;
  bool flat_literal = false;
  bool flat = false;
  bool eflat_shaped = false;
  bool quantifier_free = false;
  bool existential = false;
  bool be_shaped = false;
  std::vector<Variable> be_block;
};
SyntacticFlags ClassifyFlags(const Formula& f);
std::string ToString(const SyntacticFlags& c);

// Throws Error on an ill-sorted or out-of-signature formula.
void CheckWellFormed(const Formula& f, const Signature& sig);
void CheckWellFormed(const Term& t, const Signature& sig);
std::string SortOf(const Term& t, const Signature& sig);

// Drops true/false units and duplicate conjuncts, leaves the rest intact.
Formula Simplify(const Formula& f);

// Names not in `used`, drawn as prefix0, prefix1, ...
class FreshNames {
 public:
  FreshNames(std::string prefix, std::set<std::string> used = {});
  std::string Next();
  Variable Next(const std::string& sort) { return Variable{Next(), sort}; }
  void Reserve(const std::string& name) { used_.insert(name); }

 private:
  std::string prefix_;
  std::set<std::string> used_;
  int counter_ = 0;
};

}  // namespace fusionkit

#endif  // FUSIONKIT_LOGIC_H_
