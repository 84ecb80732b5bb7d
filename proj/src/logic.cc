#include "fusionkit/logic.h"

#include <algorithm>
#include <functional>
#include <sstream>

#include "fusionkit/parse.h"

namespace fusionkit {

ParseError::ParseError(const std::string& message, int line, int column)
    : Error("line " + std::to_string(line) + ", column " +
            std::to_string(column) + ": " + message),
      line_(line),
      column_(column) {}

void Signature::AddSort(const std::string& name) {
  if (HasSort(name)) throw Error("duplicate sort " + name);
  sorts_.push_back(name);
}

void Signature::AddRelation(const std::string& name,
                            std::vector<std::string> args) {
  if (HasSymbol(name)) throw Error("duplicate symbol " + name);
  for (const auto& s : args) {
    if (!HasSort(s)) throw Error("unknown sort " + s + " in " + name);
  }
  relations_[name] = std::move(args);
}

void Signature::AddFunction(const std::string& name,
                            std::vector<std::string> args,
                            std::string result) {
  if (HasSymbol(name)) throw Error("duplicate symbol " + name);
  for (const auto& s : args) {
    if (!HasSort(s)) throw Error("unknown sort " + s + " in " + name);
  }
  if (!HasSort(result)) throw Error("unknown sort " + result + " in " + name);
  functions_[name] = FunctionType{std::move(args), std::move(result)};
}

bool Signature::HasSort(const std::string& name) const {
  return std::find(sorts_.begin(), sorts_.end(), name) != sorts_.end();
}

const std::vector<std::string>* Signature::Relation(
    const std::string& name) const {
  auto it = relations_.find(name);
  return it == relations_.end() ? nullptr : &it->second;
}

const FunctionType* Signature::Function(const std::string& name) const {
  auto it = functions_.find(name);
  return it == functions_.end() ? nullptr : &it->second;
}

bool Signature::HasSymbol(const std::string& name) const {
  return relations_.count(name) > 0 || functions_.count(name) > 0;
}

std::set<std::string> Signature::Symbols() const {
  std::set<std::string> out;
  for (const auto& [n, _] : relations_) out.insert(n);
  for (const auto& [n, _] : functions_) out.insert(n);
  return out;
}

Signature Signature::Restrict(const std::set<std::string>& symbols) const {
  Signature out;
  out.sorts_ = sorts_;
  for (const auto& [n, a] : relations_) {
    if (symbols.count(n)) out.relations_[n] = a;
  }
  for (const auto& [n, f] : functions_) {
    if (symbols.count(n)) out.functions_[n] = f;
  }
  return out;
}

Signature Signature::Union(const Signature& other) const {
  Signature out = *this;
  for (const auto& s : other.sorts_) {
    if (!out.HasSort(s)) out.sorts_.push_back(s);
  }
  for (const auto& [n, a] : other.relations_) {
    auto it = out.relations_.find(n);
    if (it != out.relations_.end() && it->second != a) {
      throw Error("conflicting declarations of " + n);
    }
    if (out.functions_.count(n)) throw Error("conflicting declarations of " + n);
    out.relations_[n] = a;
  }
  for (const auto& [n, f] : other.functions_) {
    auto it = out.functions_.find(n);
    if (it != out.functions_.end() && !(it->second == f)) {
      throw Error("conflicting declarations of " + n);
    }
    if (out.relations_.count(n)) throw Error("conflicting declarations of " + n);
    out.functions_[n] = f;
  }
  return out;
}

Signature Signature::Intersection(const Signature& other) const {
  std::set<std::string> common;
  for (const auto& n : Symbols()) {
    if (other.HasSymbol(n)) common.insert(n);
  }
  return Restrict(common);
}

bool Signature::IsSubsignatureOf(const Signature& other) const {
  for (const auto& s : sorts_) {
    if (!other.HasSort(s)) return false;
  }
  for (const auto& [n, a] : relations_) {
    const auto* r = other.Relation(n);
    if (!r || *r != a) return false;
  }
  for (const auto& [n, f] : functions_) {
    const auto* g = other.Function(n);
    if (!g || !(*g == f)) return false;
  }
  return true;
}

Term Term::Var(Variable v) {
  Term t;
  t.kind = Kind::kVariable;
  t.var = std::move(v);
  return t;
}

Term Term::Var(const std::string& name, const std::string& sort) {
  return Var(Variable{name, sort});
}

Term Term::Apply(std::string symbol, std::vector<Term> args) {
  Term t;
  t.kind = Kind::kApply;
  t.symbol = std::move(symbol);
  t.args = std::move(args);
  return t;
}

int Term::Depth() const {
  if (is_var()) return 0;
  int d = 0;
  for (const auto& a : args) d = std::max(d, a.Depth());
  return d + 1;
}

bool Term::operator==(const Term& o) const {
  if (kind != o.kind) return false;
  if (is_var()) return var == o.var;
  return symbol == o.symbol && args == o.args;
}

bool Term::operator<(const Term& o) const {
  if (kind != o.kind) return kind < o.kind;
  if (is_var()) return var < o.var;
  if (symbol != o.symbol) return symbol < o.symbol;
  return std::lexicographical_compare(args.begin(), args.end(), o.args.begin(),
                                      o.args.end());
}

Formula::Formula() : Formula(True()) {}

Formula Formula::True() {
  static const Formula f(std::make_shared<Node>(Node{Kind::kTrue, {}, {}, {}, {}}));
  return f;
}

Formula Formula::False() {
  static const Formula f(
      std::make_shared<Node>(Node{Kind::kFalse, {}, {}, {}, {}}));
  return f;
}

Formula Formula::Equals(Term lhs, Term rhs) {
  return Formula(std::make_shared<Node>(
      Node{Kind::kEquals, "", {std::move(lhs), std::move(rhs)}, {}, {}}));
}

Formula Formula::Relation(std::string symbol, std::vector<Term> args) {
  return Formula(std::make_shared<Node>(
      Node{Kind::kRelation, std::move(symbol), std::move(args), {}, {}}));
}

Formula Formula::Not(Formula f) {
  return Formula(
      std::make_shared<Node>(Node{Kind::kNot, "", {}, {std::move(f)}, {}}));
}

Formula Formula::And(Formula a, Formula b) {
  return Formula(std::make_shared<Node>(
      Node{Kind::kAnd, "", {}, {std::move(a), std::move(b)}, {}}));
}

Formula Formula::Or(Formula a, Formula b) {
  return Formula(std::make_shared<Node>(
      Node{Kind::kOr, "", {}, {std::move(a), std::move(b)}, {}}));
}

Formula Formula::Implies(Formula a, Formula b) {
  return Formula(std::make_shared<Node>(
      Node{Kind::kImplies, "", {}, {std::move(a), std::move(b)}, {}}));
}

Formula Formula::Iff(Formula a, Formula b) {
  return And(Implies(a, b), Implies(b, a));
}

Formula Formula::Exists(Variable v, Formula body) {
  return Formula(std::make_shared<Node>(
      Node{Kind::kExists, "", {}, {std::move(body)}, std::move(v)}));
}

Formula Formula::Forall(Variable v, Formula body) {
  return Formula(std::make_shared<Node>(
      Node{Kind::kForall, "", {}, {std::move(body)}, std::move(v)}));
}

Formula Formula::Exists(const std::vector<Variable>& vs, Formula body) {
  for (auto it = vs.rbegin(); it != vs.rend(); ++it) body = Exists(*it, body);
  return body;
}

Formula Formula::Forall(const std::vector<Variable>& vs, Formula body) {
  for (auto it = vs.rbegin(); it != vs.rend(); ++it) body = Forall(*it, body);
  return body;
}

Formula Formula::Conjunction(const std::vector<Formula>& fs) {
  if (fs.empty()) return True();
  Formula out = fs[0];
  for (size_t i = 1; i < fs.size(); ++i) out = And(out, fs[i]);
  return out;
}

Formula Formula::Disjunction(const std::vector<Formula>& fs) {
  if (fs.empty()) return False();
  Formula out = fs[0];
  for (size_t i = 1; i < fs.size(); ++i) out = Or(out, fs[i]);
  return out;
}

Formula Formula::ExistsAtMost(int k, const Variable& v, const Formula& body) {
  if (k < 0) throw Error("negative bound in exists<=");
  std::set<std::string> used = VariableNames(body);
  used.insert(v.name);
  FreshNames fresh(v.name + "'", used);
  std::vector<Variable> copies;
  for (int i = 0; i <= k; ++i) copies.push_back(fresh.Next(v.sort));
  std::vector<Formula> parts;
  for (size_t i = 0; i < copies.size(); ++i) {
    for (size_t j = i + 1; j < copies.size(); ++j) {
      parts.push_back(
          Not(Equals(Term::Var(copies[i]), Term::Var(copies[j]))));
    }
  }
  for (const auto& c : copies) {
    parts.push_back(Substitute(body, {{v, Term::Var(c)}}));
  }
  return Not(Exists(copies, Conjunction(parts)));
}

bool Formula::IsAtomic() const {
  auto k = kind();
  return k == Kind::kTrue || k == Kind::kFalse || k == Kind::kEquals ||
         k == Kind::kRelation;
}

bool Formula::IsQuantifier() const {
  return kind() == Kind::kExists || kind() == Kind::kForall;
}

bool Formula::IsBinary() const {
  auto k = kind();
  return k == Kind::kAnd || k == Kind::kOr || k == Kind::kImplies;
}

int Formula::Size() const {
  int n = 1;
  for (const auto& s : node_->subs) n += s.Size();
  return n;
}

bool Formula::operator==(const Formula& o) const {
  if (node_ == o.node_) return true;
  const Node& a = *node_;
  const Node& b = *o.node_;
  return a.kind == b.kind && a.symbol == b.symbol && a.terms == b.terms &&
         a.bound == b.bound && a.subs == b.subs;
}

LanguageFamily::LanguageFamily(std::vector<Language> languages)
    : languages_(std::move(languages)) {
  if (languages_.empty()) return;
  intersection_ = languages_[0].signature;
  join_ = languages_[0].signature;
  for (size_t i = 1; i < languages_.size(); ++i) {
    intersection_ = intersection_.Intersection(languages_[i].signature);
    join_ = join_.Union(languages_[i].signature);
  }
  Validate();
}

const Language& LanguageFamily::Get(const std::string& label) const {
  int i = IndexOf(label);
  if (i < 0) throw Error("unknown language " + label);
  return languages_[i];
}

int LanguageFamily::IndexOf(const std::string& label) const {
  for (size_t i = 0; i < languages_.size(); ++i) {
    if (languages_[i].label == label) return static_cast<int>(i);
  }
  return -1;
}

void LanguageFamily::Validate() const {
  std::set<std::string> labels;
  for (const auto& l : languages_) {
    if (!labels.insert(l.label).second) {
      throw Error("duplicate language label " + l.label);
    }
  }
  for (const auto& l : languages_) {
    if (l.signature.sorts() != languages_[0].signature.sorts()) {
      throw Error("languages " + languages_[0].label + " and " + l.label +
                  " have different sort lists");
    }
  }
  for (size_t i = 0; i < languages_.size(); ++i) {
    for (size_t j = i + 1; j < languages_.size(); ++j) {
      auto common = languages_[i].signature.Intersection(
          languages_[j].signature).Symbols();
      auto expected = intersection_.Symbols();
      if (common != expected) {
        std::string symbol;
        for (const auto& s : common) {
          if (!expected.count(s)) symbol = s;
        }
        throw Error("languages " + languages_[i].label + " and " +
                    languages_[j].label + " share " + symbol +
                    ", which is outside the common intersection");
      }
    }
  }
}

std::string ToString(FormulaClass c) {
  switch (c) {
    case FormulaClass::kAtomicFlat:
      return "atomic-flat";
    case FormulaClass::kFlat:
      return "flat";
    case FormulaClass::kQuantifierFree:
      return "quantifier-free";
    case FormulaClass::kExistential:
      return "existential";
    case FormulaClass::kGeneral:
      return "general";
  }
  return "general";
}

std::set<Variable> FreeVariables(const Term& t) {
  std::set<Variable> out;
  if (t.is_var()) {
    out.insert(t.var);
    return out;
  }
  for (const auto& a : t.args) {
    auto s = FreeVariables(a);
    out.insert(s.begin(), s.end());
  }
  return out;
}

namespace {

void CollectFree(const Term& t, const std::set<Variable>& bound,
                 std::vector<Variable>& out, std::set<Variable>& seen) {
  if (t.is_var()) {
    if (!bound.count(t.var) && seen.insert(t.var).second) out.push_back(t.var);
    return;
  }
  for (const auto& a : t.args) CollectFree(a, bound, out, seen);
}

void CollectFree(const Formula& f, std::set<Variable>& bound,
                 std::vector<Variable>& out, std::set<Variable>& seen) {
  switch (f.kind()) {
    case Formula::Kind::kTrue:
    case Formula::Kind::kFalse:
      return;
    case Formula::Kind::kEquals:
    case Formula::Kind::kRelation:
      for (const auto& t : f.terms()) CollectFree(t, bound, out, seen);
      return;
    case Formula::Kind::kNot:
      CollectFree(f.operand(), bound, out, seen);
      return;
    case Formula::Kind::kAnd:
    case Formula::Kind::kOr:
    case Formula::Kind::kImplies:
      CollectFree(f.left(), bound, out, seen);
      CollectFree(f.right(), bound, out, seen);
      return;
    case Formula::Kind::kExists:
    case Formula::Kind::kForall: {
      bool fresh = bound.insert(f.bound()).second;
      CollectFree(f.body(), bound, out, seen);
      if (fresh) bound.erase(f.bound());
      return;
    }
  }
}

void CollectNames(const Term& t, std::set<std::string>& out) {
  if (t.is_var()) {
    out.insert(t.var.name);
    return;
  }
  for (const auto& a : t.args) CollectNames(a, out);
}

void CollectNames(const Formula& f, std::set<std::string>& out) {
  for (const auto& t : f.terms()) CollectNames(t, out);
  if (f.IsQuantifier()) {
    out.insert(f.bound().name);
    CollectNames(f.body(), out);
  } else if (f.kind() == Formula::Kind::kNot) {
    CollectNames(f.operand(), out);
  } else if (f.IsBinary()) {
    CollectNames(f.left(), out);
    CollectNames(f.right(), out);
  }
}

void CollectSymbols(const Term& t, std::set<std::string>& out) {
  if (t.is_var()) return;
  out.insert(t.symbol);
  for (const auto& a : t.args) CollectSymbols(a, out);
}

}  // namespace

std::vector<Variable> FreeVariableList(const Formula& f) {
  std::set<Variable> bound, seen;
  std::vector<Variable> out;
  CollectFree(f, bound, out, seen);
  return out;
}

std::set<Variable> FreeVariables(const Formula& f) {
  auto list = FreeVariableList(f);
  return std::set<Variable>(list.begin(), list.end());
}

std::set<std::string> VariableNames(const Formula& f) {
  std::set<std::string> out;
  CollectNames(f, out);
  return out;
}

std::set<std::string> SymbolsOf(const Formula& f) {
  std::set<std::string> out;
  if (f.kind() == Formula::Kind::kRelation) out.insert(f.symbol());
  for (const auto& t : f.terms()) CollectSymbols(t, out);
  if (f.IsQuantifier()) {
    auto s = SymbolsOf(f.body());
    out.insert(s.begin(), s.end());
  } else if (f.kind() == Formula::Kind::kNot) {
    auto s = SymbolsOf(f.operand());
    out.insert(s.begin(), s.end());
  } else if (f.IsBinary()) {
    auto l = SymbolsOf(f.left());
    auto r = SymbolsOf(f.right());
    out.insert(l.begin(), l.end());
    out.insert(r.begin(), r.end());
  }
  return out;
}

Term Substitute(const Term& t, const Substitution& s) {
  if (t.is_var()) {
    auto it = s.find(t.var);
    return it == s.end() ? t : it->second;
  }
  std::vector<Term> args;
  args.reserve(t.args.size());
  for (const auto& a : t.args) args.push_back(Substitute(a, s));
  return Term::Apply(t.symbol, std::move(args));
}

Formula Substitute(const Formula& f, const Substitution& s) {
  switch (f.kind()) {
    case Formula::Kind::kTrue:
    case Formula::Kind::kFalse:
      return f;
    case Formula::Kind::kEquals:
      return Formula::Equals(Substitute(f.terms()[0], s),
                             Substitute(f.terms()[1], s));
    case Formula::Kind::kRelation: {
      std::vector<Term> args;
      for (const auto& t : f.terms()) args.push_back(Substitute(t, s));
      return Formula::Relation(f.symbol(), std::move(args));
    }
    case Formula::Kind::kNot:
      return Formula::Not(Substitute(f.operand(), s));
    case Formula::Kind::kAnd:
      return Formula::And(Substitute(f.left(), s), Substitute(f.right(), s));
    case Formula::Kind::kOr:
      return Formula::Or(Substitute(f.left(), s), Substitute(f.right(), s));
    case Formula::Kind::kImplies:
      return Formula::Implies(Substitute(f.left(), s),
                              Substitute(f.right(), s));
    case Formula::Kind::kExists:
    case Formula::Kind::kForall: {
      Substitution inner;
      std::set<std::string> incoming;
      auto body_free = FreeVariables(f.body());
      for (const auto& [v, t] : s) {
        if (v == f.bound() || !body_free.count(v)) continue;
        inner[v] = t;
        for (const auto& w : FreeVariables(t)) incoming.insert(w.name);
      }
      Variable bv = f.bound();
      if (incoming.count(bv.name)) {
        std::set<std::string> used = VariableNames(f.body());
        used.insert(incoming.begin(), incoming.end());
        for (const auto& [v, t] : inner) used.insert(v.name);
        FreshNames fresh(bv.name + "'", used);
        Variable nv = fresh.Next(bv.sort);
        inner[bv] = Term::Var(nv);
        bv = nv;
      }
      Formula body = inner.empty() ? f.body() : Substitute(f.body(), inner);
      return f.kind() == Formula::Kind::kExists ? Formula::Exists(bv, body)
                                                : Formula::Forall(bv, body);
    }
  }
  return f;
}

Formula Rename(const Formula& f, const std::map<Variable, Variable>& r) {
  Substitution s;
  for (const auto& [a, b] : r) s[a] = Term::Var(b);
  return Substitute(f, s);
}

int QuantifierRank(const Formula& f) {
  switch (f.kind()) {
    case Formula::Kind::kNot:
      return QuantifierRank(f.operand());
    case Formula::Kind::kAnd:
    case Formula::Kind::kOr:
    case Formula::Kind::kImplies:
      return std::max(QuantifierRank(f.left()), QuantifierRank(f.right()));
    case Formula::Kind::kExists:
    case Formula::Kind::kForall:
      return 1 + QuantifierRank(f.body());
    default:
      return 0;
  }
}

bool IsQuantifierFree(const Formula& f) { return QuantifierRank(f) == 0; }

bool IsAtomicFlat(const Formula& f) {
  switch (f.kind()) {
    case Formula::Kind::kTrue:
    case Formula::Kind::kFalse:
      return true;
    case Formula::Kind::kRelation:
      return std::all_of(f.terms().begin(), f.terms().end(),
                         [](const Term& t) { return t.is_var(); });
    case Formula::Kind::kEquals: {
      const Term& a = f.terms()[0];
      const Term& b = f.terms()[1];
      if (a.is_var() && b.is_var()) return true;
      if (!a.is_var() && b.is_var()) {
        return std::all_of(a.args.begin(), a.args.end(),
                           [](const Term& t) { return t.is_var(); });
      }
      return false;
    }
    default:
      return false;
  }
}

bool IsFlatLiteral(const Formula& f) {
  if (f.kind() == Formula::Kind::kNot) return IsAtomicFlat(f.operand());
  return IsAtomicFlat(f);
}

bool IsFlat(const Formula& f) {
  if (f.kind() == Formula::Kind::kAnd) return IsFlat(f.left()) && IsFlat(f.right());
  return IsFlatLiteral(f);
}

namespace {

bool IsExistentialMatrix(const Formula& f) {
  const Formula* g = &f;
  while (g->kind() == Formula::Kind::kExists) g = &g->body();
  return IsQuantifierFree(*g);
}

}  // namespace

FormulaClass Classify(const Formula& f) {
  if (IsAtomicFlat(f)) return FormulaClass::kAtomicFlat;
  if (IsFlat(f)) return FormulaClass::kFlat;
  if (IsQuantifierFree(f)) return FormulaClass::kQuantifierFree;
  if (IsExistentialMatrix(f)) return FormulaClass::kExistential;
  return FormulaClass::kGeneral;
}

SyntacticFlags ClassifyFlags(const Formula& f) {
  SyntacticFlags out;
  out.atomic_flat = IsAtomicFlat(f);
  out.flat_literal = IsFlatLiteral(f);
  out.flat = IsFlat(f);
  out.quantifier_free = IsQuantifierFree(f);
  out.existential = IsExistentialMatrix(f);
  const Formula* g = &f;
  std::vector<Variable> block;
  while (g->kind() == Formula::Kind::kExists) {
    block.push_back(g->bound());
    g = &g->body();
  }
  out.eflat_shaped = IsFlat(*g);
  out.be_shaped = IsQuantifierFree(*g);
  if (out.be_shaped) out.be_block = block;
  return out;
}

std::string ToString(const SyntacticFlags& c) {
  std::vector<std::string> names;
  if (c.atomic_flat) names.push_back("atomic-flat");
  if (c.flat_literal) names.push_back("flat-literal");
  if (c.flat) names.push_back("flat");
  if (c.eflat_shaped) names.push_back("eflat-shaped");
  if (c.quantifier_free) names.push_back("quantifier-free");
  if (c.existential) names.push_back("existential");
  if (c.be_shaped) {
    std::string be = "be-shaped(";
    for (size_t i = 0; i < c.be_block.size(); ++i) {
      if (i) be += ",";
      be += c.be_block[i].name;
    }
    names.push_back(be + ")");
  }
  if (names.empty()) return "general";
  std::string out;
  for (size_t i = 0; i < names.size(); ++i) out += (i ? " " : "") + names[i];
  return out;
}

std::string SortOf(const Term& t, const Signature& sig) {
  if (t.is_var()) return t.var.sort;
  const auto* fn = sig.Function(t.symbol);
  if (!fn) throw Error("unknown function symbol " + t.symbol);
  return fn->result;
}

void CheckWellFormed(const Term& t, const Signature& sig) {
  if (t.is_var()) {
    if (!sig.HasSort(t.var.sort)) {
      throw Error("variable " + t.var.name + " has unknown sort " +
                  t.var.sort);
    }
    return;
  }
  const auto* fn = sig.Function(t.symbol);
  if (!fn) throw Error("unknown function symbol " + t.symbol);
  if (fn->args.size() != t.args.size()) {
    throw Error("wrong number of arguments to " + t.symbol);
  }
  for (size_t i = 0; i < t.args.size(); ++i) {
    CheckWellFormed(t.args[i], sig);
    if (SortOf(t.args[i], sig) != fn->args[i]) {
      throw Error("ill-sorted argument " + std::to_string(i + 1) + " of " +
                  t.symbol);
    }
  }
}

void CheckWellFormed(const Formula& f, const Signature& sig) {
  switch (f.kind()) {
    case Formula::Kind::kTrue:
    case Formula::Kind::kFalse:
      return;
    case Formula::Kind::kEquals:
      CheckWellFormed(f.terms()[0], sig);
      CheckWellFormed(f.terms()[1], sig);
      if (SortOf(f.terms()[0], sig) != SortOf(f.terms()[1], sig)) {
        throw Error("equality between different sorts in " + Print(f));
      }
      return;
    case Formula::Kind::kRelation: {
      const auto* rel = sig.Relation(f.symbol());
      if (!rel) throw Error("unknown relation symbol " + f.symbol());
      if (rel->size() != f.terms().size()) {
        throw Error("wrong number of arguments to " + f.symbol());
      }
      for (size_t i = 0; i < rel->size(); ++i) {
        CheckWellFormed(f.terms()[i], sig);
        if (SortOf(f.terms()[i], sig) != (*rel)[i]) {
          throw Error("ill-sorted argument " + std::to_string(i + 1) +
                      " of " + f.symbol());
        }
      }
      return;
    }
    case Formula::Kind::kNot:
      CheckWellFormed(f.operand(), sig);
      return;
    case Formula::Kind::kAnd:
    case Formula::Kind::kOr:
    case Formula::Kind::kImplies:
      CheckWellFormed(f.left(), sig);
      CheckWellFormed(f.right(), sig);
      return;
    case Formula::Kind::kExists:
    case Formula::Kind::kForall:
      if (!sig.HasSort(f.bound().sort)) {
        throw Error("unknown sort " + f.bound().sort);
      }
      CheckWellFormed(f.body(), sig);
      return;
  }
}

Formula Simplify(const Formula& f) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::kNot: {
      Formula a = Simplify(f.operand());
      if (a.kind() == K::kTrue) return Formula::False();
      if (a.kind() == K::kFalse) return Formula::True();
      return Formula::Not(a);
    }
    case K::kAnd: {
      Formula a = Simplify(f.left());
      Formula b = Simplify(f.right());
      if (a.kind() == K::kFalse || b.kind() == K::kFalse) return Formula::False();
      if (a.kind() == K::kTrue) return b;
      if (b.kind() == K::kTrue || a == b) return a;
      return Formula::And(a, b);
    }
    case K::kOr: {
      Formula a = Simplify(f.left());
      Formula b = Simplify(f.right());
      if (a.kind() == K::kTrue || b.kind() == K::kTrue) return Formula::True();
      if (a.kind() == K::kFalse) return b;
      if (b.kind() == K::kFalse || a == b) return a;
      return Formula::Or(a, b);
    }
    case K::kImplies: {
      Formula a = Simplify(f.left());
      Formula b = Simplify(f.right());
      if (a.kind() == K::kFalse || b.kind() == K::kTrue) return Formula::True();
      if (a.kind() == K::kTrue) return b;
      if (b.kind() == K::kFalse) return Simplify(Formula::Not(a));
      return Formula::Implies(a, b);
    }
    case K::kExists:
    case K::kForall: {
      Formula b = Simplify(f.body());
      return f.kind() == K::kExists ? Formula::Exists(f.bound(), b)
                                    : Formula::Forall(f.bound(), b);
    }
    default:
      return f;
  }
}

FreshNames::FreshNames(std::string prefix, std::set<std::string> used)
    : prefix_(std::move(prefix)), used_(std::move(used)) {}

std::string FreshNames::Next() {
  while (true) {
    std::string name = prefix_ + std::to_string(counter_++);
    if (used_.insert(name).second) return name;
  }
}

}  // namespace fusionkit
