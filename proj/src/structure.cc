#include "fusionkit/structure.h"

#include <algorithm>
#include <bit>
#include <cctype>
#include <functional>
#include <sstream>

#include "fusionkit/parse.h"

namespace fusionkit {

FiniteStructure::FiniteStructure(std::string name, Signature sig)
    : name_(std::move(name)), sig_(std::move(sig)) {
  universes_.resize(sig_.sorts().size());
  universe_set_.assign(sig_.sorts().size(), false);
  if (sig_.sorts().empty()) EnsureTables();
}

void FiniteStructure::SetUniverse(const std::string& sort,
                                  std::vector<std::string> elements) {
  int i = SortIndex(sort);
  std::set<std::string> seen;
  for (const auto& e : elements) {
    if (!seen.insert(e).second) throw Error("duplicate element " + e + " in sort " + sort);
  }
  universes_[i] = std::move(elements);
  universe_set_[i] = true;
  if (std::all_of(universe_set_.begin(), universe_set_.end(), [](bool b) { return b; })) {
    relations_.clear();
    functions_.clear();
    EnsureTables();
  }
}

void FiniteStructure::EnsureTables() {
  for (const auto& [n, args] : sig_.relations()) {
    RelationTable t;
    size_t count = 1;
    for (const auto& s : args) {
      t.sorts.push_back(SortIndex(s));
      count *= universes_[t.sorts.back()].size();
    }
    t.table.assign(count, 0);
    relations_[n] = std::move(t);
  }
  for (const auto& [n, f] : sig_.functions()) {
    FunctionTable t;
    size_t count = 1;
    for (const auto& s : f.args) {
      t.sorts.push_back(SortIndex(s));
      count *= universes_[t.sorts.back()].size();
    }
    t.result = SortIndex(f.result);
    t.table.assign(count, -1);
    functions_[n] = std::move(t);
  }
}

int FiniteStructure::SortIndex(const std::string& sort) const {
  const auto& sorts = sig_.sorts();
  auto it = std::find(sorts.begin(), sorts.end(), sort);
  if (it == sorts.end()) throw Error("unknown sort " + sort);
  return static_cast<int>(it - sorts.begin());
}

const std::vector<std::string>& FiniteStructure::Universe(const std::string& sort) const {
  return universes_[SortIndex(sort)];
}

int FiniteStructure::Size(const std::string& sort) const {
  return static_cast<int>(Universe(sort).size());
}

int FiniteStructure::TotalSize() const {
  int n = 0;
  for (const auto& u : universes_) n += static_cast<int>(u.size());
  return n;
}

int FiniteStructure::ElementIndex(const std::string& sort, const std::string& id) const {
  const auto& u = Universe(sort);
  auto it = std::find(u.begin(), u.end(), id);
  if (it == u.end()) throw Error("unknown element " + id + " of sort " + sort);
  return static_cast<int>(it - u.begin());
}

std::string FiniteStructure::ElementName(ElementRef e) const {
  return universes_.at(e.sort).at(e.index);
}

size_t FiniteStructure::Offset(const std::vector<int>& sorts,
                               const std::vector<int>& args) const {
  if (sorts.size() != args.size()) throw Error("arity mismatch");
  size_t off = 0;
  for (size_t i = 0; i < sorts.size(); ++i) {
    int n = static_cast<int>(universes_[sorts[i]].size());
    if (args[i] < 0 || args[i] >= n) throw Error("element index out of range");
    off = off * n + args[i];
  }
  return off;
}

const FiniteStructure::RelationTable& FiniteStructure::relation(const std::string& rel) const {
  auto it = relations_.find(rel);
  if (it == relations_.end()) throw Error("unknown relation " + rel);
  return it->second;
}

const FiniteStructure::FunctionTable& FiniteStructure::function(const std::string& fn) const {
  auto it = functions_.find(fn);
  if (it == functions_.end()) throw Error("unknown function " + fn);
  return it->second;
}

void FiniteStructure::SetHolds(const std::string& rel, const std::vector<int>& args, bool v) {
  auto it = relations_.find(rel);
  if (it == relations_.end()) throw Error("unknown relation " + rel);
  it->second.table[Offset(it->second.sorts, args)] = v ? 1 : 0;
}

bool FiniteStructure::Holds(const std::string& rel, const std::vector<int>& args) const {
  const auto& t = relation(rel);
  return t.table[Offset(t.sorts, args)] != 0;
}

void FiniteStructure::SetValue(const std::string& fn, const std::vector<int>& args, int value) {
  auto it = functions_.find(fn);
  if (it == functions_.end()) throw Error("unknown function " + fn);
  if (value < 0 || value >= static_cast<int>(universes_[it->second.result].size())) {
    throw Error("function value out of range for " + fn);
  }
  it->second.table[Offset(it->second.sorts, args)] = value;
}

int FiniteStructure::Apply(const std::string& fn, const std::vector<int>& args) const {
  const auto& t = function(fn);
  int v = t.table[Offset(t.sorts, args)];
  if (v < 0) throw Error("function " + fn + " is undefined on an argument");
  return v;
}

void FiniteStructure::Validate() const {
  for (const auto& [n, t] : functions_) {
    if (std::find(t.table.begin(), t.table.end(), -1) != t.table.end()) {
      throw Error("function " + n + " is not total");
    }
  }
}

void FiniteStructure::SetRelationTable(const std::string& rel, std::vector<uint8_t> table) {
  auto it = relations_.find(rel);
  if (it == relations_.end()) throw Error("unknown relation " + rel);
  if (it->second.table.size() != table.size()) throw Error("table size mismatch for " + rel);
  it->second.table = std::move(table);
}

void FiniteStructure::SetFunctionTable(const std::string& fn, std::vector<int> table) {
  auto it = functions_.find(fn);
  if (it == functions_.end()) throw Error("unknown function " + fn);
  if (it->second.table.size() != table.size()) throw Error("table size mismatch for " + fn);
  it->second.table = std::move(table);
}

bool FiniteStructure::operator==(const FiniteStructure& o) const {
  if (!(sig_ == o.sig_) || universes_ != o.universes_) return false;
  for (const auto& [n, t] : relations_) {
    if (t.table != o.relation(n).table) return false;
  }
  for (const auto& [n, t] : functions_) {
    if (t.table != o.function(n).table) return false;
  }
  return true;
}

namespace {

bool ElementChar(const std::string& s, size_t i) {
  char c = s[i];
  if (std::isalnum(static_cast<unsigned char>(c))) return true;
  if (c == '-') return !(i + 1 < s.size() && s[i + 1] == '>');
  static const std::string extra = "_.'~|+*/@$%^!?[]";
  return extra.find(c) != std::string::npos;
}

std::vector<std::string> TokenizeSet(const std::string& s, int lineno) {
  std::vector<std::string> out;
  size_t i = 0;
  while (i < s.size()) {
    char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
    } else if (s.compare(i, 2, "->") == 0) {
      out.push_back("->");
      i += 2;
    } else if (c == '{' || c == '}' || c == '(' || c == ')' || c == ',') {
      out.emplace_back(1, c);
      ++i;
    } else if (ElementChar(s, i)) {
      size_t j = i;
      while (j < s.size() && ElementChar(s, j)) ++j;
      out.push_back(s.substr(i, j - i));
      i = j;
    } else {
      throw ParseError(std::string("unexpected character '") + c + "'", lineno,
                       static_cast<int>(i) + 1);
    }
  }
  return out;
}

bool IsElementToken(const std::string& t) {
  return t != "{" && t != "}" && t != "(" && t != ")" && t != "," && t != "->";
}

// Parses "{ item, item, ... }" where an item is a tuple "(a,b)", a bare
// element, or a mapping "tuple -> element".
struct SetItem {
  std::vector<std::string> tuple;
  std::string value;
  bool has_value = false;
};

std::vector<SetItem> ParseSetLiteral(const std::string& text, int lineno) {
  auto toks = TokenizeSet(text, lineno);
  size_t p = 0;
  auto fail = [&](const std::string& msg) -> void { throw ParseError(msg, lineno, 1); };
  auto expect = [&](const std::string& t) {
    if (p >= toks.size() || toks[p] != t) fail("expected '" + t + "' in set literal");
    ++p;
  };
  expect("{");
  std::vector<SetItem> out;
  if (p < toks.size() && toks[p] == "}") {
    ++p;
  } else {
    while (true) {
      SetItem item;
      if (p < toks.size() && toks[p] == "(") {
        ++p;
        if (p < toks.size() && toks[p] != ")") {
          while (true) {
            if (p >= toks.size() || !IsElementToken(toks[p])) fail("expected an element");
            item.tuple.push_back(toks[p++]);
            if (p < toks.size() && toks[p] == ",") {
              ++p;
              continue;
            }
            break;
          }
        }
        expect(")");
      } else if (p < toks.size() && toks[p] == "->") {
        // nullary argument list written as "->b"
      } else {
        if (p >= toks.size() || !IsElementToken(toks[p])) fail("expected an element");
        item.tuple.push_back(toks[p++]);
      }
      if (p < toks.size() && toks[p] == "->") {
        ++p;
        if (p >= toks.size() || !IsElementToken(toks[p])) fail("expected a value after '->'");
        item.value = toks[p++];
        item.has_value = true;
      }
      out.push_back(std::move(item));
      if (p < toks.size() && toks[p] == ",") {
        ++p;
        continue;
      }
      break;
    }
    expect("}");
  }
  if (p != toks.size()) fail("trailing input after set literal");
  return out;
}

std::vector<std::string> Words(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  std::string w;
  while (in >> w) out.push_back(w);
  return out;
}

struct PendingStructure {
  std::string name;
  Signature sig;
  std::vector<std::pair<std::string, std::vector<std::string>>> universes;
  struct Table {
    std::string symbol;
    bool is_function;
    std::vector<SetItem> items;
    int line;
  };
  std::vector<Table> tables;
};

FiniteStructure Finish(const PendingStructure& p) {
  FiniteStructure s(p.name, p.sig);
  for (const auto& [sort, elems] : p.universes) s.SetUniverse(sort, elems);
  for (const auto& sort : p.sig.sorts()) {
    bool found = false;
    for (const auto& u : p.universes) found |= u.first == sort;
    if (!found) s.SetUniverse(sort, {});
  }
  for (const auto& t : p.tables) {
    try {
      if (t.is_function) {
        const auto* fn = p.sig.Function(t.symbol);
        for (const auto& item : t.items) {
          if (!item.has_value) throw Error("function entries need '->'");
          if (item.tuple.size() != fn->args.size()) throw Error("wrong arity in " + t.symbol);
          std::vector<int> args;
          for (size_t i = 0; i < item.tuple.size(); ++i) {
            args.push_back(s.ElementIndex(fn->args[i], item.tuple[i]));
          }
          s.SetValue(t.symbol, args, s.ElementIndex(fn->result, item.value));
        }
      } else {
        const auto* rel = p.sig.Relation(t.symbol);
        for (const auto& item : t.items) {
          if (item.has_value) throw Error("relation entries cannot use '->'");
          if (item.tuple.size() != rel->size()) throw Error("wrong arity in " + t.symbol);
          std::vector<int> args;
          for (size_t i = 0; i < item.tuple.size(); ++i) {
            args.push_back(s.ElementIndex((*rel)[i], item.tuple[i]));
          }
          s.SetHolds(t.symbol, args, true);
        }
      }
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      throw ParseError(e.what(), t.line, 1);
    }
  }
  try {
    s.Validate();
  } catch (const Error& e) {
    throw ParseError(std::string(e.what()) + " in structure " + p.name, 1, 1);
  }
  return s;
}

}  // namespace

std::vector<FiniteStructure> ParseStructureFile(const std::string& text) {
  std::vector<FiniteStructure> out;
  std::optional<PendingStructure> cur;
  std::istringstream in(text);
  std::string raw;
  std::string stmt;
  int lineno = 0;
  int stmt_line = 0;
  int depth = 0;
  auto handle = [&](const std::string& st, int line) {
    auto eq = st.find('=');
    std::string head = eq == std::string::npos ? st : st.substr(0, eq);
    std::string body = eq == std::string::npos ? "" : st.substr(eq + 1);
    std::string spaced;
    for (size_t i = 0; i < head.size(); ++i) {
      if (head.compare(i, 2, "->") == 0) {
        spaced += " -> ";
        ++i;
      } else if (head[i] == ':') {
        spaced += " : ";
      } else {
        spaced += head[i];
      }
    }
    auto w = Words(spaced);
    if (w.empty()) return;
    if (w[0] == "structure") {
      if (w.size() != 2) throw ParseError("expected 'structure NAME'", line, 1);
      if (cur) out.push_back(Finish(*cur));
      cur.emplace();
      cur->name = w[1];
      return;
    }
    if (!cur) {
      cur.emplace();
      cur->name = "M";
    }
    try {
      if (w[0] == "sort") {
        if (w.size() != 2 || !IsIdentifier(w[1])) throw ParseError("expected 'sort NAME = {...}'", line, 1);
        cur->sig.AddSort(w[1]);
        std::vector<std::string> elems;
        if (eq != std::string::npos) {
          for (const auto& item : ParseSetLiteral(body, line)) {
            if (item.tuple.size() != 1 || item.has_value) {
              throw ParseError("sort elements must be plain names", line, 1);
            }
            elems.push_back(item.tuple[0]);
          }
        }
        cur->universes.emplace_back(w[1], elems);
      } else if (w[0] == "rel") {
        if (w.size() < 3 || w[2] != ":") throw ParseError("expected 'rel NAME : SORTS = {...}'", line, 1);
        cur->sig.AddRelation(w[1], {w.begin() + 3, w.end()});
        std::vector<SetItem> items;
        if (eq != std::string::npos) items = ParseSetLiteral(body, line);
        cur->tables.push_back({w[1], false, items, line});
      } else if (w[0] == "fun") {
        if (w.size() < 4 || w[2] != ":" || w[w.size() - 2] != "->") {
          throw ParseError("expected 'fun NAME : SORTS -> SORT = {...}'", line, 1);
        }
        cur->sig.AddFunction(w[1], {w.begin() + 3, w.end() - 2}, w.back());
        std::vector<SetItem> items;
        if (eq != std::string::npos) items = ParseSetLiteral(body, line);
        cur->tables.push_back({w[1], true, items, line});
      } else {
        throw ParseError("unknown declaration '" + w[0] + "'", line, 1);
      }
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      throw ParseError(e.what(), line, 1);
    }
  };
  while (std::getline(in, raw)) {
    ++lineno;
    auto hash = raw.find('#');
    if (hash != std::string::npos) raw = raw.substr(0, hash);
    if (stmt.empty()) stmt_line = lineno;
    stmt += raw + " ";
    for (char c : raw) {
      if (c == '{') ++depth;
      if (c == '}') --depth;
    }
    if (depth > 0) continue;
    if (depth < 0) throw ParseError("unbalanced '}'", lineno, 1);
    handle(stmt, stmt_line);
    stmt.clear();
  }
  if (depth != 0) throw ParseError("unterminated set literal", stmt_line, 1);
  if (cur) out.push_back(Finish(*cur));
  return out;
}

FiniteStructure LoadStructure(const std::string& path) {
  auto all = ParseStructureFile(ReadFile(path));
  if (all.empty()) throw Error("no structure in " + path);
  return all[0];
}

std::string PrintTuple(const FiniteStructure& s, const std::vector<std::string>& sorts,
                       const std::vector<int>& tuple) {
  std::string out = "(";
  for (size_t i = 0; i < tuple.size(); ++i) {
    if (i) out += ",";
    out += s.Universe(sorts[i])[tuple[i]];
  }
  return out + ")";
}

std::string PrintStructure(const FiniteStructure& s) {
  std::string out = "structure " + (s.name().empty() ? std::string("M") : s.name()) + "\n";
  const auto& sig = s.signature();
  for (const auto& sort : sig.sorts()) {
    out += "sort " + sort + " = {";
    const auto& u = s.Universe(sort);
    for (size_t i = 0; i < u.size(); ++i) out += (i ? ", " : "") + u[i];
    out += "}\n";
  }
  for (const auto& [n, args] : sig.relations()) {
    out += "rel " + n + " :";
    for (const auto& a : args) out += " " + a;
    out += " = {";
    TupleSpace space(s, args);
    bool first = true;
    const auto& t = s.relation(n);
    for (size_t c = 0; c < space.Count(); ++c) {
      if (!t.table[c]) continue;
      out += first ? "" : ", ";
      first = false;
      out += PrintTuple(s, args, space.Decode(c));
    }
    out += "}\n";
  }
  for (const auto& [n, f] : sig.functions()) {
    out += "fun " + n + " :";
    for (const auto& a : f.args) out += " " + a;
    out += " -> " + f.result + " = {";
    TupleSpace space(s, f.args);
    const auto& t = s.function(n);
    for (size_t c = 0; c < space.Count(); ++c) {
      out += c ? ", " : "";
      auto tuple = space.Decode(c);
      if (tuple.size() == 1) {
        out += s.Universe(f.args[0])[tuple[0]];
      } else {
        out += PrintTuple(s, f.args, tuple);
      }
      out += "->" + (t.table[c] < 0 ? std::string("?") : s.Universe(f.result)[t.table[c]]);
    }
    out += "}\n";
  }
  return out;
}

FiniteStructure Reduct(const FiniteStructure& s, const Signature& sig) {
  if (!sig.IsSubsignatureOf(s.signature())) {
    throw Error("reduct signature is not contained in the structure's signature");
  }
  FiniteStructure out(s.name(), sig);
  for (const auto& sort : sig.sorts()) out.SetUniverse(sort, s.Universe(sort));
  for (const auto& [n, _] : sig.relations()) {
    out.SetRelationTable(n, s.relation(n).table);
  }
  for (const auto& [n, _] : sig.functions()) {
    out.SetFunctionTable(n, s.function(n).table);
  }
  return out;
}

FiniteStructure Expand(const FiniteStructure& s, const FiniteStructure& extra) {
  Signature sig = s.signature().Union(extra.signature());
  FiniteStructure out(s.name(), sig);
  for (const auto& sort : sig.sorts()) {
    if (s.signature().HasSort(sort) && extra.signature().HasSort(sort) &&
        s.Universe(sort) != extra.Universe(sort)) {
      throw Error("expansion changes the universe of sort " + sort);
    }
    out.SetUniverse(sort, s.signature().HasSort(sort) ? s.Universe(sort) : extra.Universe(sort));
  }
  for (const auto* src : {&s, &extra}) {
    for (const auto& [n, _] : src->signature().relations()) {
      out.SetRelationTable(n, src->relation(n).table);
    }
    for (const auto& [n, _] : src->signature().functions()) {
      out.SetFunctionTable(n, src->function(n).table);
    }
  }
  return out;
}

FiniteStructure ExtendFresh(const FiniteStructure& s, int k,
                            const std::vector<std::string>& sorts) {
  if (!s.signature().IsRelational()) {
    throw Error("fresh elements can only be added to relational structures");
  }
  FiniteStructure out(s.name(), s.signature());
  std::vector<std::string> targets = sorts.empty() ? s.signature().sorts() : sorts;
  for (const auto& sort : s.signature().sorts()) {
    auto u = s.Universe(sort);
    if (std::find(targets.begin(), targets.end(), sort) != targets.end()) {
      std::set<std::string> used(u.begin(), u.end());
      int added = 0;
      for (int i = 0; added < k; ++i) {
        std::string name = "fresh" + std::to_string(i);
        if (used.insert(name).second) {
          u.push_back(name);
          ++added;
        }
      }
    }
    out.SetUniverse(sort, u);
  }
  for (const auto& [n, args] : s.signature().relations()) {
    TupleSpace space(s, args);
    const auto& t = s.relation(n);
    for (size_t c = 0; c < space.Count(); ++c) {
      if (t.table[c]) out.SetHolds(n, space.Decode(c), true);
    }
  }
  return out;
}

namespace {

class Evaluator {
 public:
  explicit Evaluator(const FiniteStructure& s) : s_(s) {}

  void Bind(const Variable& v, int value) { env_.push_back({v, value}); }

  int Lookup(const Variable& v) const {
    for (auto it = env_.rbegin(); it != env_.rend(); ++it) {
      if (it->first == v) return it->second;
    }
    throw Error("unassigned variable " + v.name);
  }

  int Term(const fusionkit::Term& t) {
    if (t.is_var()) return Lookup(t.var);
    std::vector<int> args;
    args.reserve(t.args.size());
    for (const auto& a : t.args) args.push_back(Term(a));
    return s_.Apply(t.symbol, args);
  }

  bool Eval(const Formula& f) {
    using K = Formula::Kind;
    switch (f.kind()) {
      case K::kTrue:
        return true;
      case K::kFalse:
        return false;
      case K::kEquals:
        return Term(f.terms()[0]) == Term(f.terms()[1]);
      case K::kRelation: {
        std::vector<int> args;
        args.reserve(f.terms().size());
        for (const auto& t : f.terms()) args.push_back(Term(t));
        return s_.Holds(f.symbol(), args);
      }
      case K::kNot:
        return !Eval(f.operand());
      case K::kAnd:
        return Eval(f.left()) && Eval(f.right());
      case K::kOr:
        return Eval(f.left()) || Eval(f.right());
      case K::kImplies:
        return !Eval(f.left()) || Eval(f.right());
      case K::kExists:
      case K::kForall: {
        bool exists = f.kind() == K::kExists;
        int n = s_.Size(f.bound().sort);
        env_.push_back({f.bound(), 0});
        bool result = !exists;
        for (int i = 0; i < n; ++i) {
          env_.back().second = i;
          if (Eval(f.body()) == exists) {
            result = exists;
            break;
          }
        }
        env_.pop_back();
        return result;
      }
    }
    return false;
  }

 private:
  const FiniteStructure& s_;
  std::vector<std::pair<Variable, int>> env_;
};

}  // namespace

int EvaluateTerm(const FiniteStructure& s, const Term& t, const Assignment& a) {
  Evaluator e(s);
  for (const auto& [v, x] : a) e.Bind(v, x);
  return e.Term(t);
}

bool Evaluate(const FiniteStructure& s, const Formula& f, const Assignment& a) {
  Evaluator e(s);
  for (const auto& [v, x] : a) e.Bind(v, x);
  return e.Eval(f);
}

TupleSpace::TupleSpace(const FiniteStructure& s, const std::vector<std::string>& sorts) {
  for (const auto& so : sorts) sizes_.push_back(s.Size(so));
}

size_t TupleSpace::Count() const {
  size_t n = 1;
  for (int k : sizes_) n *= static_cast<size_t>(k);
  return n;
}

size_t TupleSpace::Encode(const std::vector<int>& tuple) const {
  size_t code = 0;
  for (size_t i = 0; i < sizes_.size(); ++i) code = code * sizes_[i] + tuple[i];
  return code;
}

std::vector<int> TupleSpace::Decode(size_t code) const {
  std::vector<int> out(sizes_.size());
  for (size_t i = sizes_.size(); i-- > 0;) {
    out[i] = static_cast<int>(code % sizes_[i]);
    code /= sizes_[i];
  }
  return out;
}

TupleSet::TupleSet(size_t universe) : n_(universe), bits_((universe + 63) / 64, 0) {}

TupleSet TupleSet::Full(size_t universe) {
  TupleSet s(universe);
  for (size_t i = 0; i < universe; ++i) s.Insert(i);
  return s;
}

size_t TupleSet::Count() const {
  size_t c = 0;
  for (auto w : bits_) c += std::popcount(w);
  return c;
}

bool TupleSet::Empty() const {
  for (auto w : bits_) {
    if (w) return false;
  }
  return true;
}

std::vector<size_t> TupleSet::Elements() const {
  std::vector<size_t> out;
  for (size_t i = 0; i < n_; ++i) {
    if (Contains(i)) out.push_back(i);
  }
  return out;
}

TupleSet TupleSet::operator|(const TupleSet& o) const {
  TupleSet r = *this;
  for (size_t i = 0; i < bits_.size(); ++i) r.bits_[i] |= o.bits_[i];
  return r;
}

TupleSet TupleSet::operator&(const TupleSet& o) const {
  TupleSet r = *this;
  for (size_t i = 0; i < bits_.size(); ++i) r.bits_[i] &= o.bits_[i];
  return r;
}

TupleSet TupleSet::operator-(const TupleSet& o) const {
  TupleSet r = *this;
  for (size_t i = 0; i < bits_.size(); ++i) r.bits_[i] &= ~o.bits_[i];
  return r;
}

TupleSet TupleSet::Complement() const { return Full(n_) - *this; }

bool TupleSet::SubsetOf(const TupleSet& o) const {
  for (size_t i = 0; i < bits_.size(); ++i) {
    if (bits_[i] & ~o.bits_[i]) return false;
  }
  return true;
}

bool TupleSet::Intersects(const TupleSet& o) const {
  for (size_t i = 0; i < bits_.size(); ++i) {
    if (bits_[i] & o.bits_[i]) return true;
  }
  return false;
}

bool TupleSet::operator<(const TupleSet& o) const {
  if (n_ != o.n_) return n_ < o.n_;
  return bits_ < o.bits_;
}

size_t TupleSet::Hash() const {
  size_t h = std::hash<size_t>()(n_);
  for (auto w : bits_) h = h * 1000003u ^ std::hash<uint64_t>()(w);
  return h;
}

std::vector<std::string> SortsOf(const std::vector<Variable>& vars) {
  std::vector<std::string> out;
  for (const auto& v : vars) out.push_back(v.sort);
  return out;
}

TupleSet ExtensionOf(const FiniteStructure& s, const Formula& f,
                     const std::vector<Variable>& vars, const Assignment& params) {
  TupleSpace space(s, SortsOf(vars));
  TupleSet out(space.Count());
  for (size_t c = 0; c < space.Count(); ++c) {
    std::vector<int> tuple = space.Decode(c);
    Evaluator ev(s);
    for (const auto& [v, x] : params) ev.Bind(v, x);
    for (size_t i = 0; i < vars.size(); ++i) ev.Bind(vars[i], tuple[i]);
    if (ev.Eval(f)) out.Insert(c);
  }
  return out;
}

std::string PrintAssignment(const FiniteStructure& s, const Assignment& a) {
  if (a.empty()) return "none";
  std::string out;
  for (const auto& [v, x] : a) {
    if (!out.empty()) out += ",";
    out += v.name + "->" + s.Universe(v.sort)[x];
  }
  return out;
}

}  // namespace fusionkit
