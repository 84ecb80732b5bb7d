#include "fusionkit/parse.h"

#include <cctype>
#include <fstream>
#include <optional>
#include <sstream>

namespace fusionkit {

namespace {

enum class Tok {
  kIdent,
  kLParen,
  kRParen,
  kComma,
  kDot,
  kColon,
  kNot,
  kAnd,
  kOr,
  kArrow,
  kEq,
  kTrue,
  kFalse,
  kForall,
  kExists,
  kExistsLe,
  kEnd
};

struct Token {
  Tok kind;
  std::string text;
  int number = 0;
  int line = 1;
  int col = 1;
};

bool IdentStart(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool IdentChar(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
}

std::vector<Token> Lex(const std::string& s) {
  std::vector<Token> out;
  int line = 1, col = 1;
  size_t i = 0;
  auto advance = [&](size_t n) {
    for (size_t k = 0; k < n; ++k) {
      if (s[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      ++i;
    }
  };
  while (i < s.size()) {
    char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    Token t;
    t.line = line;
    t.col = col;
    if (IdentStart(c)) {
      size_t j = i;
      while (j < s.size() && IdentChar(s[j])) ++j;
      t.text = s.substr(i, j - i);
      t.kind = Tok::kIdent;
      if (t.text == "true") t.kind = Tok::kTrue;
      if (t.text == "false") t.kind = Tok::kFalse;
      if (t.text == "forall") t.kind = Tok::kForall;
      if (t.text == "exists") {
        t.kind = Tok::kExists;
        if (s.compare(j, 2, "<=") == 0) {
          size_t k = j + 2;
          size_t d = k;
          while (d < s.size() && std::isdigit(static_cast<unsigned char>(s[d]))) ++d;
          if (d == k) {
            throw ParseError("expected a number after exists<=", line,
                             col + static_cast<int>(k - i));
          }
          t.kind = Tok::kExistsLe;
          t.number = std::stoi(s.substr(k, d - k));
          j = d;
        }
      }
      advance(j - i);
      out.push_back(t);
      continue;
    }
    if (c == '-' && i + 1 < s.size() && s[i + 1] == '>') {
      t.kind = Tok::kArrow;
      t.text = "->";
      advance(2);
      out.push_back(t);
      continue;
    }
    switch (c) {
      case '(': t.kind = Tok::kLParen; break;
      case ')': t.kind = Tok::kRParen; break;
      case ',': t.kind = Tok::kComma; break;
      case '.': t.kind = Tok::kDot; break;
      case ':': t.kind = Tok::kColon; break;
      case '~': t.kind = Tok::kNot; break;
      case '&': t.kind = Tok::kAnd; break;
      case '|': t.kind = Tok::kOr; break;
      case '=': t.kind = Tok::kEq; break;
      default:
        throw ParseError(std::string("unexpected character '") + c + "'", line,
                         col);
    }
    t.text = std::string(1, c);
    advance(1);
    out.push_back(t);
  }
  Token end;
  end.kind = Tok::kEnd;
  end.line = line;
  end.col = col;
  out.push_back(end);
  return out;
}

struct RawTerm {
  std::string name;
  bool applied = false;
  std::vector<RawTerm> args;
  std::string annotation;
  int line = 1, col = 1;
};

struct RawFormula {
  Formula::Kind kind = Formula::Kind::kTrue;
  std::string symbol;
  std::vector<RawTerm> terms;
  std::vector<RawFormula> subs;
  Variable bound;
  int at_most = -1;
  int line = 1, col = 1;
};

class Parser {
 public:
  Parser(const std::string& text, const Signature& sig)
      : toks_(Lex(text)), sig_(sig) {}

  RawFormula ParseAll() {
    RawFormula f = ParseImplication();
    Expect(Tok::kEnd, "end of input");
    return f;
  }

  RawTerm ParseTermAll() {
    RawTerm t = ParseRawTerm();
    Expect(Tok::kEnd, "end of input");
    return t;
  }

 private:
  const Token& Peek() const { return toks_[pos_]; }
  Token Take() { return toks_[pos_++]; }
  bool Accept(Tok k) {
    if (Peek().kind == k) {
      ++pos_;
      return true;
    }
    return false;
  }
  Token Expect(Tok k, const std::string& what) {
    if (Peek().kind != k) Fail("expected " + what);
    return Take();
  }
  [[noreturn]] void Fail(const std::string& msg) const {
    const Token& t = Peek();
    std::string got = t.kind == Tok::kEnd ? "end of input" : "'" + t.text + "'";
    throw ParseError(msg + ", found " + got, t.line, t.col);
  }

  RawFormula Node(Formula::Kind k, const Token& at) {
    RawFormula f;
    f.kind = k;
    f.line = at.line;
    f.col = at.col;
    return f;
  }

  RawFormula ParseImplication() {
    const Token start = Peek();
    RawFormula lhs = ParseDisjunction();
    if (Peek().kind == Tok::kArrow) {
      Take();
      RawFormula rhs = ParseImplication();
      RawFormula f = Node(Formula::Kind::kImplies, start);
      f.subs = {std::move(lhs), std::move(rhs)};
      return f;
    }
    return lhs;
  }

  RawFormula ParseDisjunction() {
    const Token start = Peek();
    RawFormula lhs = ParseConjunction();
    while (Accept(Tok::kOr)) {
      RawFormula rhs = ParseConjunction();
      RawFormula f = Node(Formula::Kind::kOr, start);
      f.subs = {std::move(lhs), std::move(rhs)};
      lhs = std::move(f);
    }
    return lhs;
  }

  RawFormula ParseConjunction() {
    const Token start = Peek();
    RawFormula lhs = ParseUnary();
    while (Accept(Tok::kAnd)) {
      RawFormula rhs = ParseUnary();
      RawFormula f = Node(Formula::Kind::kAnd, start);
      f.subs = {std::move(lhs), std::move(rhs)};
      lhs = std::move(f);
    }
    return lhs;
  }

  RawFormula ParseUnary() {
    const Token t = Peek();
    switch (t.kind) {
      case Tok::kNot: {
        Take();
        RawFormula f = Node(Formula::Kind::kNot, t);
        f.subs = {ParseUnary()};
        return f;
      }
      case Tok::kForall:
      case Tok::kExists:
      case Tok::kExistsLe: {
        Take();
        RawFormula f = Node(
            t.kind == Tok::kForall ? Formula::Kind::kForall : Formula::Kind::kExists,
            t);
        if (t.kind == Tok::kExistsLe) f.at_most = t.number;
        Token v = Expect(Tok::kIdent, "a variable");
        Expect(Tok::kColon, "':' and a sort");
        Token s = Expect(Tok::kIdent, "a sort");
        if (!sig_.HasSort(s.text)) {
          throw ParseError("unknown sort " + s.text, s.line, s.col);
        }
        Expect(Tok::kDot, "'.'");
        f.bound = Variable{v.text, s.text};
        f.subs = {ParseImplication()};
        return f;
      }
      case Tok::kTrue:
        Take();
        return Node(Formula::Kind::kTrue, t);
      case Tok::kFalse:
        Take();
        return Node(Formula::Kind::kFalse, t);
      case Tok::kLParen: {
        Take();
        RawFormula f = ParseImplication();
        Expect(Tok::kRParen, "')'");
        return f;
      }
      case Tok::kIdent:
        return ParseAtom();
      default:
        Fail("expected a formula");
    }
  }

  RawFormula ParseAtom() {
    const Token t = Peek();
    if (sig_.Relation(t.text)) {
      Take();
      RawFormula f = Node(Formula::Kind::kRelation, t);
      f.symbol = t.text;
      if (Accept(Tok::kLParen)) {
        if (!Accept(Tok::kRParen)) {
          f.terms.push_back(ParseRawTerm());
          while (Accept(Tok::kComma)) f.terms.push_back(ParseRawTerm());
          Expect(Tok::kRParen, "',' or ')'");
        }
      }
      return f;
    }
    RawFormula f = Node(Formula::Kind::kEquals, t);
    f.terms.push_back(ParseRawTerm());
    Expect(Tok::kEq, "'='");
    f.terms.push_back(ParseRawTerm());
    return f;
  }

  RawTerm ParseRawTerm() {
    Token t = Expect(Tok::kIdent, "a term");
    RawTerm out;
    out.name = t.text;
    out.line = t.line;
    out.col = t.col;
    if (Accept(Tok::kLParen)) {
      out.applied = true;
      if (!Accept(Tok::kRParen)) {
        out.args.push_back(ParseRawTerm());
        while (Accept(Tok::kComma)) out.args.push_back(ParseRawTerm());
        Expect(Tok::kRParen, "',' or ')'");
      }
    } else if (Peek().kind == Tok::kColon) {
      Take();
      Token s = Expect(Tok::kIdent, "a sort");
      if (!sig_.HasSort(s.text)) {
        throw ParseError("unknown sort " + s.text, s.line, s.col);
      }
      out.annotation = s.text;
    }
    return out;
  }

  std::vector<Token> toks_;
  size_t pos_ = 0;
  const Signature& sig_;
};

// Assigns sorts to free variables, then builds typed syntax.
class Elaborator {
 public:
  Elaborator(const Signature& sig, const std::vector<Variable>& hints)
      : sig_(sig) {
    for (const auto& v : hints) known_[v.name] = v.sort;
  }

  Formula Run(const RawFormula& f) {
    for (int round = 0; round < 64; ++round) {
      changed_ = false;
      scope_.clear();
      Collect(f);
      if (!changed_) break;
    }
    ResolveRemaining();
    scope_.clear();
    return Build(f);
  }

  Term RunTerm(const RawTerm& t) {
    for (int round = 0; round < 64; ++round) {
      changed_ = false;
      SortOfRaw(t, "");
      if (!changed_) break;
    }
    ResolveRemaining();
    return BuildTerm(t);
  }

 private:
  const std::string* Bound(const std::string& name) const {
    for (auto it = scope_.rbegin(); it != scope_.rend(); ++it) {
      if (it->name == name) return &it->sort;
    }
    return nullptr;
  }

  bool IsConstant(const RawTerm& t) const {
    const auto* fn = sig_.Function(t.name);
    return fn && fn->args.empty() && !Bound(t.name);
  }

  void Record(const RawTerm& t, const std::string& sort) {
    auto it = known_.find(t.name);
    if (it == known_.end()) {
      known_[t.name] = sort;
      changed_ = true;
      return;
    }
    if (it->second != sort) {
      throw ParseError("variable " + t.name + " used with sorts " + it->second +
                           " and " + sort,
                       t.line, t.col);
    }
  }

  std::string SortOfRaw(const RawTerm& t, const std::string& expected) {
    if (t.applied || IsConstant(t)) {
      const auto* fn = sig_.Function(t.name);
      if (!fn) throw ParseError("unknown function symbol " + t.name, t.line, t.col);
      if (fn->args.size() != t.args.size()) {
        throw ParseError("function " + t.name + " expects " +
                             std::to_string(fn->args.size()) + " arguments",
                         t.line, t.col);
      }
      for (size_t i = 0; i < t.args.size(); ++i) SortOfRaw(t.args[i], fn->args[i]);
      return fn->result;
    }
    if (const std::string* b = Bound(t.name)) return *b;
    if (!t.annotation.empty()) Record(t, t.annotation);
    if (!expected.empty()) Record(t, expected);
    free_.insert(t.name);
    if (first_.find(t.name) == first_.end()) first_[t.name] = {t.line, t.col};
    auto it = known_.find(t.name);
    return it == known_.end() ? "" : it->second;
  }

  void Collect(const RawFormula& f) {
    switch (f.kind) {
      case Formula::Kind::kEquals: {
        std::string a = SortOfRaw(f.terms[0], "");
        std::string b = SortOfRaw(f.terms[1], a);
        if (a.empty() && !b.empty()) SortOfRaw(f.terms[0], b);
        return;
      }
      case Formula::Kind::kRelation: {
        const auto* rel = sig_.Relation(f.symbol);
        if (rel->size() != f.terms.size()) {
          throw ParseError("relation " + f.symbol + " expects " +
                               std::to_string(rel->size()) + " arguments",
                           f.line, f.col);
        }
        for (size_t i = 0; i < f.terms.size(); ++i) SortOfRaw(f.terms[i], (*rel)[i]);
        return;
      }
      case Formula::Kind::kExists:
      case Formula::Kind::kForall:
        scope_.push_back(f.bound);
        Collect(f.subs[0]);
        scope_.pop_back();
        return;
      default:
        for (const auto& s : f.subs) Collect(s);
    }
  }

  void ResolveRemaining() {
    for (const auto& name : free_) {
      if (known_.count(name)) continue;
      if (sig_.sorts().size() == 1) {
        known_[name] = sig_.sorts()[0];
        continue;
      }
      auto [line, col] = first_[name];
      throw ParseError("cannot infer the sort of free variable " + name, line, col);
    }
  }

  Term BuildTerm(const RawTerm& t) {
    if (t.applied || IsConstant(t)) {
      const auto* fn = sig_.Function(t.name);
      std::vector<Term> args;
      for (size_t i = 0; i < t.args.size(); ++i) {
        Term a = BuildTerm(t.args[i]);
        if (SortOf(a, sig_) != fn->args[i]) {
          throw ParseError("argument " + std::to_string(i + 1) + " of " + t.name +
                               " should have sort " + fn->args[i],
                           t.args[i].line, t.args[i].col);
        }
        args.push_back(std::move(a));
      }
      return Term::Apply(t.name, std::move(args));
    }
    if (const std::string* b = Bound(t.name)) {
      if (!t.annotation.empty() && t.annotation != *b) {
        throw ParseError("annotation conflicts with binder of " + t.name, t.line,
                         t.col);
      }
      return Term::Var(t.name, *b);
    }
    return Term::Var(t.name, known_.at(t.name));
  }

  Formula Build(const RawFormula& f) {
    switch (f.kind) {
      case Formula::Kind::kTrue:
        return Formula::True();
      case Formula::Kind::kFalse:
        return Formula::False();
      case Formula::Kind::kEquals: {
        Term a = BuildTerm(f.terms[0]);
        Term b = BuildTerm(f.terms[1]);
        if (SortOf(a, sig_) != SortOf(b, sig_)) {
          throw ParseError("equality between sorts " + SortOf(a, sig_) + " and " +
                               SortOf(b, sig_),
                           f.line, f.col);
        }
        return Formula::Equals(std::move(a), std::move(b));
      }
      case Formula::Kind::kRelation: {
        const auto* rel = sig_.Relation(f.symbol);
        std::vector<Term> args;
        for (size_t i = 0; i < f.terms.size(); ++i) {
          Term a = BuildTerm(f.terms[i]);
          if (SortOf(a, sig_) != (*rel)[i]) {
            throw ParseError("argument " + std::to_string(i + 1) + " of " +
                                 f.symbol + " should have sort " + (*rel)[i],
                             f.terms[i].line, f.terms[i].col);
          }
          args.push_back(std::move(a));
        }
        return Formula::Relation(f.symbol, std::move(args));
      }
      case Formula::Kind::kNot:
        return Formula::Not(Build(f.subs[0]));
      case Formula::Kind::kAnd:
        return Formula::And(Build(f.subs[0]), Build(f.subs[1]));
      case Formula::Kind::kOr:
        return Formula::Or(Build(f.subs[0]), Build(f.subs[1]));
      case Formula::Kind::kImplies:
        return Formula::Implies(Build(f.subs[0]), Build(f.subs[1]));
      case Formula::Kind::kExists:
      case Formula::Kind::kForall: {
        scope_.push_back(f.bound);
        Formula body = Build(f.subs[0]);
        scope_.pop_back();
        if (f.at_most >= 0) return Formula::ExistsAtMost(f.at_most, f.bound, body);
        return f.kind == Formula::Kind::kExists ? Formula::Exists(f.bound, body)
                                                : Formula::Forall(f.bound, body);
      }
    }
    return Formula::True();
  }

  const Signature& sig_;
  std::map<std::string, std::string> known_;
  std::set<std::string> free_;
  std::map<std::string, std::pair<int, int>> first_;
  std::vector<Variable> scope_;
  bool changed_ = false;
};

int Precedence(Formula::Kind k) {
  switch (k) {
    case Formula::Kind::kImplies:
      return 1;
    case Formula::Kind::kOr:
      return 2;
    case Formula::Kind::kAnd:
      return 3;
    default:
      return 4;
  }
}

struct Printed {
  std::string text;
  bool open = false;  // a trailing quantifier body would absorb what follows
};

Printed PrintRec(const Formula& f) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::kTrue:
      return {"true"};
    case K::kFalse:
      return {"false"};
    case K::kEquals:
      return {Print(f.terms()[0]) + "=" + Print(f.terms()[1])};
    case K::kRelation: {
      std::string s = f.symbol();
      if (!f.terms().empty()) {
        s += "(";
        for (size_t i = 0; i < f.terms().size(); ++i) {
          if (i) s += ",";
          s += Print(f.terms()[i]);
        }
        s += ")";
      }
      return {s};
    }
    case K::kNot: {
      const Formula& o = f.operand();
      if (o.kind() == K::kEquals || o.IsBinary()) {
        return {"~(" + PrintRec(o).text + ")"};
      }
      Printed p = PrintRec(o);
      return {"~" + p.text, p.open};
    }
    case K::kExists:
    case K::kForall: {
      std::string head = (f.kind() == K::kExists ? "exists " : "forall ") +
                         f.bound().name + ":" + f.bound().sort + ". ";
      const Formula& b = f.body();
      if (b.IsBinary()) return {head + "(" + PrintRec(b).text + ")", true};
      return {head + PrintRec(b).text, true};
    }
    case K::kAnd:
    case K::kOr:
    case K::kImplies: {
      int prec = Precedence(f.kind());
      const char* op = f.kind() == K::kAnd ? " & " : f.kind() == K::kOr ? " | " : " -> ";
      Printed l = PrintRec(f.left());
      Printed r = PrintRec(f.right());
      int lp = Precedence(f.left().kind());
      int rp = Precedence(f.right().kind());
      bool lparen = lp < prec || (lp == prec && f.kind() == K::kImplies) || l.open;
      bool rparen = rp < prec || (rp == prec && f.kind() != K::kImplies);
      std::string s = (lparen ? "(" + l.text + ")" : l.text) + op +
                      (rparen ? "(" + r.text + ")" : r.text);
      return {s, !rparen && r.open};
    }
  }
  return {"true"};
}

std::vector<std::string> SplitWords(const std::string& line) {
  std::string spaced;
  for (size_t i = 0; i < line.size(); ++i) {
    if (line.compare(i, 2, "->") == 0) {
      spaced += " -> ";
      ++i;
    } else if (line[i] == ':' || line[i] == ',') {
      spaced += line[i] == ':' ? " : " : " ";
    } else {
      spaced += line[i];
    }
  }
  std::istringstream in(spaced);
  std::vector<std::string> out;
  std::string w;
  while (in >> w) out.push_back(w);
  return out;
}

}  // namespace

bool IsIdentifier(const std::string& s) {
  if (s.empty() || !IdentStart(s[0])) return false;
  for (char c : s) {
    if (!IdentChar(c)) return false;
  }
  return true;
}

Formula ParseFormula(const std::string& text, const Signature& sig,
                     const std::vector<Variable>& hints) {
  Parser p(text, sig);
  RawFormula raw = p.ParseAll();
  return Elaborator(sig, hints).Run(raw);
}

Term ParseTerm(const std::string& text, const Signature& sig,
               const std::vector<Variable>& hints) {
  Parser p(text, sig);
  RawTerm raw = p.ParseTermAll();
  return Elaborator(sig, hints).RunTerm(raw);
}

std::string Print(const Term& t) {
  if (t.is_var()) return t.var.name;
  if (t.args.empty()) return t.symbol;
  std::string s = t.symbol + "(";
  for (size_t i = 0; i < t.args.size(); ++i) {
    if (i) s += ",";
    s += Print(t.args[i]);
  }
  return s + ")";
}

std::string Print(const Formula& f) { return PrintRec(f).text; }

std::string Print(const Variable& v) { return v.name + ":" + v.sort; }

SignatureFile ParseSignatureFile(const std::string& text) {
  SignatureFile out;
  std::vector<Language> langs;
  std::vector<std::pair<std::string, std::vector<std::string>>> lang_lines;
  std::vector<int> lang_line_numbers;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    auto w = SplitWords(line);
    if (w.empty()) continue;
    try {
      if (w[0] == "sort") {
        if (w.size() != 2 || !IsIdentifier(w[1])) {
          throw ParseError("expected 'sort NAME'", lineno, 1);
        }
        out.signature.AddSort(w[1]);
      } else if (w[0] == "rel") {
        if (w.size() < 3 || w[2] != ":" || !IsIdentifier(w[1])) {
          throw ParseError("expected 'rel NAME : SORTS'", lineno, 1);
        }
        out.signature.AddRelation(w[1], {w.begin() + 3, w.end()});
      } else if (w[0] == "fun") {
        if (w.size() < 5 || w[2] != ":" || w[w.size() - 2] != "->" ||
            !IsIdentifier(w[1])) {
          throw ParseError("expected 'fun NAME : SORTS -> SORT'", lineno, 1);
        }
        out.signature.AddFunction(w[1], {w.begin() + 3, w.end() - 2}, w.back());
      } else if (w[0] == "lang") {
        if (w.size() < 3 || w[2] != "uses") {
          throw ParseError("expected 'lang LABEL uses SYMBOLS'", lineno, 1);
        }
        lang_lines.emplace_back(w[1], std::vector<std::string>(w.begin() + 3, w.end()));
        lang_line_numbers.push_back(lineno);
      } else {
        throw ParseError("unknown declaration '" + w[0] + "'", lineno, 1);
      }
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      throw ParseError(e.what(), lineno, 1);
    }
  }
  for (size_t i = 0; i < lang_lines.size(); ++i) {
    std::set<std::string> syms;
    for (const auto& s : lang_lines[i].second) {
      if (!out.signature.HasSymbol(s)) {
        throw ParseError("unknown symbol " + s + " in lang " + lang_lines[i].first,
                         lang_line_numbers[i], 1);
      }
      syms.insert(s);
    }
    langs.push_back({lang_lines[i].first, out.signature.Restrict(syms)});
  }
  if (!langs.empty()) out.family = LanguageFamily(std::move(langs));
  return out;
}

SignatureFile LoadSignatureFile(const std::string& path) {
  return ParseSignatureFile(ReadFile(path));
}

std::string PrintSignature(const Signature& sig) {
  std::string out;
  for (const auto& s : sig.sorts()) out += "sort " + s + "\n";
  for (const auto& [n, a] : sig.relations()) {
    out += "rel " + n + " :";
    for (const auto& s : a) out += " " + s;
    out += "\n";
  }
  for (const auto& [n, f] : sig.functions()) {
    out += "fun " + n + " :";
    for (const auto& s : f.args) out += " " + s;
    out += " -> " + f.result + "\n";
  }
  return out;
}

std::string ReadFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void WriteFile(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  out << text;
}

namespace {

std::string TrimBlank(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\n");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\n");
  return s.substr(b, e - b + 1);
}

}  // namespace

std::vector<Variable> ParseVariableList(const std::string& text) {
  std::vector<Variable> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    item = TrimBlank(item);
    if (item.empty()) continue;
    size_t colon = item.find(':');
    if (colon == std::string::npos) throw Error("variable needs a sort: " + item);
    out.push_back({TrimBlank(item.substr(0, colon)), TrimBlank(item.substr(colon + 1))});
  }
  return out;
}

}  // namespace fusionkit
