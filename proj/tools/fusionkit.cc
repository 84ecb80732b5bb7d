#include <CLI11.hpp>
#include <iostream>
#include <json.hpp>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "fusionkit/closure.h"
#include "fusionkit/definable.h"
#include "fusionkit/encodings.h"
#include "fusionkit/fusion.h"
#include "fusionkit/logic.h"
#include "fusionkit/normal_forms.h"
#include "fusionkit/parse.h"
#include "fusionkit/pseudotopology.h"
#include "fusionkit/rank.h"
#include "fusionkit/report.h"
#include "fusionkit/structure.h"
#include "fusionkit/topology.h"

namespace fusionkit {
namespace {

constexpr int kExitPass = 0;
constexpr int kExitViolation = 1;
constexpr int kExitUsage = 2;

struct Globals {
  bool json = false;
  unsigned seed = 0;
  std::optional<int> max_size;
};

// Plain output of non-check commands, rendered as lines or as JSON.
struct Output {
  explicit Output(std::string c) : command(std::move(c)) {}

  std::string command;
  std::vector<std::string> lines;
  bool ok = true;

  void Add(const std::string& text) {
    std::stringstream in(text);
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
  }
  std::string Render(bool json) const {
    if (!json) {
      std::string out;
      for (const auto& l : lines) out += l + "\n";
      return out;
    }
    nlohmann::ordered_json j;
    j["schema"] = 1;
    j["command"] = command;
    j["verdict"] = ok ? "ok" : "violation";
    j["output"] = lines;
    return j.dump() + "\n";
  }
};

template <typename F>
auto LoadFile(const std::string& path, F load) {
  try {
    return load(path);
  } catch (const Error& e) {
    throw Error(path + ": " + e.what());
  }
}

FiniteStructure LoadStruct(const std::string& path) {
  return LoadFile(path, [](const std::string& p) {
    auto s = LoadStructure(p);
    s.Validate();
    return s;
  });
}

SignatureFile LoadSig(const std::string& path) {
  return LoadFile(path, [](const std::string& p) { return LoadSignatureFile(p); });
}

LanguageFamily LoadFamily(const std::string& path) {
  auto f = LoadSig(path);
  if (f.family.size() == 0) throw Error(path + ": no 'lang' lines");
  f.family.Validate();
  return f.family;
}

std::string FamilyText(const SignatureFile& f) {
  std::string out = PrintSignature(f.signature);
  for (const auto& lang : f.family.languages()) {
    out += "lang " + lang.label + " uses";
    for (const auto& sym : lang.signature.Symbols()) out += " " + sym;
    out += "\n";
  }
  return out;
}

// Signature from --sig, else from --struct.
struct SigSource {
  std::string sig_path;
  std::string struct_path;

  Signature Get() const {
    if (!sig_path.empty()) return LoadSig(sig_path).signature;
    if (!struct_path.empty()) return LoadStruct(struct_path).signature();
    throw Error("need --sig or --struct");
  }
};

struct ClassArgs {
  int qrank = 0;
  std::string params = "none";

  DefinabilityClass Make(const Signature& sig, const Signature& for_params) const {
    DefinabilityClass c;
    c.signature = sig;
    c.max_rank = qrank;
    c.params = ParameterSpec::Parse(params, for_params);
    return c;
  }
};

int Finish(const Report& r, const Globals& g) {
  std::cout << RenderReport(r, g.json ? RenderMode::kJson : RenderMode::kText);
  return r.ok() ? kExitPass : kExitViolation;
}

int Finish(const Output& o, const Globals& g) {
  std::cout << o.Render(g.json);
  return o.ok ? kExitPass : kExitViolation;
}

// ---- parse / fmt / normalize ----

struct FormulaArgs {
  SigSource src;
  std::string formula;
  std::string vars;

  Formula Parse(const Signature& sig) const {
    return ParseFormula(formula, sig, ParseVariableList(vars));
  }
};

int RunParse(const FormulaArgs& a, const Globals& g) {
  Output o{"parse"};
  if (!a.formula.empty()) {
    Formula f = a.Parse(a.src.Get());
    o.Add("formula: " + Print(f));
    o.Add("class: " + ToString(Classify(f)));
    o.Add("flags: " + ToString(ClassifyFlags(f)));
    o.Add("qrank: " + std::to_string(QuantifierRank(f)));
    std::string free;
    for (const auto& v : FreeVariableList(f)) free += (free.empty() ? "" : ", ") + Print(v);
    o.Add("free: " + (free.empty() ? std::string("none") : free));
  } else if (!a.src.struct_path.empty()) {
    auto s = LoadStruct(a.src.struct_path);
    std::string sizes;
    for (const auto& sort : s.signature().sorts()) {
      sizes += (sizes.empty() ? "" : ", ") + sort + "=" + std::to_string(s.Size(sort));
    }
    o.Add("structure " + s.name() + ": " + sizes);
  } else if (!a.src.sig_path.empty()) {
    auto f = LoadSig(a.src.sig_path);
    f.family.Validate();
    o.Add("signature: " + std::to_string(f.signature.sorts().size()) + " sorts, " +
          std::to_string(f.signature.Symbols().size()) + " symbols, " +
          std::to_string(f.family.size()) + " languages");
  } else {
    throw Error("nothing to parse: give --formula, --struct or --sig");
  }
  return Finish(o, g);
}

int RunFmt(const FormulaArgs& a, const Globals& g) {
  Output o{"fmt"};
  if (!a.formula.empty()) {
    o.Add(Print(a.Parse(a.src.Get())));
  } else if (!a.src.struct_path.empty()) {
    o.Add(PrintStructure(LoadStruct(a.src.struct_path)));
  } else if (!a.src.sig_path.empty()) {
    o.Add(FamilyText(LoadSig(a.src.sig_path)));
  } else {
    throw Error("nothing to format: give --formula, --struct or --sig");
  }
  return Finish(o, g);
}

struct NormalizeArgs {
  FormulaArgs f;
  std::string pass;
  std::optional<size_t> max_disjuncts;
  int qrank = 0;
  std::string lang;
};

int RunNormalize(const NormalizeArgs& a, const Globals& g) {
  Output o{"normalize"};
  if (a.pass == "morleyize") {
    if (a.f.src.sig_path.empty()) throw Error("morleyize needs --sig with 'lang' lines");
    auto fam = LoadFamily(a.f.src.sig_path);
    MorleyOptions mo;
    if (g.max_size) mo.max_size = *g.max_size;
    Morleyization m(fam, {}, a.qrank, mo);
    if (!a.f.formula.empty()) {
      if (a.lang.empty()) throw Error("--lang names the language of --formula");
      Formula f =
          ParseFormula(a.f.formula, fam.Get(a.lang).signature, ParseVariableList(a.f.vars));
      o.Add(Print(m.Atomize(a.lang, Canonicalize(f))));
    } else {
      for (const auto& d : m.definitions()) {
        std::string args;
        for (const auto& v : d.args) args += (args.empty() ? "" : ", ") + Print(v);
        o.Add(d.label + " " + d.symbol + "(" + args + ") := " + Print(d.formula));
      }
    }
    return Finish(o, g);
  }
  Signature sig = a.f.src.Get();
  Formula f = a.f.Parse(sig);
  if (a.pass == "eflat") {
    auto ds = QfToEFlatDisjunction(f, sig, a.max_disjuncts);
    if (ds.empty()) o.Add("false");
    for (const auto& d : ds) o.Add(Print(d.ToFormula()));
  } else if (a.pass == "dnf") {
    o.Add(Print(DnfFormula(f, a.max_disjuncts)));
  } else if (a.pass == "flatten") {
    o.Add(Print(FlattenAtoms(f, sig)));
  } else if (a.pass == "relationalize") {
    Relationalization r(Theory{sig, {f}});
    o.Add(PrintSignature(r.theory().signature));
    o.Add(Print(r.Translate(f)));
  } else {
    throw Error("unknown pass " + a.pass);
  }
  return Finish(o, g);
}

// ---- checks ----

struct FamilyCheckArgs {
  std::string structure;
  std::string family;
  ClassArgs cls;
  int max_family = 2;
  int max_arity = 1;
  bool no_dedup = false;
  std::string rank = "threshold:1";

  InterpolativeOptions Options(const FiniteStructure& s, const LanguageFamily& fam) const {
    InterpolativeOptions opt;
    opt.common = cls.Make(Signature{}, s.signature());
    for (size_t i = 0; i < fam.size(); ++i) {
      opt.per_index.push_back(cls.Make(Signature{}, s.signature()));
    }
    opt.max_family = max_family;
    opt.max_arity = max_arity;
    opt.dedup = !no_dedup;
    return opt;
  }
};

int RunInterpolative(const FamilyCheckArgs& a, const Globals& g) {
  auto s = LoadStruct(a.structure);
  auto fam = LoadFamily(a.family);
  return Finish(MakeReport(CheckInterpolative(s, fam, a.Options(s, fam))), g);
}

int RunApprox(const FamilyCheckArgs& a, const Globals& g) {
  auto s = LoadStruct(a.structure);
  auto fam = LoadFamily(a.family);
  auto rank = RankFunction::Parse(a.rank);
  return Finish(MakeReport(CheckApproxInterpolative(s, fam, rank, a.Options(s, fam))), g);
}

struct JcpArgs {
  std::string structure;
  std::string family;
  int max_base = 1;
  int qrank = 0;
  std::string closure = "dcl";
};

ClosureMode ParseClosure(const std::string& text) {
  if (text == "dcl") return ClosureMode::Dcl();
  if (text.rfind("acl:", 0) == 0) return ClosureMode::Acl(std::stoi(text.substr(4)));
  throw Error("closure must be dcl or acl:T");
}

int RunJcp(const JcpArgs& a, const Globals& g) {
  auto s = LoadStruct(a.structure);
  auto fam = LoadFamily(a.family);
  return Finish(MakeReport(s, CheckJcp(s, fam, a.max_base, a.qrank, ParseClosure(a.closure))), g);
}

struct GenericArgs {
  std::string structure;
  std::string pred;
  ClassArgs cls;
  int nmax = 2;
};

int RunGeneric(const GenericArgs& a, const Globals& g) {
  auto s = LoadStruct(a.structure);
  std::set<std::string> rest = s.signature().Symbols();
  if (!rest.erase(a.pred)) throw Error("no predicate " + a.pred + " in the structure");
  auto cls = a.cls.Make(s.signature().Restrict(rest), s.signature());
  return Finish(MakeReport(GenericPredicateCheck(s, a.pred, cls, a.nmax), a.pred), g);
}

struct DimArgs {
  std::string structure;
  std::string basis;
  std::string rank = "threshold:1";
  ClassArgs cls{0, "all"};
  size_t samples = 100;
};

int RunDimCompatible(const DimArgs& a, const Globals& g) {
  auto s = std::make_shared<const FiniteStructure>(LoadStruct(a.structure));
  auto basis = TopologyBasis::Parse(s, a.basis);
  DimCompatOptions opt;
  opt.samples = a.samples;
  opt.seed = g.seed;
  auto rep = CheckDimCompatible(basis, RankFunction::Parse(a.rank),
                                a.cls.Make(s->signature(), s->signature()), opt);
  return Finish(MakeReport(rep), g);
}

// ---- emit-axioms ----

struct EmitArgs {
  std::string schema;
  SigSource src;
  std::string rank;
  ClassArgs cls{0, "all"};
};

// Schema files, one item per line:
//   x VARS | y VARS | common FORMULA | phi FORMULA ; VARS
//   delta FORMULA (for the preceding phi) | gamma FORMULA
AxiomSchemaInstance ParseSchema(const std::string& text, const Signature& sig) {
  AxiomSchemaInstance inst;
  inst.phi_common = Formula::True();
  std::string common_text;
  std::vector<std::pair<std::string, std::string>> phis;
  std::map<size_t, std::string> deltas;
  std::string gamma;
  std::stringstream in(text);
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (auto h = line.find('#'); h != std::string::npos) line = line.substr(0, h);
    std::stringstream ls(line);
    std::string key;
    if (!(ls >> key)) continue;
    std::string rest;
    std::getline(ls, rest);
    if (key == "x") {
      inst.x = ParseVariableList(rest);
    } else if (key == "y") {
      inst.y = ParseVariableList(rest);
    } else if (key == "common") {
      common_text = rest;
    } else if (key == "phi") {
      size_t semi = rest.rfind(';');
      if (semi == std::string::npos) throw ParseError("phi needs '; VARS'", n, 1);
      phis.push_back({rest.substr(0, semi), rest.substr(semi + 1)});
    } else if (key == "delta") {
      if (phis.empty()) throw ParseError("delta before any phi", n, 1);
      deltas[phis.size() - 1] = rest;
    } else if (key == "gamma") {
      gamma = rest;
    } else {
      throw ParseError("unknown schema item '" + key + "'", n, 1);
    }
  }
  if (inst.x.empty()) throw Error("schema needs an x line");
  auto with = [](std::vector<Variable> a, const std::vector<Variable>& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
  };
  if (!common_text.empty()) inst.phi_common = ParseFormula(common_text, sig, with(inst.x, inst.y));
  for (size_t i = 0; i < phis.size(); ++i) {
    auto z = ParseVariableList(phis[i].second);
    inst.zs.push_back(z);
    inst.phis.push_back(ParseFormula(phis[i].first, sig, with(inst.x, z)));
  }
  if (!deltas.empty()) {
    if (deltas.size() != phis.size()) throw Error("give a delta for every phi or for none");
    for (size_t i = 0; i < phis.size(); ++i) {
      inst.deltas.push_back(ParseFormula(deltas[i], sig, with(inst.y, inst.zs[i])));
    }
  }
  if (!gamma.empty()) inst.gamma = ParseFormula(gamma, sig, inst.y);
  return inst;
}

int RunEmit(const EmitArgs& a, const Globals& g) {
  Output o{"emit-axioms"};
  Signature sig = a.src.Get();
  auto inst =
      LoadFile(a.schema, [&](const std::string& p) { return ParseSchema(ReadFile(p), sig); });
  if (!inst.deltas.empty()) {
    o.Add(Print(EmitPtAxiom(inst)));
    return Finish(o, g);
  }
  if (a.src.struct_path.empty() || a.rank.empty()) {
    throw Error("tabulated deltas need --struct and --rank");
  }
  auto s = std::make_shared<const FiniteStructure>(LoadStruct(a.src.struct_path));
  RankedAlgebra ra(s, a.cls.Make(s->signature(), s->signature()), inst.x,
                   RankFunction::Parse(a.rank));
  Assignment params = TabulateDeltas(s, inst, ra);
  Formula axiom = EmitPtAxiom(inst);
  o.Add(Print(axiom));
  if (!params.empty()) o.Add("# parameters: " + PrintAssignment(*s, params));
  bool holds = Evaluate(*s, axiom, params);
  o.Add(std::string("# holds: ") + (holds ? "true" : "false"));
  return Finish(o, g);
}

// ---- encode / decode ----

struct CodecArgs {
  std::string kind;
  std::string in;
  std::string out;
  std::string map = "sigma";
  std::string fun = "f";
  std::string phi = "true";
  std::string x;
  std::string y;
};

FiniteStructure WithoutSymbol(const FiniteStructure& m, const std::string& sym) {
  std::set<std::string> keep = m.signature().Symbols();
  keep.erase(sym);
  return Reduct(m, m.signature().Restrict(keep));
}

// m expanded by a function `name` with the given argument sorts and values
// indexed by tuple code.
FiniteStructure WithFunction(const FiniteStructure& m, const std::string& name,
                             const std::vector<std::string>& args, const std::string& result,
                             const std::vector<int>& values) {
  Signature sig;
  for (const auto& sort : m.signature().sorts()) sig.AddSort(sort);
  sig.AddFunction(name, args, result);
  FiniteStructure extra(m.name(), sig);
  for (const auto& sort : sig.sorts()) extra.SetUniverse(sort, m.Universe(sort));
  TupleSpace space(m, args);
  for (size_t c = 0; c < space.Count(); ++c) extra.SetValue(name, space.Decode(c), values[c]);
  return Expand(m, extra);
}

int RunEncode(const CodecArgs& a, const Globals& g) {
  Output o{"encode"};
  auto m = LoadStruct(a.in);
  FiniteStructure target;
  if (a.kind == "random-graph") {
    target = RgEncode(m).target;
  } else if (a.kind == "automorphism") {
    const auto* type = m.signature().Function(a.map);
    if (!type || type->args.size() != 1 || type->args[0] != type->result) {
      throw Error("automorphism input needs a unary function " + a.map + " : S -> S");
    }
    auto base = WithoutSymbol(m, a.map);
    ElementMap sigma(base.signature().sorts().size());
    for (int i = 0; i < m.Size(type->result); ++i) {
      sigma[m.SortIndex(type->result)].push_back(m.Apply(a.map, {i}));
    }
    target = AutEncode(base, sigma);
  } else if (a.kind == "skolem") {
    const auto* type = m.signature().Function(a.fun);
    if (!type) throw Error("skolem input needs the function " + a.fun);
    auto base = WithoutSymbol(m, a.fun);
    auto x = ParseVariableList(a.x);
    auto y = ParseVariableList(a.y);
    if (x.empty()) x = DefaultVariables(type->args);
    if (y.empty()) y = {{"y", type->result}};
    if (y.size() != 1 || SortsOf(x) != type->args || y[0].sort != type->result) {
      throw Error("--x/--y do not match the sorts of " + a.fun);
    }
    std::vector<Variable> xy = x;
    xy.push_back(y[0]);
    Formula phi = ParseFormula(a.phi, base.signature(), xy);
    TupleSpace space(base, type->args);
    std::vector<int> f;
    for (size_t c = 0; c < space.Count(); ++c) f.push_back(m.Apply(a.fun, space.Decode(c)));
    target = SkolemEncode(base, phi, x, y[0], f);
  } else {
    throw Error("unknown encoding " + a.kind);
  }
  WriteFile(a.out, PrintStructure(target));
  o.Add("wrote " + a.out);
  return Finish(o, g);
}

int RunDecode(const CodecArgs& a, const Globals& g) {
  Output o{"decode"};
  auto p = LoadStruct(a.in);
  FiniteStructure source;
  if (a.kind == "random-graph") {
    source = RgDecode(p);
  } else if (a.kind == "automorphism") {
    auto d = AutDecode(p);
    const auto& sort = d.m.signature().sorts().at(0);
    source = WithFunction(d.m, a.map, {sort}, sort, d.sigma[0]);
  } else if (a.kind == "skolem") {
    const auto* type = p.signature().Function("g");
    if (!type) throw Error("skolem target needs the section g");
    auto d = SkolemDecode(p);
    const auto* py = p.signature().Function("py");
    if (!py) throw Error("skolem target needs the projection py");
    source = WithFunction(d.m, a.fun, type->args, py->result, d.f);
  } else {
    throw Error("unknown encoding " + a.kind);
  }
  WriteFile(a.out, PrintStructure(source));
  o.Add("wrote " + a.out);
  return Finish(o, g);
}

// ---- interpolate ----

struct InterpolateArgs {
  std::string sig;
  std::vector<std::string> formulas;
};

int RunInterpolate(const InterpolateArgs& a, const Globals& g) {
  Output o{"interpolate"};
  auto fam = LoadFamily(a.sig);
  if (a.formulas.size() != fam.size()) {
    throw Error("give one --formula per language (" + std::to_string(fam.size()) + ")");
  }
  std::vector<Formula> phis;
  for (size_t i = 0; i < fam.size(); ++i) {
    phis.push_back(ParseFormula(a.formulas[i], fam.at(i).signature));
  }
  PairwiseOptions po;
  if (g.max_size) po.models.max_size = *g.max_size;
  try {
    auto out = NaryInterpolants(phis, fam, BruteforceOracle(po));
    for (size_t i = 0; i < out.formulas.size(); ++i) {
      o.Add(fam.at(i).label + ": " + Print(out.formulas[i]));
    }
    auto check = VerifyInterpolants(phis, out, fam, po.models);
    o.ok = check.entailed && check.inconsistent;
    if (!o.ok) o.Add("NOT VERIFIED " + check.detail);
  } catch (const ConsistentPairError& e) {
    o.ok = false;
    o.Add(std::string("CONSISTENT ") + e.what());
    o.Add(PrintStructure(e.model()));
  } catch (const OracleFailure& e) {
    o.ok = false;
    o.Add(std::string("NO_INTERPOLANT ") + e.what());
  }
  return Finish(o, g);
}

int Main(int argc, char** argv) {
  CLI::App app{"Workbench for fusions of finite structures"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_flag("--json", g.json, "Render reports as JSON");
  app.add_option("--seed", g.seed, "Seed for sampled checks");
  app.add_option("--max-size", g.max_size, "Enumeration cap");

  std::function<int()> run;
  auto formula_opts = [](CLI::App* sub, FormulaArgs& f) {
    sub->add_option("--sig", f.src.sig_path, "Signature file");
    sub->add_option("--struct", f.src.struct_path, "Structure file");
    sub->add_option("--formula", f.formula, "Formula text");
    sub->add_option("--vars", f.vars, "Free variable sorts, x:S,y:T");
  };

  FormulaArgs parse_args, fmt_args;
  auto* parse = app.add_subcommand("parse", "Parse and classify input");
  formula_opts(parse, parse_args);
  parse->callback([&] { run = [&] { return RunParse(parse_args, g); }; });
  auto* fmt = app.add_subcommand("fmt", "Print input in canonical syntax");
  formula_opts(fmt, fmt_args);
  fmt->callback([&] { run = [&] { return RunFmt(fmt_args, g); }; });

  NormalizeArgs norm;
  auto* normalize = app.add_subcommand("normalize", "Normal-form passes");
  formula_opts(normalize, norm.f);
  normalize->add_option("--pass", norm.pass, "eflat|dnf|flatten|relationalize|morleyize")
      ->required()
      ->check(CLI::IsMember({"eflat", "dnf", "flatten", "relationalize", "morleyize"}));
  normalize->add_option("--max-disjuncts", norm.max_disjuncts, "DNF cap");
  normalize->add_option("--qrank", norm.qrank, "Morleyization rank");
  normalize->add_option("--lang", norm.lang, "Language of --formula for morleyize");
  normalize->callback([&] { run = [&] { return RunNormalize(norm, g); }; });

  auto* check = app.add_subcommand("check", "Semantic checks");
  check->require_subcommand(1);
  auto class_opts = [](CLI::App* sub, ClassArgs& c) {
    sub->add_option("--qrank", c.qrank, "Quantifier rank of the class")->capture_default_str();
    sub->add_option("--params", c.params, "none | all | a,b")->capture_default_str();
  };
  auto family_opts = [&](CLI::App* sub, FamilyCheckArgs& f) {
    sub->add_option("--struct", f.structure, "Structure file")->required();
    sub->add_option("--family", f.family, "Signature file with lang lines")->required();
    class_opts(sub, f.cls);
    sub->add_option("--max-family", f.max_family, "Largest family size")->capture_default_str();
    sub->add_option("--max-arity", f.max_arity, "Largest arity")->capture_default_str();
    sub->add_flag("--no-dedup", f.no_dedup, "Report every family");
  };
  FamilyCheckArgs interp_args, approx_args;
  auto* interp = check->add_subcommand("interpolative", "Separation of disjoint families");
  family_opts(interp, interp_args);
  interp->callback([&] { run = [&] { return RunInterpolative(interp_args, g); }; });
  auto* approx = check->add_subcommand("approx", "Approximate interpolativity");
  family_opts(approx, approx_args);
  approx->add_option("--rank", approx_args.rank, "threshold:T | growth | table:FILE")
      ->capture_default_str();
  approx->callback([&] { run = [&] { return RunApprox(approx_args, g); }; });

  JcpArgs jcp_args;
  auto* jcp = check->add_subcommand("jcp", "Joint consistency of types");
  jcp->add_option("--struct", jcp_args.structure, "Structure file")->required();
  jcp->add_option("--family", jcp_args.family, "Signature file with lang lines")->required();
  jcp->add_option("--max-base", jcp_args.max_base, "Largest base")->capture_default_str();
  jcp->add_option("--qrank", jcp_args.qrank, "Type rank")->capture_default_str();
  jcp->add_option("--closure", jcp_args.closure, "dcl | acl:T")->capture_default_str();
  jcp->callback([&] { run = [&] { return RunJcp(jcp_args, g); }; });

  GenericArgs gen_args;
  auto* gen = check->add_subcommand("generic-predicate", "Generic predicate check");
  gen->add_option("--struct", gen_args.structure, "Structure file")->required();
  gen->add_option("--pred", gen_args.pred, "Unary predicate")->required();
  class_opts(gen, gen_args.cls);
  gen->add_option("--nmax", gen_args.nmax, "Largest power")->capture_default_str();
  gen->callback([&] { run = [&] { return RunGeneric(gen_args, g); }; });

  DimArgs dim_args;
  auto* dim = check->add_subcommand("dim-compatible", "Topology and rank compatibility");
  dim->add_option("--struct", dim_args.structure, "Structure file")->required();
  dim->add_option("--basis", dim_args.basis, "'x:S ; y:S ; FORMULA'")->required();
  dim->add_option("--rank", dim_args.rank, "threshold:T | growth | table:FILE")
      ->capture_default_str();
  class_opts(dim, dim_args.cls);
  dim->add_option("--samples", dim_args.samples, "Sampled sets per class set")
      ->capture_default_str();
  dim->callback([&] { run = [&] { return RunDimCompatible(dim_args, g); }; });

  EmitArgs emit_args;
  auto* emit = app.add_subcommand("emit-axioms", "Emit an axiom schema instance");
  emit->add_option("--schema", emit_args.schema, "Schema file")->required();
  emit->add_option("--sig", emit_args.src.sig_path, "Signature file");
  emit->add_option("--struct", emit_args.src.struct_path, "Structure for tabulated deltas");
  emit->add_option("--rank", emit_args.rank, "threshold:T | growth | table:FILE");
  class_opts(emit, emit_args.cls);
  emit->callback([&] { run = [&] { return RunEmit(emit_args, g); }; });

  CodecArgs enc_args, dec_args;
  auto codec_opts = [](CLI::App* sub, CodecArgs& c) {
    sub->add_option("kind", c.kind, "random-graph | automorphism | skolem")
        ->required()
        ->check(CLI::IsMember({"random-graph", "automorphism", "skolem"}));
    sub->add_option("in", c.in, "Input structure")->required();
    sub->add_option("out", c.out, "Output structure")->required();
    sub->add_option("--map", c.map, "Automorphism function name")->capture_default_str();
    sub->add_option("--fun", c.fun, "Skolem function name")->capture_default_str();
  };
  auto* enc = app.add_subcommand("encode", "Encode a structure");
  codec_opts(enc, enc_args);
  enc->add_option("--phi", enc_args.phi, "Skolem formula phi(x, y)")->capture_default_str();
  enc->add_option("--x", enc_args.x, "Skolem argument variables");
  enc->add_option("--y", enc_args.y, "Skolem value variable");
  enc->callback([&] { run = [&] { return RunEncode(enc_args, g); }; });
  auto* dec = app.add_subcommand("decode", "Decode an encoded structure");
  codec_opts(dec, dec_args);
  dec->callback([&] { run = [&] { return RunDecode(dec_args, g); }; });

  InterpolateArgs int_args;
  auto* interpolate = app.add_subcommand("interpolate", "Interpolants for inconsistent sentences");
  interpolate->add_option("--sig", int_args.sig, "Signature file with lang lines")->required();
  interpolate->add_option("--formula", int_args.formulas, "One sentence per language")
      ->required();
  interpolate->callback([&] { run = [&] { return RunInterpolate(int_args, g); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }
  try {
    return run();
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}

}  // namespace
}  // namespace fusionkit

int main(int argc, char** argv) { return fusionkit::Main(argc, argv); }
