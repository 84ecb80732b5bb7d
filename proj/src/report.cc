#include "fusionkit/report.h"

#include <json.hpp>

#include "fusionkit/parse.h"

namespace fusionkit {
namespace {

std::string Join(const std::vector<std::string>& items) {
  std::string out;
  for (size_t i = 0; i < items.size(); ++i) out += (i ? ", " : "") + items[i];
  return out;
}

std::vector<std::string> Formulas(const std::vector<DefinableSet>& sets) {
  std::vector<std::string> out;
  for (const auto& s : sets) out.push_back(Print(s.formula));
  return out;
}

std::string Params(const std::vector<DefinableSet>& sets) {
  Assignment all;
  StructurePtr host;
  for (const auto& s : sets) {
    all.insert(s.params.begin(), s.params.end());
    if (!host) host = s.host;
  }
  if (all.empty() || !host) return "{}";
  return "{" + PrintAssignment(*host, all) + "}";
}

std::string Indices(const std::vector<int>& idx) {
  std::vector<std::string> out;
  for (int i : idx) out.push_back(std::to_string(i));
  return Join(out);
}

std::string Extension(const DefinableSet& s) {
  return PrintTupleSet(*s.host, s.sorts(), s.extension);
}

const char* IssueKind(DimCompatIssue::Kind k) {
  switch (k) {
    case DimCompatIssue::Kind::kFrontier:
      return "frontier";
    case DimCompatIssue::Kind::kResidue:
      return "residue";
    case DimCompatIssue::Kind::kUndefinable:
      return "undefinable";
    case DimCompatIssue::Kind::kEquivalence:
      return "equivalence";
    case DimCompatIssue::Kind::kDenseNotPseudoDense:
      return "dense-not-pseudo-dense";
  }
  return "unknown";
}

}  // namespace

ReportRecord& ReportRecord::Add(std::string key, std::string value) {
  fields.push_back({std::move(key), {std::move(value)}, false});
  return *this;
}

ReportRecord& ReportRecord::AddList(std::string key, std::vector<std::string> values) {
  fields.push_back({std::move(key), std::move(values), true});
  return *this;
}

std::string PrintTupleSet(const FiniteStructure& s, const std::vector<std::string>& sorts,
                          const TupleSet& t) {
  TupleSpace space(s, sorts);
  std::vector<std::string> items;
  for (size_t c : t.Elements()) items.push_back(PrintTuple(s, sorts, space.Decode(c)));
  return "{" + Join(items) + "}";
}

std::string RenderReport(const Report& r, RenderMode mode) {
  if (mode == RenderMode::kJson) {
    nlohmann::ordered_json j;
    j["schema"] = 1;
    if (!r.command.empty()) j["command"] = r.command;
    j["verdict"] = r.ok() ? "ok" : "violation";
    if (!r.records.empty()) {
      auto& recs = j["records"] = nlohmann::ordered_json::array();
      for (const auto& rec : r.records) {
        nlohmann::ordered_json o;
        o["kind"] = rec.kind;
        for (const auto& f : rec.fields) {
          if (f.list) {
            o[f.key] = f.values;
          } else {
            o[f.key] = f.values.empty() ? "" : f.values[0];
          }
        }
        recs.push_back(o);
      }
    }
    if (!r.stats.empty()) {
      auto& st = j["stats"] = nlohmann::ordered_json::object();
      for (const auto& [k, v] : r.stats) st[k] = v;
    }
    if (!r.notes.empty()) j["notes"] = r.notes;
    return j.dump() + "\n";
  }
  std::string out;
  for (const auto& rec : r.records) {
    out += rec.kind;
    for (const auto& f : rec.fields) {
      out += " " + f.key + "=";
      out += f.list ? "[" + Join(f.values) + "]" : (f.values.empty() ? "" : f.values[0]);
    }
    out += "\n";
  }
  if (r.records.empty()) out += r.failed ? "FAIL\n" : "OK\n";
  for (const auto& n : r.notes) out += "NOTE " + n + "\n";
  if (!r.stats.empty()) {
    out += "STATS";
    for (const auto& [k, v] : r.stats) out += " " + k + "=" + v;
    out += "\n";
  }
  return out;
}

Report MakeReport(const InterpolativityReport& r) {
  Report out;
  out.command = "check interpolative";
  for (const auto& v : r.violations) {
    ReportRecord rec{"VIOLATION", {}};
    rec.AddList("family", Formulas(v.sets))
        .Add("indices", "[" + Indices(v.indices) + "]")
        .Add("params", Params(v.sets))
        .Add("intersection", "EMPTY")
        .Add("separation", "NONE");
    if (!v.sets.empty() && !v.common_point.empty()) {
      rec.Add("hull_point", PrintTuple(*v.sets[0].host, v.sets[0].sorts(), v.common_point));
    }
    out.records.push_back(rec);
  }
  out.stats.push_back({"families_checked", std::to_string(r.families_checked)});
  return out;
}

Report MakeReport(const ApproxReport& r) {
  Report out;
  out.command = "check approx";
  for (const auto& v : r.violations) {
    ReportRecord rec{"VIOLATION", {}};
    rec.AddList("family", Formulas(v.sets))
        .Add("indices", "[" + Indices(v.indices) + "]")
        .Add("params", Params(v.sets))
        .Add("intersection", "EMPTY")
        .Add("common", v.common.ToString())
        .Add("pseudo_dense", "ALL");
    out.records.push_back(rec);
  }
  out.stats.push_back({"families_checked", std::to_string(r.families_checked)});
  return out;
}

Report MakeReport(const FiniteStructure& s, const JcpReport& r) {
  Report out;
  out.command = "check jcp";
  for (const auto& f : r.failures) {
    std::vector<std::string> realizers;
    for (int e : f.realizers) realizers.push_back(s.Universe(f.sort)[e]);
    ReportRecord rec{"JCP_FAILURE", {}};
    rec.Add("base", PrintElementSet(s, f.base)).Add("sort", f.sort).AddList("realizers", realizers);
    out.records.push_back(rec);
  }
  out.stats.push_back({"bases_checked", std::to_string(r.bases_checked)});
  return out;
}

Report MakeReport(const GenericPredicateReport& r, const std::string& pred) {
  Report out;
  out.command = "check generic-predicate";
  for (const auto& f : r.failures) {
    std::vector<std::string> pattern;
    for (bool in : f.pattern) pattern.push_back(in ? pred : "~" + pred);
    ReportRecord rec{"NOT_GENERIC", {}};
    rec.Add("n", std::to_string(f.n)).Add("set", f.x.ToString()).AddList("missing", pattern);
    out.records.push_back(rec);
  }
  if (r.approximate) out.notes.push_back("largeness by fresh extension is approximate here");
  out.stats.push_back({"sets_checked", std::to_string(r.sets_checked)});
  out.stats.push_back({"large_sets", std::to_string(r.large_sets)});
  return out;
}

Report MakeReport(const DimCompatReport& r) {
  Report out;
  out.command = "check dim-compatible";
  for (const auto& i : r.issues) {
    ReportRecord rec{"DIM_COMPAT", {}};
    rec.Add("kind", IssueKind(i.kind)).Add("set", i.x.ToString()).Add("extension", Extension(i.x));
    if (i.a) rec.Add("a", PrintTupleSet(*i.x.host, i.x.sorts(), *i.a));
    rec.Add("detail", i.detail);
    out.records.push_back(rec);
  }
  out.failed = !r.compatible();
  out.stats.push_back({"frontier_inequality", r.frontier_inequality ? "true" : "false"});
  out.stats.push_back({"residue_inequality", r.residue_inequality ? "true" : "false"});
  out.stats.push_back({"defined", r.defined ? "true" : "false"});
  out.stats.push_back({"sets_checked", std::to_string(r.sets_checked)});
  out.stats.push_back({"samples_checked", std::to_string(r.samples_checked)});
  return out;
}

Report MakeReport(const RankReport& r) {
  Report out;
  out.command = "validate-rank";
  for (const auto& v : r.violations) {
    ReportRecord rec{"RANK_VIOLATION", {}};
    rec.Add("axiom", std::to_string(v.axiom)).AddList("sets", Formulas(v.sets)).Add("detail",
                                                                                   v.detail);
    out.records.push_back(rec);
  }
  out.stats.push_back({"sets_checked", std::to_string(r.sets_checked)});
  return out;
}

Report MakeReport(const ApproximabilityReport& r) {
  Report out;
  out.command = "check approximable";
  for (const auto& f : r.failures) {
    ReportRecord rec{"NOT_APPROXIMABLE", {}};
    rec.Add("set", f.set.ToString()).Add("extension", Extension(f.set));
    out.records.push_back(rec);
  }
  out.stats.push_back({"sets_checked", std::to_string(r.sets_checked)});
  return out;
}

}  // namespace fusionkit
