#ifndef FUSIONKIT_REPORT_H_
#define FUSIONKIT_REPORT_H_

#include <string>
#include <utility>
#include <vector>

#include "fusionkit/encodings.h"
#include "fusionkit/fusion.h"
#include "fusionkit/pseudotopology.h"
#include "fusionkit/rank.h"
#include "fusionkit/structure.h"
#include "fusionkit/topology.h"

namespace fusionkit {

struct ReportField {
  std::string key;
  std::vector<std::string> values;
  bool list = false;
};

// One line of a report: KIND key=value ...
struct ReportRecord {
  std::string kind;
  std::vector<ReportField> fields;

  ReportRecord& Add(std::string key, std::string value);
  ReportRecord& AddList(std::string key, std::vector<std::string> values);
};

struct Report {
  std::string command;
  std::vector<ReportRecord> records;
  std::vector<std::pair<std::string, std::string>> stats;
  std::vector<std::string> notes;
  // Set when the verdict is negative without any record, e.g. an undefined
  // check.
  bool failed = false;

  bool ok() const { return records.empty() && !failed; }
};

enum class RenderMode { kText, kJson };

// Text: one line per record, "OK" when there are none, then NOTE and STATS
// lines. JSON carries "schema": 1 and "verdict": "ok" | "violation".
std::string RenderReport(const Report& r, RenderMode mode);

std::string PrintTupleSet(const FiniteStructure& s, const std::vector<std::string>& sorts,
                          const TupleSet& t);

Report MakeReport(const InterpolativityReport& r);
Report MakeReport(const ApproxReport& r);
Report MakeReport(const FiniteStructure& s, const JcpReport& r);
Report MakeReport(const GenericPredicateReport& r, const std::string& pred);
Report MakeReport(const DimCompatReport& r);
Report MakeReport(const RankReport& r);
Report MakeReport(const ApproximabilityReport& r);

}  // namespace fusionkit

#endif  // FUSIONKIT_REPORT_H_
