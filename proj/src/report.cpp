#include "probcrit/report.hpp"

#include "probcrit/csv.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

namespace probcrit {

std::string fixed6(double value) {
  if (std::isnan(value)) return "";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", value);
  return buf;
}

void write_score_report(std::ostream& out, const std::vector<ScoreRecord>& records,
                        GroupKey key, Rule rule) {
  if (!rule_is_proper(rule)) out << "# improper_rule=true\n";
  if (rule == Rule::log) out << "# log_base=e\n";
  csv::write_row(out, {"kind", "case_id", "disease", "question", "response", "rule", "count",
                       "score"});
  for (const auto& rec : records) {
    csv::write_row(out, {"record", rec.case_id, rec.disease, rec.question, rec.response,
                         rule_name(rec.rule), "1", fixed6(rec.score)});
  }
  if (records.empty()) return;
  const std::string name = rule_name(rule);
  if (key != GroupKey::overall) {
    for (const auto& g : aggregate(records, key)) {
      csv::write_row(out, {"group", "", key == GroupKey::disease ? g.group : "",
                           key == GroupKey::question ? g.group : "", "", name,
                           std::to_string(g.count), fixed6(g.mean)});
    }
  }
  for (const auto& g : aggregate(records, GroupKey::overall)) {
    csv::write_row(out,
                   {"overall", "", "", "", "", name, std::to_string(g.count), fixed6(g.mean)});
  }
}

void write_decomposition_report(std::ostream& out,
                                const std::vector<DecompositionRecord>& records) {
  csv::write_row(out, {"group", "count", "discrimination", "reliability"});
  for (const auto& rec : records) {
    csv::write_row(out, {rec.group, std::to_string(rec.count), fixed6(rec.discrimination),
                         fixed6(rec.reliability)});
  }
}

void write_bin_report(std::ostream& out, const ReliabilityBinTable& table) {
  csv::write_row(out, {"bin", "lo", "hi", "n", "occurred", "fraction"});
  for (std::size_t b = 0; b < table.scheme.bin_count(); ++b) {
    csv::write_row(out, {table.scheme.label(b), fixed6(table.scheme.lo(b)),
                         fixed6(table.scheme.hi(b)), std::to_string(table.n[b]),
                         std::to_string(table.occurred[b]), fixed6(table.fraction(b))});
  }
}

void write_trace_report(std::ostream& out, const PrequentialTrace& trace) {
  std::vector<std::string> header{"seq", "case_id", "disease", "question", "response"};
  for (const Rule rule : trace.rules) {
    header.push_back("score_" + rule_name(rule));
    header.push_back("cumulative_" + rule_name(rule));
  }
  header.insert(header.end(), {"r_prior", "cell_total_after", "update_skipped"});
  csv::write_row(out, header);
  for (const auto& entry : trace.entries) {
    std::vector<std::string> row{std::to_string(entry.case_seq), entry.case_id, entry.disease,
                                 entry.question, entry.response};
    for (std::size_t r = 0; r < trace.rules.size(); ++r) {
      row.push_back(fixed6(entry.scores[r]));
      row.push_back(fixed6(entry.cumulative[r]));
    }
    row.push_back(fixed6(entry.r_prior));
    row.push_back(fixed6(entry.cell_total_after));
    row.push_back(entry.update_skipped ? "true" : "false");
    csv::write_row(out, row);
  }
}

}  // namespace probcrit
