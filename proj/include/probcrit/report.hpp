#ifndef PROBCRIT_REPORT_HPP
#define PROBCRIT_REPORT_HPP

#include "probcrit/adaptation.hpp"
#include "probcrit/calibration.hpp"
#include "probcrit/scoring.hpp"

#include <iosfwd>
#include <string>
#include <vector>

// Deterministic CSV report writers shared by the CLI and tests. All
// numbers are rendered at 6 decimal places; identical inputs give
// byte-identical files.

namespace probcrit {

// "%.6f"; infinities render as inf/-inf, NaN as the empty string (an empty
// bin has no observed fraction).
std::string fixed6(double value);

// Per-record rows, then mean rows for the requested grouping, then an
// overall row. The improper rule is annotated in a leading comment line.
void write_score_report(std::ostream& out, const std::vector<ScoreRecord>& records,
                        GroupKey key, Rule rule);

void write_decomposition_report(std::ostream& out,
                                const std::vector<DecompositionRecord>& records);

void write_bin_report(std::ostream& out, const ReliabilityBinTable& table);

void write_trace_report(std::ostream& out, const PrequentialTrace& trace);

}  // namespace probcrit

#endif  // PROBCRIT_REPORT_HPP
