#ifndef PROBCRIT_INGESTION_HPP
#define PROBCRIT_INGESTION_HPP

#include "probcrit/csv.hpp"
#include "probcrit/elicitation.hpp"
#include "probcrit/types.hpp"

#include <iosfwd>
#include <string>
#include <vector>

// The three external formats. All CSV is strict RFC 4180 (LF or CRLF,
// quotes for embedded commas), UTF-8, header mandatory. Parsers are
// single-pass and single-threaded per stream; distinct files may be parsed
// concurrently.

namespace probcrit {

// Assessment grid, long format: header `disease,question,response,lo_pct,hi_pct`,
// one row per (disease, question, response). Percentages are decimals on
// the 0-100 scale with at most 4 decimal places. Question schemas, and the
// response order every vector in the system aligns to, are inferred from
// first appearance. Duplicate rows are an error, never a merge.
AssessmentTable parse_assessments(std::istream& in, const std::string& filename = "<input>");
void write_assessments(std::ostream& out, const AssessmentTable& table);

// Case records, long format: header `case_id,disease,question,response`,
// one answered question per row; a question with no row for a case is
// missing data. Rows are grouped by case id, cases kept in first-appearance
// order. Labels are NOT checked here; validate against a table or cell set.
std::vector<CaseRecord> parse_cases(std::istream& in, const std::string& filename = "<input>");
void write_cases(std::ostream& out, const std::vector<CaseRecord>& cases);

// Dirichlet state, JSON: versioned, deterministic serialization carrying
// the policy and per cell the disease, question, response-ordered counts at
// full precision, the degenerate flag, and (when known) the pre-rounding
// implicit sample size. read_state(write_state(s)) restores counts exactly.
void write_state(std::ostream& out, const CellSet& cells);
CellSet read_state(std::istream& in, const std::string& filename = "<input>");

}  // namespace probcrit

#endif  // PROBCRIT_INGESTION_HPP
