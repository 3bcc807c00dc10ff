#ifndef PROBCRIT_ADAPTATION_HPP
#define PROBCRIT_ADAPTATION_HPP

#include "probcrit/elicitation.hpp"
#include "probcrit/scoring.hpp"
#include "probcrit/types.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

// Conjugate updating of Dirichlet cells from case data. Distinct cells are
// independent and may be updated concurrently; within one cell updates are
// sequential, and a replay is a single-threaded pass by contract since its
// trace depends on the case order.

namespace probcrit {

// Adds observed counts to the pseudo-counts. Degenerate cells pass through
// unchanged: their pseudo-counts already stand in for an infinite sample, so
// no learning can take place and callers count the skip instead. Throws
// Error on an unknown response label or a negative count.
DirichletCell posterior_update(const DirichletCell& cell,
                               const std::map<std::string, double>& observed);

inline ProbabilityVector posterior_mean(const DirichletCell& cell) { return cell.mean(); }

// Raised by strict-mode validation so the CLI can distinguish bad data from
// bad files.
class ValidationError : public Error {
public:
  explicit ValidationError(const std::string& what, std::vector<std::string> violations)
      : Error(what), violations_(std::move(violations)) {}
  const std::vector<std::string>& violations() const { return violations_; }

private:
  std::vector<std::string> violations_;
};

// Case-level validation against the grid the cells describe.
std::vector<std::string> validate_case_against_cells(const CellSet& cells,
                                                     const CaseRecord& rec);

struct AdaptReport {
  std::size_t cases_applied = 0;
  std::size_t cases_skipped = 0;          // invalid cases in lenient mode
  std::size_t degenerate_update_skips = 0;  // answers that hit a degenerate cell
  std::vector<std::string> violations;
};

// Adds one observation per answered question of each valid case to its
// (true disease, question) cell, one case at a time in input order. In
// lenient mode invalid cases are skipped and reported; in strict mode a
// ValidationError is thrown before anything is applied.
AdaptReport batch_adapt(CellSet& cells, const std::vector<CaseRecord>& cases,
                        bool strict = false);

struct TraceEntry {
  std::size_t case_seq = 0;  // 1-based position of the case in the replay
  std::string case_id;
  std::string disease;
  std::string question;
  std::string response;
  std::vector<double> scores;      // aligned with PrequentialTrace::rules
  std::vector<double> cumulative;  // running totals after this entry
  double r_prior = 0.0;            // reliability stat against the cell's prior mean
  double cell_total_after = 0.0;
  bool update_skipped = false;     // degenerate cell: scored but not updated
};

struct PrequentialTrace {
  std::vector<Rule> rules;
  std::vector<TraceEntry> entries;
  std::vector<double> cumulative;  // final totals per rule
  std::size_t cases_scored = 0;
  std::size_t cases_skipped = 0;
  std::size_t degenerate_update_skips = 0;
  std::vector<std::string> violations;
};

// One pass over the cases in order: each answered question is scored
// against the posterior mean CURRENT at that moment (so entry t reflects
// cases 1..t-1 only), then the case's observations are applied. Cells end
// up exactly as batch_adapt would leave them.
PrequentialTrace prequential_replay(CellSet& cells, const std::vector<CaseRecord>& cases,
                                    const std::vector<Rule>& rules,
                                    std::optional<double> log_floor = {}, bool strict = false);

struct FlaggedCell {
  std::string disease;
  std::string question;
  std::size_t cases = 0;
  double mean_r = 0.0;
  bool over_confident = false;  // false means diffident
};

// Flags cells whose mean reliability statistic against the PRIOR means
// exceeds the threshold in absolute value, evaluated over the whole trace,
// provided at least min_cases cases contributed. A heuristic monitor, not a
// significance test; thresholds are surfaced as CLI flags.
std::vector<FlaggedCell> flag_unreliable(const PrequentialTrace& trace, std::size_t min_cases,
                                         double threshold);

// Posterior means of every cell, for scoring new cases against the adapted
// judgements. Question schemas are reconstructed from the cells' response
// lists in first-appearance order.
ForecastTable forecasts_from_cells(const CellSet& cells);

}  // namespace probcrit

#endif  // PROBCRIT_ADAPTATION_HPP
