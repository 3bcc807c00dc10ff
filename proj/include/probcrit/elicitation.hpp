#ifndef PROBCRIT_ELICITATION_HPP
#define PROBCRIT_ELICITATION_HPP

#include "probcrit/scoring.hpp"
#include "probcrit/types.hpp"

#include <optional>
#include <string>
#include <vector>

// Turns interval assessments into point probability vectors and implicit
// Dirichlet samples. Per-cell computation is pure and independent across
// the disease x question grid.

namespace probcrit {

struct ElicitationPolicy {
  // Every 0-0 interval becomes 0-w and every 100-100 becomes (100-w)-100
  // before anything else is computed. 0 disables; 4 reflects an observed
  // ~2% error rate on events that had been ruled out.
  double zero_widen_pct = 0.0;

  // Stand-in implicit sample size for degenerate cells, whose nominal
  // implicit sample size is infinite.
  double max_n = 1000.0;

  // The interval is read as a one-standard-error binomial interval (about
  // a 2-to-1 chance the true frequency is inside). Fixed in v1; alternative
  // interval readings would slot in here.
  bool one_standard_error = true;
};

// Throws Error when a field is outside its documented range.
void validate_policy(const ElicitationPolicy& policy);

// Interval midpoints on the [0,1] scale, in response order. No
// normalisation here.
Vector midpoints(const std::vector<IntervalAssessment>& cell);

// Divides by the sum so the midpoints form a forecast. Throws Error when
// every midpoint is zero, since no forecast can be formed from such a cell.
ProbabilityVector rescale(const Vector& mids);

// Applies the zero-widening policy; identity when zero_widen_pct == 0.
// Intervals that already have width are untouched.
std::vector<IntervalAssessment> widen_zeros(std::vector<IntervalAssessment> cell,
                                            const ElicitationPolicy& policy);

struct ImplicitSample {
  double n = 0.0;           // rounded to one decimal; what counts are built from
  double n_unrounded = 0.0;
  bool degenerate = false;
};

// Implicit sample size underlying a cell's judgements. Each response with
// an interval of nonzero width and midpoint strictly inside (0,1) proposes
//
//   n_i = m_i (1 - m_i) / h_i^2
//
// from its UNRESCALED midpoint m_i and half-range h_i; the cell's n is the
// smallest proposal, i.e. the most imprecise assessment governs. Zero-width
// intervals and midpoints at exactly 0 or 1 express certainty, not
// imprecision, and propose nothing. When no response proposes anything the
// cell is degenerate: n is the policy cap and the flag is set.
//
// The cell must already be widened when widening is in effect.
ImplicitSample implicit_sample_size(const std::vector<IntervalAssessment>& cell,
                                    const ElicitationPolicy& policy);

// Full per-cell pipeline: widen, size the implicit sample, rescale the
// midpoints, and distribute n over the responses (counts = n * p, so the
// counts sum to n). Propagates the all-zero-midpoints error from rescale.
DirichletCell to_dirichlet(const std::vector<IntervalAssessment>& cell,
                           const std::vector<std::string>& responses,
                           const ElicitationPolicy& policy);

struct CellEntry {
  std::string disease;
  std::string question;
  DirichletCell cell;
  // Pre-rounding implicit sample size, kept so reports can show both.
  // Absent for degenerate cells and cells restored from older state.
  std::optional<double> implicit_n_unrounded;
};

// The full grid of Dirichlet cells plus the policy they were built under.
class CellSet {
public:
  explicit CellSet(ElicitationPolicy policy = {}) : policy_(policy) {}

  void add(CellEntry entry);  // throws Error on a duplicate (disease, question)

  const CellEntry* find(const std::string& disease, const std::string& question) const;
  CellEntry* find(const std::string& disease, const std::string& question);

  const std::vector<CellEntry>& entries() const { return entries_; }
  std::vector<CellEntry>& entries() { return entries_; }
  const ElicitationPolicy& policy() const { return policy_; }

  std::vector<std::string> diseases() const;  // first-appearance order

private:
  ElicitationPolicy policy_;
  std::vector<CellEntry> entries_;
};

// Grid-wise conversion in table order. Errors gain cell coordinates.
CellSet build_cells(const AssessmentTable& table, const ElicitationPolicy& policy);

// Grid-wise point forecasts (widen + midpoints + rescale), for scoring the
// initial judgements.
ForecastTable point_forecasts(const AssessmentTable& table, const ElicitationPolicy& policy);

}  // namespace probcrit

#endif  // PROBCRIT_ELICITATION_HPP
