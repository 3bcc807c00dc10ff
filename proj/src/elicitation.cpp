#include "probcrit/elicitation.hpp"

#include <cmath>
#include <limits>

namespace probcrit {

void validate_policy(const ElicitationPolicy& policy) {
  if (!(policy.zero_widen_pct >= 0.0 && policy.zero_widen_pct <= 50.0)) {
    throw Error("zero-widen percentage must lie in [0,50], got " +
                std::to_string(policy.zero_widen_pct));
  }
  if (!(policy.max_n > 0.0) || !std::isfinite(policy.max_n)) {
    throw Error("max implicit sample size must be positive and finite, got " +
                std::to_string(policy.max_n));
  }
}

Vector midpoints(const std::vector<IntervalAssessment>& cell) {
  Vector m(static_cast<Eigen::Index>(cell.size()));
  for (std::size_t i = 0; i < cell.size(); ++i) {
    m(static_cast<Eigen::Index>(i)) = cell[i].midpoint();
  }
  return m;
}

ProbabilityVector rescale(const Vector& mids) {
  const double sum = mids.sum();
  if (!(sum > 0.0)) throw Error("all midpoints are zero, no forecast can be formed");
  return ProbabilityVector(mids / sum);
}

std::vector<IntervalAssessment> widen_zeros(std::vector<IntervalAssessment> cell,
                                            const ElicitationPolicy& policy) {
  validate_policy(policy);
  const double w = policy.zero_widen_pct;
  for (auto& iv : cell) {
    if (iv.lo == 0.0 && iv.hi == 0.0) {
      iv.hi = w;
    } else if (iv.lo == 100.0 && iv.hi == 100.0) {
      iv.lo = 100.0 - w;
    }
  }
  return cell;
}

ImplicitSample implicit_sample_size(const std::vector<IntervalAssessment>& cell,
                                    const ElicitationPolicy& policy) {
  validate_policy(policy);
  double smallest = std::numeric_limits<double>::infinity();
  for (const auto& iv : cell) {
    const double m = iv.midpoint();
    const double h = iv.half_range();
    if (h <= 0.0 || m <= 0.0 || m >= 1.0) continue;
    smallest = std::min(smallest, m * (1.0 - m) / (h * h));
  }
  if (!std::isfinite(smallest)) {
    return ImplicitSample{policy.max_n, policy.max_n, true};
  }
  return ImplicitSample{std::round(smallest * 10.0) / 10.0, smallest, false};
}

DirichletCell to_dirichlet(const std::vector<IntervalAssessment>& cell,
                           const std::vector<std::string>& responses,
                           const ElicitationPolicy& policy) {
  if (cell.size() != responses.size()) {
    throw Error("cell has " + std::to_string(cell.size()) + " intervals for " +
                std::to_string(responses.size()) + " responses");
  }
  const auto widened = widen_zeros(cell, policy);
  const ImplicitSample sample = implicit_sample_size(widened, policy);
  const ProbabilityVector p = rescale(midpoints(widened));
  return DirichletCell{responses, sample.n * p.values(), sample.degenerate};
}

void CellSet::add(CellEntry entry) {
  if (find(entry.disease, entry.question) != nullptr) {
    throw Error("duplicate cell (" + entry.disease + ", " + entry.question + ")");
  }
  entries_.push_back(std::move(entry));
}

const CellEntry* CellSet::find(const std::string& disease, const std::string& question) const {
  for (const auto& entry : entries_) {
    if (entry.disease == disease && entry.question == question) return &entry;
  }
  return nullptr;
}

CellEntry* CellSet::find(const std::string& disease, const std::string& question) {
  return const_cast<CellEntry*>(static_cast<const CellSet*>(this)->find(disease, question));
}

std::vector<std::string> CellSet::diseases() const {
  std::vector<std::string> out;
  for (const auto& entry : entries_) {
    bool seen = false;
    for (const auto& d : out) {
      if (d == entry.disease) { seen = true; break; }
    }
    if (!seen) out.push_back(entry.disease);
  }
  return out;
}

CellSet build_cells(const AssessmentTable& table, const ElicitationPolicy& policy) {
  validate_policy(policy);
  CellSet cells(policy);
  for (const auto& disease : table.diseases()) {
    for (const auto& schema : table.questions()) {
      const auto* cell = table.find_cell(disease, schema.id);
      if (cell == nullptr) throw Error("missing cell (" + disease + ", " + schema.id + ")");
      try {
        const auto widened = widen_zeros(*cell, policy);
        const ImplicitSample sample = implicit_sample_size(widened, policy);
        CellEntry entry{disease, schema.id, to_dirichlet(*cell, schema.responses, policy),
                        std::nullopt};
        if (!sample.degenerate) entry.implicit_n_unrounded = sample.n_unrounded;
        cells.add(std::move(entry));
      } catch (const Error& e) {
        throw Error("cell (" + disease + ", " + schema.id + "): " + e.what());
      }
    }
  }
  return cells;
}

ForecastTable point_forecasts(const AssessmentTable& table, const ElicitationPolicy& policy) {
  validate_policy(policy);
  ForecastTable forecasts(table.diseases(), table.questions());
  for (const auto& disease : table.diseases()) {
    for (const auto& schema : table.questions()) {
      const auto* cell = table.find_cell(disease, schema.id);
      if (cell == nullptr) throw Error("missing cell (" + disease + ", " + schema.id + ")");
      try {
        forecasts.set(disease, schema.id, rescale(midpoints(widen_zeros(*cell, policy))));
      } catch (const Error& e) {
        throw Error("cell (" + disease + ", " + schema.id + "): " + e.what());
      }
    }
  }
  return forecasts;
}

}  // namespace probcrit
