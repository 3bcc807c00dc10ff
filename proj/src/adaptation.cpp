#include "probcrit/adaptation.hpp"

#include "probcrit/calibration.hpp"

#include <algorithm>
#include <cmath>

namespace probcrit {

DirichletCell posterior_update(const DirichletCell& cell,
                               const std::map<std::string, double>& observed) {
  for (const auto& [label, count] : observed) {
    if (cell.index_of(label) < 0) {
      throw Error("observed count for unknown response '" + label + "'");
    }
    if (count < 0.0) {
      throw Error("negative observed count for response '" + label + "'");
    }
  }
  if (cell.degenerate) return cell;
  DirichletCell updated = cell;
  for (const auto& [label, count] : observed) {
    updated.counts(cell.index_of(label)) += count;
  }
  return updated;
}

std::vector<std::string> validate_case_against_cells(const CellSet& cells,
                                                     const CaseRecord& rec) {
  std::vector<std::string> violations;
  bool disease_known = false;
  for (const auto& entry : cells.entries()) {
    if (entry.disease == rec.disease) { disease_known = true; break; }
  }
  if (!disease_known) {
    violations.push_back("case '" + rec.id + "': unknown disease '" + rec.disease + "'");
    return violations;
  }
  for (const auto& [question, response] : rec.answers) {
    const CellEntry* entry = cells.find(rec.disease, question);
    if (entry == nullptr) {
      violations.push_back("case '" + rec.id + "': no cell for question '" + question + "'");
      continue;
    }
    if (entry->cell.index_of(response) < 0) {
      violations.push_back("case '" + rec.id + "': response '" + response +
                           "' is not a response of question '" + question + "'");
    }
  }
  return violations;
}

namespace {

std::vector<std::string> validate_all(const CellSet& cells, const std::vector<CaseRecord>& cases,
                                      std::vector<bool>& valid, bool strict) {
  std::vector<std::string> violations;
  valid.assign(cases.size(), true);
  for (std::size_t i = 0; i < cases.size(); ++i) {
    auto v = validate_case_against_cells(cells, cases[i]);
    if (!v.empty()) {
      valid[i] = false;
      violations.insert(violations.end(), v.begin(), v.end());
    }
  }
  if (strict && !violations.empty()) {
    throw ValidationError("case validation failed for " +
                              std::to_string(std::count(valid.begin(), valid.end(), false)) +
                              " case(s)",
                          violations);
  }
  return violations;
}

// Applies one case; returns the number of degenerate-cell skips.
std::size_t apply_case(CellSet& cells, const CaseRecord& rec) {
  std::size_t skips = 0;
  for (const auto& [question, response] : rec.answers) {
    CellEntry* entry = cells.find(rec.disease, question);
    if (entry->cell.degenerate) {
      ++skips;
      continue;
    }
    entry->cell.counts(entry->cell.index_of(response)) += 1.0;
  }
  return skips;
}

}  // namespace

AdaptReport batch_adapt(CellSet& cells, const std::vector<CaseRecord>& cases, bool strict) {
  AdaptReport report;
  std::vector<bool> valid;
  report.violations = validate_all(cells, cases, valid, strict);
  for (std::size_t i = 0; i < cases.size(); ++i) {
    if (!valid[i]) {
      ++report.cases_skipped;
      continue;
    }
    report.degenerate_update_skips += apply_case(cells, cases[i]);
    ++report.cases_applied;
  }
  return report;
}

PrequentialTrace prequential_replay(CellSet& cells, const std::vector<CaseRecord>& cases,
                                    const std::vector<Rule>& rules,
                                    std::optional<double> log_floor, bool strict) {
  if (rules.empty()) throw Error("prequential replay needs at least one rule");
  PrequentialTrace trace;
  trace.rules = rules;
  trace.cumulative.assign(rules.size(), 0.0);

  std::vector<bool> valid;
  trace.violations = validate_all(cells, cases, valid, strict);

  // Prior means, frozen before any data: the reference point for the
  // reliability monitor.
  std::map<std::pair<std::string, std::string>, ProbabilityVector> prior_means;
  for (const auto& entry : cells.entries()) {
    try {
      prior_means.emplace(std::make_pair(entry.disease, entry.question), entry.cell.mean());
    } catch (const Error& e) {
      throw Error("cell (" + entry.disease + ", " + entry.question + "): " + e.what());
    }
  }

  for (std::size_t i = 0; i < cases.size(); ++i) {
    if (!valid[i]) {
      ++trace.cases_skipped;
      continue;
    }
    const CaseRecord& rec = cases[i];
    const std::size_t seq = ++trace.cases_scored;
    for (const auto& [question, response] : rec.answers) {
      CellEntry* entry = cells.find(rec.disease, question);
      const Eigen::Index observed = entry->cell.index_of(response);
      const ProbabilityVector current = entry->cell.mean();

      TraceEntry te;
      te.case_seq = seq;
      te.case_id = rec.id;
      te.disease = rec.disease;
      te.question = question;
      te.response = response;
      for (std::size_t r = 0; r < rules.size(); ++r) {
        const double s = apply_rule(rules[r], current, observed, log_floor);
        te.scores.push_back(s);
        trace.cumulative[r] += s;
      }
      te.cumulative = trace.cumulative;
      const ProbabilityVector& prior = prior_means.at({rec.disease, question});
      te.r_prior = reliability_stat(prior, OutcomeVector(prior.size(), observed));

      if (entry->cell.degenerate) {
        te.update_skipped = true;
        ++trace.degenerate_update_skips;
      } else {
        entry->cell.counts(observed) += 1.0;
      }
      te.cell_total_after = entry->cell.total();
      trace.entries.push_back(std::move(te));
    }
  }
  return trace;
}

std::vector<FlaggedCell> flag_unreliable(const PrequentialTrace& trace, std::size_t min_cases,
                                         double threshold) {
  if (min_cases < 1) throw Error("minimum case count must be at least 1");
  std::vector<FlaggedCell> flagged;
  std::vector<std::pair<std::string, std::string>> keys;
  std::vector<double> sums;
  std::vector<std::size_t> counts;
  for (const auto& entry : trace.entries) {
    const std::pair<std::string, std::string> key{entry.disease, entry.question};
    std::size_t g = 0;
    for (; g < keys.size(); ++g) {
      if (keys[g] == key) break;
    }
    if (g == keys.size()) {
      keys.push_back(key);
      sums.push_back(0.0);
      counts.push_back(0);
    }
    sums[g] += entry.r_prior;
    counts[g] += 1;
  }
  for (std::size_t g = 0; g < keys.size(); ++g) {
    if (counts[g] < min_cases) continue;
    const double mean = sums[g] / static_cast<double>(counts[g]);
    if (std::abs(mean) > threshold) {
      flagged.push_back(FlaggedCell{keys[g].first, keys[g].second, counts[g], mean, mean > 0.0});
    }
  }
  return flagged;
}

ForecastTable forecasts_from_cells(const CellSet& cells) {
  std::vector<QuestionSchema> questions;
  for (const auto& entry : cells.entries()) {
    bool seen = false;
    for (const auto& q : questions) {
      if (q.id == entry.question) { seen = true; break; }
    }
    if (!seen) questions.push_back(QuestionSchema{entry.question, entry.cell.responses});
  }
  ForecastTable forecasts(cells.diseases(), std::move(questions));
  for (const auto& entry : cells.entries()) {
    forecasts.set(entry.disease, entry.question, entry.cell.mean());
  }
  return forecasts;
}

}  // namespace probcrit
