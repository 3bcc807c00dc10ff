#ifndef PROBCRIT_SCORING_HPP
#define PROBCRIT_SCORING_HPP

#include "probcrit/types.hpp"

#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

// Scoring rules applied per question per case, with aggregation. All
// functions here are pure; scoring across cases is embarrassingly parallel.
//
// The free functions accept any Eigen vector expression so callers can pass
// raw vectors, expressions, or the strong types' .values().

namespace probcrit {

enum class Rule { brier, log, absdev };

// The absolute-deviation rule is the deliberately improper one; reports
// must tag its records.
constexpr bool rule_is_proper(Rule rule) { return rule != Rule::absdev; }

std::string rule_name(Rule rule);
std::optional<Rule> rule_from_name(const std::string& name);

namespace detail {

template <typename DerivedP, typename DerivedE>
void check_same_length(const Eigen::MatrixBase<DerivedP>& p,
                       const Eigen::MatrixBase<DerivedE>& e) {
  if (p.size() != e.size()) {
    throw Error("forecast and outcome lengths differ: " + std::to_string(p.size()) + " vs " +
                std::to_string(e.size()));
  }
}

}  // namespace detail

// Half the squared distance between forecast and indicator; range [0,1].
template <typename DerivedP, typename DerivedE>
double brier(const Eigen::MatrixBase<DerivedP>& p, const Eigen::MatrixBase<DerivedE>& e) {
  detail::check_same_length(p, e);
  return 0.5 * (e.derived() - p.derived()).squaredNorm();
}

inline double brier(const ProbabilityVector& p, const OutcomeVector& e) {
  return brier(p.values(), e.values());
}

// -ln of the probability given to what happened. A zero probability yields
// +infinity unless a floor is supplied, so aggregation can surface where
// zero-probability events occurred instead of dying on them.
inline double log_score_at(double p_observed, std::optional<double> floor = {}) {
  if (floor) {
    if (*floor < 0.0) throw Error("log score floor must be nonnegative");
    p_observed = std::max(p_observed, *floor);
  }
  if (p_observed <= 0.0) return std::numeric_limits<double>::infinity();
  return -std::log(p_observed);
}

template <typename DerivedP, typename DerivedE>
double log_score(const Eigen::MatrixBase<DerivedP>& p, const Eigen::MatrixBase<DerivedE>& e,
                 std::optional<double> floor = {}) {
  detail::check_same_length(p, e);
  return log_score_at(p.derived().dot(e.derived()), floor);
}

inline double log_score(const ProbabilityVector& p, const OutcomeVector& e,
                        std::optional<double> floor = {}) {
  detail::check_same_length(p.values(), e.values());
  return log_score_at(p[e.observed()], floor);
}

// Improper: a binary forecaster minimises its expectation by quoting 0 or 1.
template <typename DerivedP, typename DerivedE>
double abs_dev_score(const Eigen::MatrixBase<DerivedP>& p, const Eigen::MatrixBase<DerivedE>& e) {
  detail::check_same_length(p, e);
  return (e.derived() - p.derived()).array().abs().sum();
}

inline double abs_dev_score(const ProbabilityVector& p, const OutcomeVector& e) {
  return abs_dev_score(p.values(), e.values());
}

double apply_rule(Rule rule, const ProbabilityVector& p, Eigen::Index observed,
                  std::optional<double> log_floor = {});

struct ScoreRecord {
  std::string case_id;
  std::string disease;
  std::string question;
  std::string response;  // the observed response
  Rule rule = Rule::brier;
  double score = 0.0;
};

// One (forecast, outcome) pair: everything calibration needs that a scalar
// score has already thrown away.
struct ScoredPair {
  std::string case_id;
  std::string disease;
  std::string question;
  ProbabilityVector p;
  Eigen::Index observed;
};

// Point forecasts per (disease, question), aligned with each question's
// response order.
class ForecastTable {
public:
  ForecastTable(std::vector<std::string> diseases, std::vector<QuestionSchema> questions);

  void set(const std::string& disease, const std::string& question, ProbabilityVector p);

  const ProbabilityVector* find(const std::string& disease, const std::string& question) const;
  const QuestionSchema* schema(const std::string& question) const;

  const std::vector<std::string>& diseases() const { return diseases_; }
  const std::vector<QuestionSchema>& questions() const { return questions_; }

private:
  std::vector<std::string> diseases_;
  std::vector<QuestionSchema> questions_;
  std::map<std::pair<std::string, std::string>, ProbabilityVector> forecasts_;
};

// The (forecast, outcome) pairs for one case's answered questions, in the
// table's question order. Unanswered questions contribute nothing. Throws
// Error on an unknown disease, question, or response label.
std::vector<ScoredPair> collect_pairs(const ForecastTable& forecasts, const CaseRecord& rec);

std::vector<ScoredPair> collect_pairs(const ForecastTable& forecasts,
                                      const std::vector<CaseRecord>& cases);

// One ScoreRecord per answered question under the given rule.
std::vector<ScoreRecord> score_case(const ForecastTable& forecasts, const CaseRecord& rec,
                                    Rule rule, std::optional<double> log_floor = {});

enum class GroupKey { disease, question, overall };

std::string group_key_name(GroupKey key);
std::optional<GroupKey> group_key_from_name(const std::string& name);

struct GroupMean {
  std::string group;
  std::size_t count = 0;
  double mean = 0.0;
};

// Arithmetic mean per group, groups in first-appearance order. All records
// must share one rule; mixing rules is an error.
std::vector<GroupMean> aggregate(const std::vector<ScoreRecord>& records, GroupKey key);

}  // namespace probcrit

#endif  // PROBCRIT_SCORING_HPP
