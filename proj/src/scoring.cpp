#include "probcrit/scoring.hpp"

#include <cmath>

namespace probcrit {

std::string rule_name(Rule rule) {
  switch (rule) {
    case Rule::brier: return "brier";
    case Rule::log: return "log";
    case Rule::absdev: return "absdev";
  }
  return "?";
}

std::optional<Rule> rule_from_name(const std::string& name) {
  if (name == "brier") return Rule::brier;
  if (name == "log") return Rule::log;
  if (name == "absdev") return Rule::absdev;
  return std::nullopt;
}

double apply_rule(Rule rule, const ProbabilityVector& p, Eigen::Index observed,
                  std::optional<double> log_floor) {
  const OutcomeVector e(p.size(), observed);
  switch (rule) {
    case Rule::brier: return brier(p, e);
    case Rule::log: return log_score(p, e, log_floor);
    case Rule::absdev: return abs_dev_score(p, e);
  }
  throw Error("unknown rule");
}

ForecastTable::ForecastTable(std::vector<std::string> diseases,
                             std::vector<QuestionSchema> questions)
    : diseases_(std::move(diseases)), questions_(std::move(questions)) {}

void ForecastTable::set(const std::string& disease, const std::string& question,
                        ProbabilityVector p) {
  const QuestionSchema* schema = this->schema(question);
  if (schema == nullptr) throw Error("forecast for unknown question '" + question + "'");
  if (p.size() != schema->size()) {
    throw Error("forecast length " + std::to_string(p.size()) + " does not match question '" +
                question + "' with " + std::to_string(schema->size()) + " responses");
  }
  forecasts_.insert_or_assign({disease, question}, std::move(p));
}

const ProbabilityVector* ForecastTable::find(const std::string& disease,
                                             const std::string& question) const {
  auto it = forecasts_.find({disease, question});
  return it == forecasts_.end() ? nullptr : &it->second;
}

const QuestionSchema* ForecastTable::schema(const std::string& question) const {
  for (const auto& q : questions_) {
    if (q.id == question) return &q;
  }
  return nullptr;
}

std::vector<ScoredPair> collect_pairs(const ForecastTable& forecasts, const CaseRecord& rec) {
  std::vector<ScoredPair> pairs;
  // Walk questions in table order so output ordering never depends on the
  // answer order within the case file.
  for (const auto& schema : forecasts.questions()) {
    const std::string* response = rec.answer_for(schema.id);
    if (response == nullptr) continue;
    const ProbabilityVector* p = forecasts.find(rec.disease, schema.id);
    if (p == nullptr) {
      throw Error("no forecast for disease '" + rec.disease + "', question '" + schema.id +
                  "' (case '" + rec.id + "')");
    }
    const Eigen::Index observed = schema.index_of(*response);
    if (observed < 0) {
      throw Error("case '" + rec.id + "': response '" + *response +
                  "' is not a response of question '" + schema.id + "'");
    }
    pairs.push_back(ScoredPair{rec.id, rec.disease, schema.id, *p, observed});
  }
  return pairs;
}

std::vector<ScoredPair> collect_pairs(const ForecastTable& forecasts,
                                      const std::vector<CaseRecord>& cases) {
  std::vector<ScoredPair> pairs;
  for (const auto& rec : cases) {
    auto one = collect_pairs(forecasts, rec);
    pairs.insert(pairs.end(), one.begin(), one.end());
  }
  return pairs;
}

std::vector<ScoreRecord> score_case(const ForecastTable& forecasts, const CaseRecord& rec,
                                    Rule rule, std::optional<double> log_floor) {
  std::vector<ScoreRecord> records;
  for (const auto& pair : collect_pairs(forecasts, rec)) {
    const QuestionSchema* schema = forecasts.schema(pair.question);
    records.push_back(ScoreRecord{
        pair.case_id, pair.disease, pair.question,
        schema->responses[static_cast<std::size_t>(pair.observed)], rule,
        apply_rule(rule, pair.p, pair.observed, log_floor)});
  }
  return records;
}

std::string group_key_name(GroupKey key) {
  switch (key) {
    case GroupKey::disease: return "disease";
    case GroupKey::question: return "question";
    case GroupKey::overall: return "overall";
  }
  return "?";
}

std::optional<GroupKey> group_key_from_name(const std::string& name) {
  if (name == "disease") return GroupKey::disease;
  if (name == "question") return GroupKey::question;
  if (name == "overall") return GroupKey::overall;
  return std::nullopt;
}

std::vector<GroupMean> aggregate(const std::vector<ScoreRecord>& records, GroupKey key) {
  std::vector<GroupMean> groups;
  std::vector<double> sums;
  auto group_of = [key](const ScoreRecord& r) -> std::string {
    switch (key) {
      case GroupKey::disease: return r.disease;
      case GroupKey::question: return r.question;
      case GroupKey::overall: return "overall";
    }
    return {};
  };
  for (const auto& rec : records) {
    if (rec.rule != records.front().rule) {
      throw Error("aggregate over mixed rules: " + rule_name(records.front().rule) + " and " +
                  rule_name(rec.rule));
    }
    const std::string group = group_of(rec);
    std::size_t g = 0;
    for (; g < groups.size(); ++g) {
      if (groups[g].group == group) break;
    }
    if (g == groups.size()) {
      groups.push_back(GroupMean{group, 0, 0.0});
      sums.push_back(0.0);
    }
    groups[g].count += 1;
    sums[g] += rec.score;
  }
  for (std::size_t g = 0; g < groups.size(); ++g) {
    groups[g].mean = sums[g] / static_cast<double>(groups[g].count);
  }
  return groups;
}

}  // namespace probcrit
