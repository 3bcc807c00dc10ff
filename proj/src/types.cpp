#include "probcrit/types.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace probcrit {

Eigen::Index QuestionSchema::index_of(const std::string& label) const {
  auto it = std::find(responses.begin(), responses.end(), label);
  if (it == responses.end()) return -1;
  return static_cast<Eigen::Index>(it - responses.begin());
}

ProbabilityVector::ProbabilityVector(Vector values) : values_(std::move(values)) {
  if (values_.size() == 0) throw Error("probability vector must be non-empty");
  for (Eigen::Index i = 0; i < values_.size(); ++i) {
    const double v = values_(i);
    if (!std::isfinite(v) || v < -kSumTolerance || v > 1.0 + kSumTolerance) {
      throw Error("probability vector entry " + std::to_string(i) + " out of [0,1]: " +
                  std::to_string(v));
    }
  }
  const double sum = values_.sum();
  if (std::abs(sum - 1.0) > kSumTolerance) {
    throw Error("probability vector sums to " + std::to_string(sum) + ", expected 1");
  }
}

OutcomeVector::OutcomeVector(Eigen::Index k, Eigen::Index observed) : k_(k), observed_(observed) {
  if (k < 1) throw Error("outcome vector must be non-empty");
  if (observed < 0 || observed >= k) {
    throw Error("observed index " + std::to_string(observed) + " out of range for k=" +
                std::to_string(k));
  }
}

OutcomeVector OutcomeVector::from_values(const Vector& values) {
  Eigen::Index observed = -1;
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    if (values(i) == 1.0) {
      if (observed >= 0) throw Error("outcome vector has more than one unit entry");
      observed = i;
    } else if (values(i) != 0.0) {
      throw Error("outcome vector entries must be 0 or 1");
    }
  }
  if (observed < 0) throw Error("outcome vector has no unit entry");
  return OutcomeVector(values.size(), observed);
}

Vector OutcomeVector::values() const {
  Vector v = Vector::Zero(k_);
  v(observed_) = 1.0;
  return v;
}

const std::string* CaseRecord::answer_for(const std::string& question) const {
  for (const auto& [q, r] : answers) {
    if (q == question) return &r;
  }
  return nullptr;
}

Eigen::Index DirichletCell::index_of(const std::string& label) const {
  auto it = std::find(responses.begin(), responses.end(), label);
  if (it == responses.end()) return -1;
  return static_cast<Eigen::Index>(it - responses.begin());
}

ProbabilityVector DirichletCell::mean() const {
  const double n = total();
  if (!(n > 0.0)) throw Error("dirichlet cell has zero total, no posterior mean");
  return ProbabilityVector(counts / n);
}

Eigen::Index AssessmentTable::add_disease(const std::string& label) {
  auto it = disease_index_.find(label);
  if (it != disease_index_.end()) return it->second;
  const Eigen::Index idx = static_cast<Eigen::Index>(diseases_.size());
  diseases_.push_back(label);
  disease_index_.emplace(label, idx);
  cells_.emplace_back(questions_.size());
  return idx;
}

Eigen::Index AssessmentTable::add_question(const QuestionSchema& schema) {
  auto it = question_index_.find(schema.id);
  if (it != question_index_.end()) {
    if (questions_[static_cast<std::size_t>(it->second)].responses != schema.responses) {
      throw Error("question '" + schema.id + "' re-registered with different responses");
    }
    return it->second;
  }
  const Eigen::Index idx = static_cast<Eigen::Index>(questions_.size());
  questions_.push_back(schema);
  question_index_.emplace(schema.id, idx);
  for (auto& row : cells_) row.emplace_back();
  return idx;
}

void AssessmentTable::set_cell(Eigen::Index disease, Eigen::Index question,
                               std::vector<IntervalAssessment> intervals) {
  cells_.at(static_cast<std::size_t>(disease)).at(static_cast<std::size_t>(question)) =
      std::move(intervals);
}

Eigen::Index AssessmentTable::disease_index(const std::string& label) const {
  auto it = disease_index_.find(label);
  return it == disease_index_.end() ? -1 : it->second;
}

Eigen::Index AssessmentTable::question_index(const std::string& id) const {
  auto it = question_index_.find(id);
  return it == question_index_.end() ? -1 : it->second;
}

const std::vector<IntervalAssessment>* AssessmentTable::find_cell(Eigen::Index disease,
                                                                  Eigen::Index question) const {
  if (disease < 0 || disease >= static_cast<Eigen::Index>(cells_.size())) return nullptr;
  const auto& row = cells_[static_cast<std::size_t>(disease)];
  if (question < 0 || question >= static_cast<Eigen::Index>(row.size())) return nullptr;
  const auto& cell = row[static_cast<std::size_t>(question)];
  return cell ? &*cell : nullptr;
}

const std::vector<IntervalAssessment>* AssessmentTable::find_cell(
    const std::string& disease, const std::string& question) const {
  return find_cell(disease_index(disease), question_index(question));
}

bool AssessmentTable::operator==(const AssessmentTable& other) const {
  return diseases_ == other.diseases_ && questions_ == other.questions_ &&
         cells_ == other.cells_;
}

namespace {

std::string cell_name(const std::string& disease, const std::string& question) {
  return "(" + disease + ", " + question + ")";
}

}  // namespace

std::vector<std::string> validate_table(const AssessmentTable& table) {
  std::vector<std::string> violations;
  const auto& questions = table.questions();

  for (std::size_t q = 0; q < questions.size(); ++q) {
    const auto& schema = questions[q];
    if (schema.size() < 2 || schema.size() > 5) {
      violations.push_back("question '" + schema.id + "' has " +
                           std::to_string(schema.size()) + " responses, expected 2 to 5");
    }
    for (std::size_t i = 0; i < schema.responses.size(); ++i) {
      for (std::size_t j = i + 1; j < schema.responses.size(); ++j) {
        if (schema.responses[i] == schema.responses[j]) {
          violations.push_back("question '" + schema.id + "' lists response '" +
                               schema.responses[i] + "' more than once");
        }
      }
    }
  }

  for (const auto& disease : table.diseases()) {
    for (const auto& schema : questions) {
      const auto* cell = table.find_cell(disease, schema.id);
      if (cell == nullptr) {
        violations.push_back("missing cell " + cell_name(disease, schema.id));
        continue;
      }
      if (static_cast<Eigen::Index>(cell->size()) != schema.size()) {
        violations.push_back("cell " + cell_name(disease, schema.id) + " has " +
                             std::to_string(cell->size()) + " intervals, question has " +
                             std::to_string(schema.size()) + " responses");
        continue;
      }
      for (std::size_t i = 0; i < cell->size(); ++i) {
        const auto& iv = (*cell)[i];
        if (!(iv.lo >= 0.0 && iv.lo <= iv.hi && iv.hi <= 100.0)) {
          std::ostringstream os;
          os << "cell " << cell_name(disease, schema.id) << " response '"
             << schema.responses[i] << "' violates 0 <= lo <= hi <= 100 (lo=" << iv.lo
             << ", hi=" << iv.hi << ")";
          violations.push_back(os.str());
        }
      }
    }
  }
  return violations;
}

std::vector<std::string> validate_case(const AssessmentTable& table, const CaseRecord& rec) {
  std::vector<std::string> violations;
  if (table.disease_index(rec.disease) < 0) {
    violations.push_back("case '" + rec.id + "': unknown disease '" + rec.disease + "'");
  }
  for (const auto& [question, response] : rec.answers) {
    const Eigen::Index q = table.question_index(question);
    if (q < 0) {
      violations.push_back("case '" + rec.id + "': unknown question '" + question + "'");
      continue;
    }
    const auto& schema = table.questions()[static_cast<std::size_t>(q)];
    if (schema.index_of(response) < 0) {
      violations.push_back("case '" + rec.id + "': response '" + response +
                           "' is not a response of question '" + question + "'");
    }
  }
  return violations;
}

}  // namespace probcrit
