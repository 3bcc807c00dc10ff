#ifndef PROBCRIT_TYPES_HPP
#define PROBCRIT_TYPES_HPP

#include <Eigen/Dense>

#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

// Core domain types. Everything here is immutable once built and safe to
// share read-only across threads; builders (AssessmentTable::set_cell etc.)
// are meant for construction, not for mutation under concurrency.

namespace probcrit {

using Vector = Eigen::VectorXd;

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// An expert's lo-hi percentage range for one response, kept on the 0-100
// scale it was elicited on; conversion to [0,1] happens at computation
// boundaries only.
struct IntervalAssessment {
  double lo = 0.0;
  double hi = 0.0;

  double midpoint() const { return (lo + hi) / 200.0; }
  double half_range() const { return (hi - lo) / 200.0; }

  bool operator==(const IntervalAssessment&) const = default;
};

struct QuestionSchema {
  std::string id;
  std::vector<std::string> responses;

  Eigen::Index size() const { return static_cast<Eigen::Index>(responses.size()); }

  // -1 when the label is not a response of this question.
  Eigen::Index index_of(const std::string& label) const;

  bool operator==(const QuestionSchema&) const = default;
};

// A point forecast over a question's responses: entries in [0,1], summing
// to 1 within kSumTolerance. Construction validates.
class ProbabilityVector {
public:
  static constexpr double kSumTolerance = 1e-9;

  explicit ProbabilityVector(Vector values);

  const Vector& values() const { return values_; }
  Eigen::Index size() const { return values_.size(); }
  double operator[](Eigen::Index i) const { return values_(i); }

  bool operator==(const ProbabilityVector& other) const { return values_ == other.values_; }

private:
  Vector values_;
};

// The observed indicator: exactly one response happened.
class OutcomeVector {
public:
  OutcomeVector(Eigen::Index k, Eigen::Index observed);

  // Validates one-hot structure of a raw vector.
  static OutcomeVector from_values(const Vector& values);

  Eigen::Index size() const { return k_; }
  Eigen::Index observed() const { return observed_; }
  Vector values() const;

private:
  Eigen::Index k_;
  Eigen::Index observed_;
};

// One patient: definitive disease plus the answered questions. Questions
// absent from `answers` are missing data and contribute nothing anywhere.
struct CaseRecord {
  std::string id;
  std::string disease;
  std::vector<std::pair<std::string, std::string>> answers;  // question -> response

  const std::string* answer_for(const std::string& question) const;

  bool operator==(const CaseRecord&) const = default;
};

// Implicit-sample representation of one (disease, question) conditional
// distribution: pseudo-counts aligned with the question's response order.
// Fractional counts are expected. A degenerate cell is one whose every
// interval was categorical (0-0 or 100-100): its counts were built from the
// policy cap and it must never be updated with data.
struct DirichletCell {
  std::vector<std::string> responses;
  Vector counts;
  bool degenerate = false;

  double total() const { return counts.sum(); }
  Eigen::Index index_of(const std::string& label) const;

  // counts/total; throws on total == 0.
  ProbabilityVector mean() const;
};

// The disease x question grid of interval assessments. Row/column order is
// first-appearance order and is authoritative for vector alignment.
class AssessmentTable {
public:
  // Both return the index, reusing an existing entry with the same label.
  // add_question throws if a schema with the same id but different
  // responses was already registered.
  Eigen::Index add_disease(const std::string& label);
  Eigen::Index add_question(const QuestionSchema& schema);

  void set_cell(Eigen::Index disease, Eigen::Index question,
                std::vector<IntervalAssessment> intervals);

  const std::vector<std::string>& diseases() const { return diseases_; }
  const std::vector<QuestionSchema>& questions() const { return questions_; }

  Eigen::Index disease_index(const std::string& label) const;   // -1 if absent
  Eigen::Index question_index(const std::string& id) const;     // -1 if absent

  // nullptr when the cell was never set.
  const std::vector<IntervalAssessment>* find_cell(Eigen::Index disease,
                                                   Eigen::Index question) const;
  const std::vector<IntervalAssessment>* find_cell(const std::string& disease,
                                                   const std::string& question) const;

  bool operator==(const AssessmentTable& other) const;

private:
  std::vector<std::string> diseases_;
  std::vector<QuestionSchema> questions_;
  std::unordered_map<std::string, Eigen::Index> disease_index_;
  std::unordered_map<std::string, Eigen::Index> question_index_;
  // [disease][question]; empty optional = cell absent.
  std::vector<std::vector<std::optional<std::vector<IntervalAssessment>>>> cells_;
};

// Checks every type invariant over the whole grid and returns one
// human-readable description per violation, empty when clean. Violations
// are returned rather than thrown so callers can report them in bulk.
std::vector<std::string> validate_table(const AssessmentTable& table);

// Case-level validation against a table: known disease, known questions,
// response labels that belong to each question's schema.
std::vector<std::string> validate_case(const AssessmentTable& table, const CaseRecord& rec);

}  // namespace probcrit

#endif  // PROBCRIT_TYPES_HPP
