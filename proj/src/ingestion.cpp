#include "probcrit/ingestion.hpp"

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>

namespace probcrit {

namespace {

using csv::Row;

void check_header(const std::vector<Row>& rows, const std::vector<std::string>& expected,
                  const std::string& filename) {
  if (rows.empty()) {
    throw FormatError(filename, 1, 1, "missing header");
  }
  if (rows.front().fields != expected) {
    std::string want;
    for (std::size_t i = 0; i < expected.size(); ++i) {
      if (i > 0) want += ',';
      want += expected[i];
    }
    throw FormatError(filename, rows.front().line, 1, "header must be exactly `" + want + "`");
  }
}

void check_arity(const Row& row, std::size_t expected, const std::string& filename) {
  if (row.fields.size() != expected) {
    throw FormatError(filename, row.line, 1,
                      "expected " + std::to_string(expected) + " fields, got " +
                          std::to_string(row.fields.size()));
  }
}

void check_nonempty(const Row& row, std::size_t field, const std::string& name,
                    const std::string& filename) {
  if (row.fields[field].empty()) {
    throw FormatError(filename, row.line, field + 1, name + " must not be empty");
  }
}

// Strict percent literal: digits with at most 4 decimal places, 0..100.
double parse_percent(const Row& row, std::size_t field, const std::string& filename) {
  const std::string& text = row.fields[field];
  const auto fail = [&](const std::string& what) -> double {
    throw FormatError(filename, row.line, field + 1, what + ": `" + text + "`");
  };
  if (text.empty()) fail("empty percentage");
  std::size_t i = 0;
  while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
  if (i == 0) fail("non-numeric percentage");
  if (i < text.size()) {
    if (text[i] != '.') fail("non-numeric percentage");
    const std::size_t decimals = text.size() - i - 1;
    if (decimals < 1) fail("non-numeric percentage");
    if (decimals > 4) fail("more than 4 decimal places in percentage");
    for (std::size_t j = i + 1; j < text.size(); ++j) {
      if (!std::isdigit(static_cast<unsigned char>(text[j]))) fail("non-numeric percentage");
    }
  }
  const double value = std::stod(text);
  if (value > 100.0) fail("percentage above 100");
  return value;
}

// Shortest decimal with at most 4 places that reparses to the same value.
std::string format_percent(double value) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4f", value);
  std::string s(buf);
  while (s.back() == '0') s.pop_back();
  if (s.back() == '.') s.pop_back();
  return s;
}

}  // namespace

AssessmentTable parse_assessments(std::istream& in, const std::string& filename) {
  const auto rows = csv::read(in, filename);
  check_header(rows, {"disease", "question", "response", "lo_pct", "hi_pct"}, filename);

  AssessmentTable table;
  struct CellRow {
    std::string response;
    IntervalAssessment interval;
    std::size_t line;
  };
  // Preserve first-appearance order for everything.
  std::vector<std::string> diseases;
  std::vector<std::string> questions;
  std::map<std::string, std::vector<std::string>> schema;           // question -> responses
  std::map<std::string, std::string> founder;                       // question -> first disease
  std::map<std::pair<std::string, std::string>, std::vector<CellRow>> cell_rows;
  std::map<std::tuple<std::string, std::string, std::string>, std::size_t> seen;

  std::size_t last_line = rows.empty() ? 1 : rows.back().line;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const Row& row = rows[r];
    last_line = row.line;
    check_arity(row, 5, filename);
    check_nonempty(row, 0, "disease", filename);
    check_nonempty(row, 1, "question", filename);
    check_nonempty(row, 2, "response", filename);
    const std::string& disease = row.fields[0];
    const std::string& question = row.fields[1];
    const std::string& response = row.fields[2];
    const double lo = parse_percent(row, 3, filename);
    const double hi = parse_percent(row, 4, filename);
    if (lo > hi) {
      throw FormatError(filename, row.line, 4,
                        "lo_pct exceeds hi_pct (" + row.fields[3] + " > " + row.fields[4] + ")");
    }

    const auto key = std::make_tuple(disease, question, response);
    if (auto it = seen.find(key); it != seen.end()) {
      throw FormatError(filename, row.line, 1,
                        "duplicate assessment (" + disease + ", " + question + ", " + response +
                            "), first given at line " + std::to_string(it->second));
    }
    seen.emplace(key, row.line);

    if (std::find(diseases.begin(), diseases.end(), disease) == diseases.end()) {
      diseases.push_back(disease);
    }
    auto sit = schema.find(question);
    if (sit == schema.end()) {
      questions.push_back(question);
      schema.emplace(question, std::vector<std::string>{response});
      founder.emplace(question, disease);
    } else {
      auto& responses = sit->second;
      const bool known =
          std::find(responses.begin(), responses.end(), response) != responses.end();
      if (!known) {
        // Only the disease that introduced the question may extend its
        // response list; anything else is a cross-disease arity mismatch.
        if (founder.at(question) == disease) {
          responses.push_back(response);
        } else {
          throw FormatError(filename, row.line, 3,
                            "response '" + response + "' not in the schema of question '" +
                                question + "' inferred from disease '" + founder.at(question) +
                                "'");
        }
      }
    }
    cell_rows[{disease, question}].push_back(CellRow{response, {lo, hi}, row.line});
  }

  for (const auto& disease : diseases) table.add_disease(disease);
  for (const auto& question : questions) {
    table.add_question(QuestionSchema{question, schema.at(question)});
  }
  for (const auto& disease : diseases) {
    for (const auto& question : questions) {
      auto it = cell_rows.find({disease, question});
      if (it == cell_rows.end()) {
        throw FormatError(filename, last_line, 1,
                          "no assessments for (" + disease + ", " + question + ")");
      }
      const auto& responses = schema.at(question);
      std::vector<IntervalAssessment> cell(responses.size());
      std::vector<bool> filled(responses.size(), false);
      for (const auto& cr : it->second) {
        const auto rit = std::find(responses.begin(), responses.end(), cr.response);
        const std::size_t idx = static_cast<std::size_t>(rit - responses.begin());
        cell[idx] = cr.interval;
        filled[idx] = true;
      }
      for (std::size_t i = 0; i < responses.size(); ++i) {
        if (!filled[i]) {
          throw FormatError(filename, it->second.front().line, 1,
                            "cell (" + disease + ", " + question + ") is missing response '" +
                                responses[i] + "'");
        }
      }
      table.set_cell(table.disease_index(disease), table.question_index(question),
                     std::move(cell));
    }
  }

  const auto violations = validate_table(table);
  if (!violations.empty()) {
    throw FormatError(filename, last_line, 1, "table validation: " + violations.front());
  }
  return table;
}

void write_assessments(std::ostream& out, const AssessmentTable& table) {
  csv::write_row(out, {"disease", "question", "response", "lo_pct", "hi_pct"});
  for (const auto& disease : table.diseases()) {
    for (const auto& schema : table.questions()) {
      const auto* cell = table.find_cell(disease, schema.id);
      if (cell == nullptr) continue;
      for (std::size_t i = 0; i < cell->size(); ++i) {
        csv::write_row(out, {disease, schema.id, schema.responses[i],
                             format_percent((*cell)[i].lo), format_percent((*cell)[i].hi)});
      }
    }
  }
}

std::vector<CaseRecord> parse_cases(std::istream& in, const std::string& filename) {
  const auto rows = csv::read(in, filename);
  check_header(rows, {"case_id", "disease", "question", "response"}, filename);

  std::vector<CaseRecord> cases;
  std::map<std::string, std::size_t> case_index;
  std::map<std::string, std::size_t> case_first_line;
  // (case, question) -> (response, line), for duplicate detection.
  std::map<std::pair<std::string, std::string>, std::pair<std::string, std::size_t>> answers;

  for (std::size_t r = 1; r < rows.size(); ++r) {
    const Row& row = rows[r];
    check_arity(row, 4, filename);
    check_nonempty(row, 0, "case_id", filename);
    check_nonempty(row, 1, "disease", filename);
    check_nonempty(row, 2, "question", filename);
    check_nonempty(row, 3, "response", filename);
    const std::string& id = row.fields[0];
    const std::string& disease = row.fields[1];
    const std::string& question = row.fields[2];
    const std::string& response = row.fields[3];

    auto it = case_index.find(id);
    if (it == case_index.end()) {
      case_index.emplace(id, cases.size());
      case_first_line.emplace(id, row.line);
      cases.push_back(CaseRecord{id, disease, {}});
      it = case_index.find(id);
    } else if (cases[it->second].disease != disease) {
      throw FormatError(filename, row.line, 2,
                        "case '" + id + "' given disease '" + disease + "' here but '" +
                            cases[it->second].disease + "' at line " +
                            std::to_string(case_first_line.at(id)));
    }

    const auto akey = std::make_pair(id, question);
    if (auto ait = answers.find(akey); ait != answers.end()) {
      const auto& [first_response, first_line] = ait->second;
      const std::string what =
          first_response == response
              ? "duplicate answer to '" + question + "' for case '" + id + "'"
              : "conflicting answers to '" + question + "' for case '" + id + "' ('" +
                    first_response + "' vs '" + response + "')";
      throw FormatError(filename, row.line, 3,
                        what + ", first given at line " + std::to_string(first_line));
    }
    answers.emplace(akey, std::make_pair(response, row.line));
    cases[it->second].answers.emplace_back(question, response);
  }
  return cases;
}

void write_cases(std::ostream& out, const std::vector<CaseRecord>& cases) {
  csv::write_row(out, {"case_id", "disease", "question", "response"});
  for (const auto& rec : cases) {
    for (const auto& [question, response] : rec.answers) {
      csv::write_row(out, {rec.id, rec.disease, question, response});
    }
  }
}

namespace {

constexpr int kStateVersion = 1;

std::size_t line_of_byte(const std::string& text, std::size_t byte) {
  std::size_t line = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') ++line;
  }
  return line;
}

}  // namespace

void write_state(std::ostream& out, const CellSet& cells) {
  nlohmann::ordered_json j;
  j["format"] = "probcrit-state";
  j["version"] = kStateVersion;
  j["policy"] = {{"zero_widen_pct", cells.policy().zero_widen_pct},
                 {"max_n", cells.policy().max_n},
                 {"one_standard_error", cells.policy().one_standard_error}};
  j["cells"] = nlohmann::ordered_json::array();
  for (const auto& entry : cells.entries()) {
    nlohmann::ordered_json c;
    c["disease"] = entry.disease;
    c["question"] = entry.question;
    c["responses"] = entry.cell.responses;
    c["counts"] = std::vector<double>(entry.cell.counts.begin(), entry.cell.counts.end());
    c["total"] = entry.cell.total();
    c["degenerate"] = entry.cell.degenerate;
    if (entry.implicit_n_unrounded) c["implicit_n_unrounded"] = *entry.implicit_n_unrounded;
    j["cells"].push_back(std::move(c));
  }
  out << j.dump(2) << "\n";
}

CellSet read_state(std::istream& in, const std::string& filename) {
  std::string text(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>{});
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError(filename, line_of_byte(text, e.byte), 1, e.what());
  }
  const auto fail = [&](const std::string& what) {
    throw FormatError(filename, 1, 1, what);
  };

  try {
    if (!j.is_object() || j.value("format", "") != "probcrit-state") {
      fail("not a probcrit state file (missing `format: probcrit-state`)");
    }
    if (!j.contains("version") || !j["version"].is_number_integer() ||
        j["version"].get<int>() != kStateVersion) {
      fail("state version mismatch: expected " + std::to_string(kStateVersion));
    }
    ElicitationPolicy policy;
    const auto& jp = j.at("policy");
    policy.zero_widen_pct = jp.at("zero_widen_pct").get<double>();
    policy.max_n = jp.at("max_n").get<double>();
    policy.one_standard_error = jp.at("one_standard_error").get<bool>();
    validate_policy(policy);

    CellSet cells(policy);
    for (const auto& c : j.at("cells")) {
      CellEntry entry;
      entry.disease = c.at("disease").get<std::string>();
      entry.question = c.at("question").get<std::string>();
      entry.cell.responses = c.at("responses").get<std::vector<std::string>>();
      const auto counts = c.at("counts").get<std::vector<double>>();
      if (counts.size() != entry.cell.responses.size()) {
        fail("cell (" + entry.disease + ", " + entry.question + "): " +
             std::to_string(counts.size()) + " counts for " +
             std::to_string(entry.cell.responses.size()) + " responses");
      }
      entry.cell.counts = Eigen::Map<const Vector>(counts.data(),
                                                   static_cast<Eigen::Index>(counts.size()));
      for (double v : entry.cell.counts) {
        if (!std::isfinite(v) || v < 0.0) {
          fail("cell (" + entry.disease + ", " + entry.question + "): negative count");
        }
      }
      const double declared = c.at("total").get<double>();
      const double actual = entry.cell.total();
      if (std::abs(declared - actual) > 1e-9 * std::max(1.0, std::abs(declared))) {
        fail("cell (" + entry.disease + ", " + entry.question + "): declared total " +
             std::to_string(declared) + " does not match counts sum " + std::to_string(actual));
      }
      entry.cell.degenerate = c.at("degenerate").get<bool>();
      if (c.contains("implicit_n_unrounded")) {
        entry.implicit_n_unrounded = c["implicit_n_unrounded"].get<double>();
      }
      cells.add(std::move(entry));
    }
    return cells;
  } catch (const FormatError&) {
    throw;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(filename, 1, 1, std::string("malformed state: ") + e.what());
  } catch (const Error& e) {
    throw FormatError(filename, 1, 1, std::string("malformed state: ") + e.what());
  }
}

}  // namespace probcrit
