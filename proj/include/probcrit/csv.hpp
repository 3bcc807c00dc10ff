#ifndef PROBCRIT_CSV_HPP
#define PROBCRIT_CSV_HPP

#include "probcrit/types.hpp"

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

namespace probcrit {

// Every parse failure, CSV or state file, carries a position.
class FormatError : public Error {
public:
  FormatError(std::string file, std::size_t line, std::size_t column, std::string detail);

  const std::string& file() const { return file_; }
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }
  const std::string& detail() const { return detail_; }

private:
  std::string file_;
  std::size_t line_;
  std::size_t column_;
  std::string detail_;
};

namespace csv {

struct Row {
  std::size_t line = 0;  // 1-based line the row starts on
  std::vector<std::string> fields;
};

// Strict RFC 4180: CRLF or LF records, double-quoted fields with ""
// escapes, no stray quotes. Completely blank lines are skipped. Throws
// FormatError on anything else.
std::vector<Row> read(std::istream& in, const std::string& filename);

void write_row(std::ostream& out, const std::vector<std::string>& fields);

}  // namespace csv
}  // namespace probcrit

#endif  // PROBCRIT_CSV_HPP
