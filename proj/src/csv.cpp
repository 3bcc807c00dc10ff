#include "probcrit/csv.hpp"

#include <istream>
#include <ostream>

namespace probcrit {

FormatError::FormatError(std::string file, std::size_t line, std::size_t column,
                         std::string detail)
    : Error(file + ":" + std::to_string(line) + ":" + std::to_string(column) + ": " + detail),
      file_(std::move(file)),
      line_(line),
      column_(column),
      detail_(std::move(detail)) {}

namespace csv {

std::vector<Row> read(std::istream& in, const std::string& filename) {
  std::string text(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>{});

  std::vector<Row> rows;
  std::size_t line = 1, column = 1;
  std::size_t i = 0;
  const std::size_t n = text.size();

  auto fail = [&](const std::string& detail) -> void {
    throw FormatError(filename, line, column, detail);
  };

  while (i < n) {
    Row row;
    row.line = line;
    bool row_done = false;
    bool any_content = false;  // quoted empty field still counts

    while (!row_done) {
      // One field.
      std::string field;
      if (i < n && text[i] == '"') {
        any_content = true;
        ++i;
        ++column;
        bool closed = false;
        while (i < n) {
          const char c = text[i];
          if (c == '"') {
            if (i + 1 < n && text[i + 1] == '"') {
              field.push_back('"');
              i += 2;
              column += 2;
            } else {
              ++i;
              ++column;
              closed = true;
              break;
            }
          } else {
            if (c == '\n') {
              ++line;
              column = 1;
            } else {
              ++column;
            }
            field.push_back(c);
            ++i;
          }
        }
        if (!closed) fail("unterminated quoted field");
        if (i < n && text[i] != ',' && text[i] != '\r' && text[i] != '\n') {
          fail("unexpected character after closing quote");
        }
      } else {
        while (i < n && text[i] != ',' && text[i] != '\r' && text[i] != '\n') {
          if (text[i] == '"') fail("bare double quote inside unquoted field");
          field.push_back(text[i]);
          ++i;
          ++column;
        }
        if (!field.empty()) any_content = true;
      }

      // Delimiter, line end, or EOF.
      if (i >= n) {
        row.fields.push_back(std::move(field));
        row_done = true;
      } else if (text[i] == ',') {
        row.fields.push_back(std::move(field));
        any_content = true;  // a comma means the row has structure
        ++i;
        ++column;
      } else if (text[i] == '\r') {
        if (i + 1 >= n || text[i + 1] != '\n') fail("bare carriage return");
        row.fields.push_back(std::move(field));
        i += 2;
        ++line;
        column = 1;
        row_done = true;
      } else {  // '\n'
        row.fields.push_back(std::move(field));
        ++i;
        ++line;
        column = 1;
        row_done = true;
      }
    }

    const bool blank = row.fields.size() == 1 && row.fields[0].empty() && !any_content;
    if (!blank) rows.push_back(std::move(row));
  }
  return rows;
}

namespace {

bool needs_quoting(const std::string& field) {
  return field.find_first_of(",\"\r\n") != std::string::npos;
}

}  // namespace

void write_row(std::ostream& out, const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i > 0) out << ',';
    if (needs_quoting(fields[i])) {
      out << '"';
      for (char c : fields[i]) {
        if (c == '"') out << "\"\"";
        else out << c;
      }
      out << '"';
    } else {
      out << fields[i];
    }
  }
  out << '\n';
}

}  // namespace csv
}  // namespace probcrit
