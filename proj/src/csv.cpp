#include "scholarmatch/csv.hpp"

#include "scholarmatch/errors.hpp"
#include "scholarmatch/util.hpp"

namespace scholarmatch {

CsvReader::CsvReader(std::istream& in, const std::vector<std::string>& expected_header,
                     const std::string& file_label)
    : in_(in), label_(file_label) {
  auto header = parse_record();
  if (!header) throw FormatError(label_ + ": empty file, expected header");
  if (!header->empty() && !(*header)[0].empty()) {
    // Strip a UTF-8 BOM from the first field if present.
    std::string& first = (*header)[0];
    if (first.size() >= 3 && first[0] == '\xEF' && first[1] == '\xBB' && first[2] == '\xBF') {
      first.erase(0, 3);
    }
  }
  if (*header != expected_header) {
    throw FormatError(label_ + ": header mismatch, got \"" + join(*header, ",") +
                      "\", expected \"" + join(expected_header, ",") + "\"");
  }
}

std::optional<std::vector<std::string>> CsvReader::next_row() { return parse_record(); }

std::optional<std::vector<std::string>> CsvReader::parse_record() {
  int c = in_.get();
  if (c == EOF) return std::nullopt;

  std::vector<std::string> fields;
  std::string field;
  bool in_quotes = false;
  while (true) {
    if (c == EOF) {
      fields.push_back(std::move(field));
      return fields;
    }
    char ch = static_cast<char>(c);
    if (in_quotes) {
      if (ch == '"') {
        int peek = in_.get();
        if (peek == '"') {
          field += '"';
        } else {
          in_quotes = false;
          c = peek;
          continue;
        }
      } else {
        field += ch;
      }
    } else if (ch == '"' && field.empty()) {
      in_quotes = true;
    } else if (ch == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else if (ch == '\r') {
      int peek = in_.get();
      if (peek == '\n' || peek == EOF) {
        fields.push_back(std::move(field));
        return fields;
      }
      field += ch;
      c = peek;
      continue;
    } else if (ch == '\n') {
      fields.push_back(std::move(field));
      return fields;
    } else {
      field += ch;
    }
    c = in_.get();
  }
}

std::string csv_quote(const std::string& field) {
  bool needs_quotes = field.find_first_of(",\"\r\n") != std::string::npos;
  if (!needs_quotes) return field;
  std::string out = "\"";
  for (char ch : field) {
    if (ch == '"') out += "\"\"";
    else out += ch;
  }
  out += '"';
  return out;
}

void write_csv_row(std::ostream& out, const std::vector<std::string>& fields) {
  for (size_t i = 0; i < fields.size(); ++i) {
    if (i) out << ',';
    out << csv_quote(fields[i]);
  }
  out << '\n';
}

}  // namespace scholarmatch
