#pragma once

#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace scholarmatch {

// Minimal RFC-4180 CSV. Handles quoted fields, doubled-quote escapes,
// embedded commas and newlines, and CRLF line endings.
class CsvReader {
 public:
  // Reads and validates the header row. Throws FormatError when the header
  // does not match `expected_header` exactly (after stripping a UTF-8 BOM).
  CsvReader(std::istream& in, const std::vector<std::string>& expected_header,
            const std::string& file_label);

  // Next data row, or nullopt at end of input. Field counts are not
  // validated here; callers decide what a malformed row means.
  std::optional<std::vector<std::string>> next_row();

  const std::string& label() const { return label_; }

 private:
  std::optional<std::vector<std::string>> parse_record();

  std::istream& in_;
  std::string label_;
};

void write_csv_row(std::ostream& out, const std::vector<std::string>& fields);
std::string csv_quote(const std::string& field);

}  // namespace scholarmatch
