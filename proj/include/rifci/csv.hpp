#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace rifci::csv {

using Row = std::vector<std::string>;

struct Table {
  Row header;
  std::vector<Row> rows;

  // Index of a header column; throws DataError naming `source` if absent.
  std::size_t column(std::string_view name, std::string_view source) const;
};

// Reads a comma separated table with a mandatory header row. Fields may be
// double-quoted with "" escapes. Blank lines are skipped. A UTF-8 BOM on the
// first line is ignored.
Table read(std::istream& in, std::string_view source);
Table read_file(const std::filesystem::path& path);

// Quotes a field when it contains a comma, quote or line break.
std::string quote(std::string_view field);

void write_row(std::ostream& out, const Row& row);

// Shortest round-trip representation is not needed for tables; this prints
// with a fixed number of significant digits so output is byte-stable.
std::string format_number(double value, int significant_digits = 12);

}  // namespace rifci::csv
