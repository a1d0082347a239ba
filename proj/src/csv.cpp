#include "rifci/csv.hpp"

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>

#include "rifci/error.hpp"

namespace rifci::csv {

namespace {

// Splits one logical record. Quoted fields may span physical lines, so the
// caller's stream is consulted again when a quote is left open.
bool read_record(std::istream& in, Row& row, std::size_t& line_no) {
  row.clear();
  std::string line;
  if (!std::getline(in, line)) return false;
  ++line_no;

  std::string field;
  bool quoted = false;
  std::size_t i = 0;
  for (;;) {
    if (i >= line.size()) {
      if (quoted) {
        std::string next;
        if (!std::getline(in, next)) throw DataError("unterminated quoted field");
        ++line_no;
        field.push_back('\n');
        line = std::move(next);
        i = 0;
        continue;
      }
      break;
    }
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      row.push_back(std::move(field));
      field.clear();
    } else if (c != '\r') {
      field.push_back(c);
    }
    ++i;
  }
  row.push_back(std::move(field));
  return true;
}

bool blank(const Row& row) { return row.size() == 1 && row[0].empty(); }

}  // namespace

std::size_t Table::column(std::string_view name, std::string_view source) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  throw DataError(std::string(source) + ": missing column '" + std::string(name) + "'");
}

Table read(std::istream& in, std::string_view source) {
  Table table;
  std::size_t line_no = 0;
  Row row;
  try {
    while (read_record(in, row, line_no)) {
      if (blank(row)) continue;
      if (table.header.empty()) {
        if (row[0].starts_with("\xEF\xBB\xBF")) row[0].erase(0, 3);
        table.header = row;
        continue;
      }
      if (row.size() != table.header.size()) {
        throw DataError("line " + std::to_string(line_no) + ": expected " +
                        std::to_string(table.header.size()) + " fields, got " +
                        std::to_string(row.size()));
      }
      table.rows.push_back(row);
    }
  } catch (const DataError& e) {
    throw DataError(std::string(source) + ": " + e.what());
  }
  if (table.header.empty()) throw DataError(std::string(source) + ": missing header row");
  return table;
}

Table read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  return read(in, path.string());
}

std::string quote(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

void write_row(std::ostream& out, const Row& row) {
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (i) out << ',';
    out << quote(row[i]);
  }
  out << '\n';
}

std::string format_number(double value, int significant_digits) {
  if (value == 0.0) return "0";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", significant_digits, value);
  return buf;
}

}  // namespace rifci::csv
