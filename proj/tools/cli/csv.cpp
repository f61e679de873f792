#include "cli/csv.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace stirap::cli {

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), res.ptr);
}

double parse_double(std::string_view cell) {
  if (cell == "nan") return std::nan("");
  if (cell == "inf") return INFINITY;
  if (cell == "-inf") return -INFINITY;
  double value = 0.0;
  const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), value);
  if (res.ec != std::errc{} || res.ptr != cell.data() + cell.size()) {
    throw std::invalid_argument("not a number: '" + std::string(cell) + "'");
  }
  return value;
}

void CsvTable::add_row(std::vector<std::string> row) {
  if (row.size() != header.size()) throw std::invalid_argument("row width does not match header");
  rows.push_back(std::move(row));
}

std::size_t CsvTable::column(std::string_view name) const {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return i;
  throw std::out_of_range("no column named " + std::string(name));
}

namespace {
void write_line(std::ostream& os, const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) os << ',';
    os << cells[i];
  }
  os << '\n';
}

std::vector<std::string> split(std::string_view line) {
  std::vector<std::string> cells;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    cells.emplace_back(line.substr(start, comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return cells;
}

bool looks_numeric(std::string_view cell) {
  if (cell.empty()) return false;
  double ignored = 0.0;
  if (cell == "nan" || cell == "inf" || cell == "-inf") return true;
  const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), ignored);
  return res.ec == std::errc{} && res.ptr == cell.data() + cell.size();
}
}  // namespace

void write_csv(std::ostream& os, const CsvTable& table) {
  write_line(os, table.header);
  for (const auto& row : table.rows) write_line(os, row);
}

std::string to_csv(const CsvTable& table) {
  std::ostringstream os;
  write_csv(os, table);
  return os.str();
}

CsvTable parse_csv(std::string_view text) {
  CsvTable table;
  bool first = true;
  std::size_t start = 0;
  while (start < text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    const auto line = text.substr(start, end - start);
    start = end + 1;
    if (first) {
      table.header = split(line);
      first = false;
    } else {
      table.add_row(split(line));
    }
  }
  if (first) throw std::invalid_argument("empty CSV");
  return table;
}

CsvTable renormalize(const CsvTable& table) {
  CsvTable out{table.header, {}};
  for (const auto& row : table.rows) {
    std::vector<std::string> cells;
    cells.reserve(row.size());
    for (const auto& cell : row)
      cells.push_back(looks_numeric(cell) ? format_double(parse_double(cell)) : cell);
    out.rows.push_back(std::move(cells));
  }
  return out;
}

}  // namespace stirap::cli
