#pragma once

// Minimal CSV emitter/parser for numeric tables: comma separator, '\n' line
// endings, one header row, no quoting. Doubles use the shortest
// representation that round-trips.

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace stirap::cli {

std::string format_double(double value);

/// Parses a cell written by format_double. Throws std::invalid_argument.
double parse_double(std::string_view cell);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void add_row(std::vector<std::string> row);
  [[nodiscard]] std::size_t column(std::string_view name) const;
};

void write_csv(std::ostream& os, const CsvTable& table);
std::string to_csv(const CsvTable& table);

/// Throws std::invalid_argument on ragged rows or a missing header.
CsvTable parse_csv(std::string_view text);

/// Parses every numeric cell and formats it again; other cells pass through.
CsvTable renormalize(const CsvTable& table);

}  // namespace stirap::cli
