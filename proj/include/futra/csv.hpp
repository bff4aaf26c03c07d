#pragma once

#include <charconv>
#include <string>
#include <string_view>
#include <vector>

#include "futra/datum.hpp"
#include "futra/error.hpp"

// Matrix/vector CSV interchange: comma-separated decimal values, one matrix
// row per line; a vector is a single line. Export uses shortest round-trip
// decimals, so write/read is value-exact.

namespace futra::csv {

inline std::string format(const Datum& d) {
  if (!d.is_vector() && !d.is_matrix())
    throw Error(ErrorCode::TypeError, {}, std::string("CSV export expects a vector or matrix, got ") + d.tag_name());
  return to_display(d) + "\n";
}

inline double parse_cell(std::string_view cell, int line_no) {
  // trim ascii spaces
  while (!cell.empty() && (cell.front() == ' ' || cell.front() == '\t')) cell.remove_prefix(1);
  while (!cell.empty() && (cell.back() == ' ' || cell.back() == '\t' || cell.back() == '\r'))
    cell.remove_suffix(1);
  double value = 0.0;
  auto [end, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
  if (ec != std::errc{} || end != cell.data() + cell.size())
    throw Error(ErrorCode::ParseError, {line_no, 1, 0},
                "CSV: cannot parse '" + std::string(cell) + "' as a number");
  return value;
}

// One line -> Vector, several lines -> Matrix (rows must be rectangular).
inline Datum parse(std::string_view text) {
  std::vector<std::vector<double>> rows;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    std::string_view line = text.substr(pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos);
    pos = eol == std::string_view::npos ? text.size() : eol + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.find_first_not_of(" \t") == std::string_view::npos) continue;  // skip blank lines
    std::vector<double> row;
    std::size_t cell_start = 0;
    while (true) {
      std::size_t comma = line.find(',', cell_start);
      std::string_view cell =
          line.substr(cell_start, comma == std::string_view::npos ? std::string_view::npos : comma - cell_start);
      row.push_back(parse_cell(cell, line_no));
      if (comma == std::string_view::npos) break;
      cell_start = comma + 1;
    }
    if (!rows.empty() && rows.front().size() != row.size())
      throw Error(ErrorCode::RaggedMatrix, {line_no, 1, 0},
                  "CSV: row " + std::to_string(line_no) + " has " + std::to_string(row.size()) +
                      " values, expected " + std::to_string(rows.front().size()));
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw Error(ErrorCode::ParseError, {1, 1, 0}, "CSV: no data");
  if (rows.size() == 1) return Datum::vector(std::move(rows.front()));
  std::vector<double> elems;
  elems.reserve(rows.size() * rows.front().size());
  for (const auto& r : rows) elems.insert(elems.end(), r.begin(), r.end());
  return Datum::matrix(rows.size(), rows.front().size(), std::move(elems));
}

}  // namespace futra::csv
