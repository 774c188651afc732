#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace bgkc {

// a cell is a number (printed with 17 significant digits) or a string
using Cell = std::variant<double, std::string>;

struct Table {
  std::string schema;  // e.g. "bgkc.modes.v1"
  std::vector<std::pair<std::string, Cell>> meta;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

std::string format_number(double x);

// CSV: "# <schema>" line, "# key = value" meta lines, header, rows; strings
// are always quoted
void write_csv(const Table& t, std::ostream& os);
Table read_csv(std::istream& is);
// JSON: {"schema", "meta", "columns", "rows"}; non-finite numbers as null
void write_json(const Table& t, std::ostream& os);
Table read_json(std::istream& is);

}  // namespace bgkc
