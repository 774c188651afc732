#include "table.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace bgkc {

namespace {

std::string quote_csv(const std::string& s) {
  std::string r = "\"";
  for (char c : s) {
    if (c == '"') r += '"';
    r += c;
  }
  return r + '"';
}

std::string cell_csv(const Cell& c) {
  if (auto* d = std::get_if<double>(&c)) return format_number(*d);
  return quote_csv(std::get<std::string>(c));
}

std::string cell_json(const Cell& c) {
  if (auto* d = std::get_if<double>(&c)) return std::isfinite(*d) ? format_number(*d) : "null";
  return nlohmann::json(std::get<std::string>(c)).dump();
}

// splits one CSV record; quoted fields become strings, others numbers
std::vector<Cell> split_csv(const std::string& line) {
  std::vector<Cell> out;
  std::size_t i = 0;
  while (true) {
    if (i < line.size() && line[i] == '"') {
      std::string s;
      ++i;
      while (true) {
        if (i >= line.size()) throw std::runtime_error("csv: unterminated quoted field");
        if (line[i] == '"') {
          if (i + 1 < line.size() && line[i + 1] == '"') {
            s += '"';
            i += 2;
            continue;
          }
          ++i;
          break;
        }
        s += line[i++];
      }
      out.emplace_back(s);
    } else {
      const std::size_t j = line.find(',', i);
      const std::string f = line.substr(i, j == std::string::npos ? std::string::npos : j - i);
      char* end = nullptr;
      const double v = std::strtod(f.c_str(), &end);
      if (f.empty() || *end != '\0') throw std::runtime_error("csv: bad numeric field '" + f + "'");
      out.emplace_back(v);
      i = (j == std::string::npos) ? line.size() : j;
    }
    if (i >= line.size()) break;
    if (line[i] != ',') throw std::runtime_error("csv: expected ',' after field");
    ++i;
  }
  return out;
}

Cell cell_from_json(const nlohmann::ordered_json& j) {
  if (j.is_null()) return std::nan("");
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) return j.get<std::string>();
  throw std::runtime_error("json: unexpected cell type");
}

}  // namespace

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_csv(const Table& t, std::ostream& os) {
  os << "# " << t.schema << "\n";
  for (const auto& [k, v] : t.meta) os << "# " << k << " = " << cell_csv(v) << "\n";
  for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
  os << "\n";
  for (const auto& r : t.rows) {
    for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << cell_csv(r[i]);
    os << "\n";
  }
}

Table read_csv(std::istream& is) {
  Table t;
  std::string line;
  if (!std::getline(is, line) || line.rfind("# ", 0) != 0) throw std::runtime_error("csv: missing schema line");
  t.schema = line.substr(2);
  while (std::getline(is, line)) {
    if (line.rfind("# ", 0) == 0) {
      const auto eq = line.find(" = ");
      if (eq == std::string::npos) throw std::runtime_error("csv: bad meta line");
      const auto v = split_csv(line.substr(eq + 3));
      if (v.size() != 1) throw std::runtime_error("csv: bad meta value");
      t.meta.emplace_back(line.substr(2, eq - 2), v[0]);
      continue;
    }
    std::stringstream ss(line);
    std::string c;
    while (std::getline(ss, c, ',')) t.columns.push_back(c);
    break;
  }
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    auto r = split_csv(line);
    if (r.size() != t.columns.size()) throw std::runtime_error("csv: row width does not match header");
    t.rows.push_back(std::move(r));
  }
  return t;
}

void write_json(const Table& t, std::ostream& os) {
  os << "{\n  \"schema\": " << nlohmann::json(t.schema).dump() << ",\n  \"meta\": {";
  for (std::size_t i = 0; i < t.meta.size(); ++i)
    os << (i ? ", " : "") << nlohmann::json(t.meta[i].first).dump() << ": " << cell_json(t.meta[i].second);
  os << "},\n  \"columns\": [";
  for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? ", " : "") << nlohmann::json(t.columns[i]).dump();
  os << "],\n  \"rows\": [";
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    os << (r ? ",\n    [" : "\n    [");
    for (std::size_t i = 0; i < t.rows[r].size(); ++i) os << (i ? ", " : "") << cell_json(t.rows[r][i]);
    os << "]";
  }
  os << (t.rows.empty() ? "]\n}\n" : "\n  ]\n}\n");
}

Table read_json(std::istream& is) {
  // meta order matters for byte-identical re-serialization
  const auto j = nlohmann::ordered_json::parse(is);
  Table t;
  t.schema = j.at("schema").get<std::string>();
  for (const auto& [k, v] : j.at("meta").items()) t.meta.emplace_back(k, cell_from_json(v));
  for (const auto& c : j.at("columns")) t.columns.push_back(c.get<std::string>());
  for (const auto& r : j.at("rows")) {
    std::vector<Cell> row;
    for (const auto& c : r) row.push_back(cell_from_json(c));
    if (row.size() != t.columns.size()) throw std::runtime_error("json: row width does not match header");
    t.rows.push_back(std::move(row));
  }
  return t;
}

}  // namespace bgkc
