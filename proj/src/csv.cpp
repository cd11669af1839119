#include "hhsim/csv.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "hhsim/common.hpp"

namespace hhsim {

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

std::string quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

CsvTable::CsvTable(std::vector<std::string> columns) : columns_(std::move(columns)) {}

void CsvTable::add_metadata(std::string key, std::string value) {
  metadata_.emplace_back(std::move(key), std::move(value));
}

void CsvTable::add_row(std::vector<Cell> cells) {
  if (cells.size() != columns_.size()) throw std::invalid_argument("row width does not match the header");
  rows_.push_back(std::move(cells));
}

void CsvTable::write(std::ostream& out) const {
  for (const auto& [k, v] : metadata_) out << "# " << k << " = " << v << "\n";
  for (std::size_t i = 0; i < columns_.size(); ++i) out << (i ? "," : "") << quote(columns_[i]);
  out << "\n";
  for (const auto& row : rows_) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out << ",";
      if (const auto* d = std::get_if<double>(&row[i])) {
        out << format_number(*d);
      } else {
        out << quote(std::get<std::string>(row[i]));
      }
    }
    out << "\n";
  }
}

std::string CsvTable::str() const {
  std::ostringstream ss;
  write(ss);
  return ss.str();
}

void CsvTable::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write '" + path + "'");
  write(out);
  if (!out) throw ConfigError("write to '" + path + "' failed");
}

}  // namespace hhsim
