#pragma once

#include <ostream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace hhsim {

// 17 significant digits; nan and inf spelled out.
std::string format_number(double v);

/// Comma-separated table preceded by '#' metadata lines.
class CsvTable {
 public:
  using Cell = std::variant<double, std::string>;

  explicit CsvTable(std::vector<std::string> columns);

  void add_metadata(std::string key, std::string value);
  void add_row(std::vector<Cell> cells);

  const std::vector<std::string>& columns() const { return columns_; }
  std::size_t rows() const { return rows_.size(); }

  void write(std::ostream& out) const;
  std::string str() const;
  void save(const std::string& path) const;

 private:
  std::vector<std::pair<std::string, std::string>> metadata_;
  std::vector<std::string> columns_;
  std::vector<std::vector<Cell>> rows_;
};

}  // namespace hhsim
