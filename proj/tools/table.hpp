#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

namespace cvreal::cli {

using Cell = std::variant<double, std::int64_t, bool, std::string>;

// Result table with typed cells. CSV doubles use %.12g; nan and inf are
// written as "nan", "inf", "-inf" in CSV and null in JSON.
class Table {
 public:
  explicit Table(std::vector<std::string> columns) : columns_(std::move(columns)) {}

  void add_row(std::vector<Cell> row);
  const std::vector<std::string>& columns() const { return columns_; }
  const std::vector<std::vector<Cell>>& rows() const { return rows_; }
  std::size_t size() const { return rows_.size(); }

  void write_csv(std::ostream& os) const;
  nlohmann::ordered_json to_json() const;

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<Cell>> rows_;
};

std::string format_number(double x);
nlohmann::ordered_json cell_to_json(const Cell& cell);

}  // namespace cvreal::cli
