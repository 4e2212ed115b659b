#pragma once

// Rectangular result table and its CSV form.
//
// Layout of an emitted file:
//   # key: value          metadata lines (scenario hash, version, ...)
//   # units: u1,u2,...    one unit per column, empty when dimensionless
//   name1,name2,...       header
//   rows...
// Numbers are written with 17 significant digits so they re-parse exactly.

#include <iosfwd>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace htgame {

using Cell = std::variant<double, std::string>;

struct Column {
  std::string name;
  std::string unit;
};

class ResultTable {
 public:
  ResultTable() = default;
  explicit ResultTable(std::vector<Column> columns);

  const std::vector<Column>& columns() const { return columns_; }
  const std::vector<std::vector<Cell>>& rows() const { return rows_; }
  const std::vector<std::pair<std::string, std::string>>& metadata() const { return metadata_; }

  /// Throws ValidationError if the row width differs from the column count.
  void add_row(std::vector<Cell> row);
  void set_metadata(const std::string& key, const std::string& value);
  /// Empty string if absent.
  std::string metadata_value(const std::string& key) const;

  std::size_t column_index(const std::string& name) const;
  double number(std::size_t row, const std::string& column) const;
  std::string text(std::size_t row, const std::string& column) const;

  void write_csv(std::ostream& out) const;
  static ResultTable read_csv(std::istream& in);

 private:
  std::vector<Column> columns_;
  std::vector<std::vector<Cell>> rows_;
  std::vector<std::pair<std::string, std::string>> metadata_;
};

/// Shortest text for `x` with 17 significant digits; "nan", "inf", "-inf" otherwise.
std::string format_number(double x);

}  // namespace htgame
