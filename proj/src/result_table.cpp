#include "htgame/result_table.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "htgame/errors.hpp"

namespace htgame {

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (x == 0.0) return "0";
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
  if (ec != std::errc()) throw std::logic_error("number formatting failed");
  return std::string(buf, end);
}

namespace {

std::string quote(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string render(const Cell& cell) {
  if (const double* d = std::get_if<double>(&cell)) return format_number(*d);
  return quote(std::get<std::string>(cell));
}

// Splits one CSV record; quoted fields may span lines.
bool read_record(std::istream& in, std::vector<std::string>& fields) {
  fields.clear();
  std::string field;
  bool quoted = false;
  bool any = false;
  char c;
  while (in.get(c)) {
    any = true;
    if (quoted) {
      if (c == '"') {
        if (in.peek() == '"') {
          in.get(c);
          field += '"';
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else if (c == '\n') {
      break;
    } else if (c != '\r') {
      field += c;
    }
  }
  if (!any) return false;
  fields.push_back(std::move(field));
  return true;
}

Cell parse_cell(const std::string& text) {
  if (text == "nan") return std::numeric_limits<double>::quiet_NaN();
  if (text == "inf") return std::numeric_limits<double>::infinity();
  if (text == "-inf") return -std::numeric_limits<double>::infinity();
  double x = 0.0;
  auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), x);
  if (!text.empty() && ec == std::errc() && end == text.data() + text.size()) return x;
  return text;
}

}  // namespace

ResultTable::ResultTable(std::vector<Column> columns) : columns_(std::move(columns)) {}

void ResultTable::add_row(std::vector<Cell> row) {
  if (row.size() != columns_.size())
    throw ValidationError("row has " + std::to_string(row.size()) + " cells, table has " +
                          std::to_string(columns_.size()) + " columns");
  rows_.push_back(std::move(row));
}

void ResultTable::set_metadata(const std::string& key, const std::string& value) {
  for (auto& [k, v] : metadata_)
    if (k == key) {
      v = value;
      return;
    }
  metadata_.emplace_back(key, value);
}

std::string ResultTable::metadata_value(const std::string& key) const {
  for (const auto& [k, v] : metadata_)
    if (k == key) return v;
  return {};
}

std::size_t ResultTable::column_index(const std::string& name) const {
  for (std::size_t i = 0; i < columns_.size(); ++i)
    if (columns_[i].name == name) return i;
  throw ValidationError("no column '" + name + "'");
}

double ResultTable::number(std::size_t row, const std::string& column) const {
  const Cell& c = rows_.at(row).at(column_index(column));
  if (const double* d = std::get_if<double>(&c)) return *d;
  throw ValidationError("column '" + column + "' is not numeric in row " + std::to_string(row));
}

std::string ResultTable::text(std::size_t row, const std::string& column) const {
  const Cell& c = rows_.at(row).at(column_index(column));
  if (const std::string* s = std::get_if<std::string>(&c)) return *s;
  return format_number(std::get<double>(c));
}

void ResultTable::write_csv(std::ostream& out) const {
  for (const auto& [k, v] : metadata_) out << "# " << k << ": " << v << '\n';
  out << "# units: ";
  for (std::size_t i = 0; i < columns_.size(); ++i) out << (i ? "," : "") << quote(columns_[i].unit);
  out << '\n';
  for (std::size_t i = 0; i < columns_.size(); ++i) out << (i ? "," : "") << quote(columns_[i].name);
  out << '\n';
  for (const auto& row : rows_) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << render(row[i]);
    out << '\n';
  }
}

ResultTable ResultTable::read_csv(std::istream& in) {
  ResultTable t;
  std::vector<std::string> units;
  std::vector<std::string> fields;
  while (in.peek() == '#') {
    std::string line;
    std::getline(in, line);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::string body = line.substr(line.size() > 1 && line[1] == ' ' ? 2 : 1);
    const auto colon = body.find(": ");
    if (colon == std::string::npos) continue;
    const std::string key = body.substr(0, colon);
    const std::string value = body.substr(colon + 2);
    if (key == "units") {
      std::istringstream u(value);
      read_record(u, units);
    } else {
      t.metadata_.emplace_back(key, value);
    }
  }
  if (!read_record(in, fields)) throw ValidationError("CSV has no header row");
  for (std::size_t i = 0; i < fields.size(); ++i)
    t.columns_.push_back({fields[i], i < units.size() ? units[i] : ""});
  while (read_record(in, fields)) {
    if (fields.size() == 1 && fields[0].empty()) continue;
    std::vector<Cell> row;
    for (const auto& f : fields) row.push_back(parse_cell(f));
    t.add_row(std::move(row));
  }
  return t;
}

}  // namespace htgame
