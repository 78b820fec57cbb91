#include "offerset/report.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include "offerset/errors.hpp"

namespace offerset {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

void CsvReport::set_meta(const std::string& key, const std::string& value) {
  for (auto& [k, v] : meta_) {
    if (k == key) {
      v = value;
      return;
    }
  }
  meta_.emplace_back(key, value);
}

void CsvReport::set_meta(const std::string& key, double value) {
  set_meta(key, format_double(value));
}

void CsvReport::set_meta(const std::string& key, std::uint64_t value) {
  set_meta(key, std::to_string(value));
}

void CsvReport::set_columns(std::vector<std::string> columns) {
  columns_ = std::move(columns);
}

void CsvReport::add_row(std::vector<std::string> row) {
  rows_.push_back(std::move(row));
}

std::string CsvReport::meta(const std::string& key) const {
  for (const auto& [k, v] : meta_)
    if (k == key) return v;
  return {};
}

void CsvReport::write(std::ostream& out) const {
  for (const auto& [k, v] : meta_) out << "# " << k << " = " << v << "\n";
  for (std::size_t i = 0; i < columns_.size(); ++i)
    out << (i ? "," : "") << columns_[i];
  out << "\n";
  for (const auto& row : rows_) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
    out << "\n";
  }
}

std::string CsvReport::to_string() const {
  std::ostringstream ss;
  write(ss);
  return ss.str();
}

void CsvReport::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot write report: " + path);
  write(out);
}

}  // namespace offerset
