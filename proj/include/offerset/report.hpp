// CSV report assembly with an embedded metadata header.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace offerset {

std::string format_double(double v);  // "%.10g"

class CsvReport {
 public:
  void set_meta(const std::string& key, const std::string& value);
  void set_meta(const std::string& key, double value);
  void set_meta(const std::string& key, std::uint64_t value);

  void set_columns(std::vector<std::string> columns);
  void add_row(std::vector<std::string> row);

  std::size_t row_count() const { return rows_.size(); }
  const std::vector<std::vector<std::string>>& rows() const { return rows_; }
  std::string meta(const std::string& key) const;  // empty when absent

  void write(std::ostream& out) const;
  std::string to_string() const;
  void save(const std::string& path) const;

 private:
  std::vector<std::pair<std::string, std::string>> meta_;
  std::vector<std::string> columns_;
  std::vector<std::vector<std::string>> rows_;
};

}  // namespace offerset
