#pragma once

#include <string>
#include <vector>

namespace rover {

// Fixed-format numeric rendering for CSV output: %.10g, C locale, so repeated
// runs produce byte-identical files.
std::string format_csv(double v);

// Minimal comma-separated writer: header row then numeric rows, '\n' line
// endings, no quoting (fields never contain commas).
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);
  void add_row(const std::vector<double>& row);
  const std::string& text() const { return text_; }
  void write_file(const std::string& path) const;

 private:
  size_t columns_;
  std::string text_;
};

// Writes content to path atomically (temp file + rename).
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace rover
