#include "rover/csv.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace rover {

std::string format_csv(double v) {
  if (!std::isfinite(v)) throw std::invalid_argument("non-finite value in CSV output");
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

CsvTable::CsvTable(std::vector<std::string> header) : columns_(header.size()) {
  if (header.empty()) throw std::invalid_argument("empty CSV header");
  for (size_t i = 0; i < header.size(); ++i) {
    if (i) text_ += ',';
    text_ += header[i];
  }
  text_ += '\n';
}

void CsvTable::add_row(const std::vector<double>& row) {
  if (row.size() != columns_) throw std::invalid_argument("CSV row width mismatch");
  for (size_t i = 0; i < row.size(); ++i) {
    if (i) text_ += ',';
    text_ += format_csv(row[i]);
  }
  text_ += '\n';
}

void CsvTable::write_file(const std::string& path) const { write_file_atomic(path, text_); }

void write_file_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open for writing: " + tmp);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw std::runtime_error("short write: " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    throw std::runtime_error("cannot rename into place: " + path);
}

}  // namespace rover
