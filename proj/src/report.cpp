#include "shl/report.hpp"

#include <cmath>
#include <cstdio>

#include "shl/errors.hpp"

namespace shl {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

CsvWriter::CsvWriter(const std::string& path, std::span<const std::string> columns)
    : path_(path) {
  f_ = std::fopen(path.c_str(), "wb");
  if (!f_) throw Error("io", "cannot open " + path + " for writing");
  ncols_ = columns.size();
  for (std::size_t i = 0; i < ncols_; ++i)
    std::fprintf(f_, "%s%s", columns[i].c_str(), i + 1 < ncols_ ? "," : "\n");
}

CsvWriter::~CsvWriter() { close(); }

void CsvWriter::row(std::span<const double> values) {
  if (!f_) throw Error("io", "write on closed CSV " + path_);
  if (values.size() != ncols_) throw Error("io", "CSV row width mismatch in " + path_);
  for (std::size_t i = 0; i < ncols_; ++i)
    std::fprintf(f_, "%s%s", format_double(values[i]).c_str(), i + 1 < ncols_ ? "," : "\n");
}

void CsvWriter::close() {
  if (f_) {
    std::fclose(f_);
    f_ = nullptr;
  }
}

} // namespace shl
