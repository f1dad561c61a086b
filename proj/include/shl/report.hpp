#pragma once

#include <cstdio>
#include <span>
#include <string>
#include <vector>

namespace shl {

/// Deterministic CSV writer: header row, '.' decimal, %.17g values, LF line
/// endings. Identical rows in, identical bytes out.
class CsvWriter {
public:
  CsvWriter(const std::string& path, std::span<const std::string> columns);
  ~CsvWriter();
  CsvWriter(const CsvWriter&) = delete;
  CsvWriter& operator=(const CsvWriter&) = delete;

  void row(std::span<const double> values);
  void close();

private:
  std::FILE* f_ = nullptr;
  std::size_t ncols_ = 0;
  std::string path_;
};

/// %.17g with inf/nan spelled "inf"/"nan" (locale-independent).
std::string format_double(double v);

} // namespace shl
