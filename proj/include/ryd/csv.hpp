#pragma once

#include <fstream>
#include <span>
#include <string>
#include <vector>

// Locale-independent CSV output: 17 significant digits via std::to_chars.

namespace ryd {

std::string format_double(double v);

class CsvWriter {
 public:
  explicit CsvWriter(const std::string& path);
  void header(std::span<const std::string> columns);
  void row(std::span<const double> values);
  void close();

 private:
  std::ofstream out_;
  size_t n_cols_ = 0;
};

}  // namespace ryd
