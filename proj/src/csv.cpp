#include "ryd/csv.hpp"

#include <charconv>
#include <stdexcept>

namespace ryd {

std::string format_double(double v) {
  char buf[48];
  const auto res =
      std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  std::string s(buf, res.ptr);
  // keep a decimal marker so columns parse as floating point everywhere
  if (s.find('.') == std::string::npos && s.find('e') == std::string::npos &&
      s.find("inf") == std::string::npos && s.find("nan") == std::string::npos)
    s += ".0";
  return s;
}

CsvWriter::CsvWriter(const std::string& path) : out_(path) {
  if (!out_) throw std::runtime_error("cannot open output file: " + path);
}

void CsvWriter::header(std::span<const std::string> columns) {
  n_cols_ = columns.size();
  for (size_t i = 0; i < columns.size(); ++i)
    out_ << (i ? "," : "") << columns[i];
  out_ << "\n";
}

void CsvWriter::row(std::span<const double> values) {
  if (n_cols_ && values.size() != n_cols_)
    throw std::logic_error("csv row width mismatch");
  for (size_t i = 0; i < values.size(); ++i)
    out_ << (i ? "," : "") << format_double(values[i]);
  out_ << "\n";
}

void CsvWriter::close() { out_.close(); }

}  // namespace ryd
