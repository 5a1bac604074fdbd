#include "hhg/app/csv.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>

namespace hhg::app {

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

CsvWriter::CsvWriter(const std::filesystem::path& path) : path_(path), out_(path, std::ios::binary) {
  if (!out_) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
}

void CsvWriter::comment(const std::string& text) { out_ << "# " << text << '\n'; }

void CsvWriter::header(const std::vector<std::string>& columns) {
  for (std::size_t i = 0; i < columns.size(); ++i) out_ << (i ? "," : "") << columns[i];
  out_ << '\n';
}

void CsvWriter::row(const std::vector<double>& values) {
  line_.clear();
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) line_ += ',';
    line_ += format_double(values[i]);
  }
  line_ += '\n';
  out_ << line_;
}

void CsvWriter::labelled_row(const std::string& label, const std::vector<double>& values) {
  line_ = label;
  for (double v : values) {
    line_ += ',';
    line_ += format_double(v);
  }
  line_ += '\n';
  out_ << line_;
}

void CsvWriter::close() {
  out_.close();
  if (!out_) throw std::runtime_error("failed writing '" + path_.string() + "'");
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  out.close();
  if (!out) throw std::runtime_error("failed writing '" + path.string() + "'");
}

}  // namespace hhg::app
