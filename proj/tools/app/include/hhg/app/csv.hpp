#pragma once

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <string>
#include <vector>

namespace hhg::app {

/// Shortest decimal string that parses back to exactly x.
std::string format_double(double x);

/// Comma-separated writer. Comment lines start with '#'.
class CsvWriter {
 public:
  explicit CsvWriter(const std::filesystem::path& path);

  void comment(const std::string& text);
  void header(const std::vector<std::string>& columns);
  void row(const std::vector<double>& values);
  void row(std::initializer_list<double> values) { row(std::vector<double>(values)); }
  /// First cell is text, the rest numbers.
  void labelled_row(const std::string& label, const std::vector<double>& values);
  void close();

 private:
  std::filesystem::path path_;
  std::ofstream out_;
  std::string line_;
};

/// Writes text to path, throwing std::runtime_error on failure.
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace hhg::app
