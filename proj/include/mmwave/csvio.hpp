#pragma once

#include <fstream>
#include <string>
#include <vector>

// RFC-4180 CSV with `#`-prefixed metadata lines before the header row.
// Every file records enough of the run description to reproduce it.

namespace mmwave::cli {

class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::string>& columns);

  /// One `# key: value`-style metadata line; multi-line text is prefixed
  /// per line. Must be called before the first data row.
  void comment(const std::string& text);

  void row(const std::vector<std::string>& cells);

  /// Appends trailing `# key=value` footer records (e.g. fit summaries).
  void footer(const std::string& text);

  static std::string field(double value, int precision = 10);
  static std::string quote_if_needed(const std::string& raw);

 private:
  void write_header();

  std::ofstream out_;
  std::vector<std::string> columns_;
  bool header_written_ = false;
};

}  // namespace mmwave::cli
