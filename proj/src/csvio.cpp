#include "mmwave/csvio.hpp"

#include <sstream>
#include <stdexcept>

namespace mmwave::cli {

CsvWriter::CsvWriter(const std::string& path,
                     const std::vector<std::string>& columns)
    : out_(path), columns_(columns) {
  if (!out_) throw std::runtime_error("csv: cannot open '" + path + "'");
}

void CsvWriter::comment(const std::string& text) {
  if (header_written_)
    throw std::logic_error("csv: metadata must precede the header row");
  std::istringstream lines(text);
  std::string line;
  while (std::getline(lines, line)) out_ << "# " << line << "\n";
}

void CsvWriter::write_header() {
  for (size_t i = 0; i < columns_.size(); ++i) {
    if (i) out_ << ",";
    out_ << quote_if_needed(columns_[i]);
  }
  out_ << "\n";
  header_written_ = true;
}

void CsvWriter::row(const std::vector<std::string>& cells) {
  if (!header_written_) write_header();
  if (cells.size() != columns_.size())
    throw std::logic_error("csv: row width does not match header");
  for (size_t i = 0; i < cells.size(); ++i) {
    if (i) out_ << ",";
    out_ << quote_if_needed(cells[i]);
  }
  out_ << "\n";
}

void CsvWriter::footer(const std::string& text) {
  if (!header_written_) write_header();
  std::istringstream lines(text);
  std::string line;
  while (std::getline(lines, line)) out_ << "# " << line << "\n";
}

std::string CsvWriter::field(double value, int precision) {
  std::ostringstream os;
  os.precision(precision);
  os << value;
  return os.str();
}

std::string CsvWriter::quote_if_needed(const std::string& raw) {
  if (raw.find_first_of(",\"\n") == std::string::npos) return raw;
  std::string quoted = "\"";
  for (char c : raw) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  quoted += '"';
  return quoted;
}

}  // namespace mmwave::cli
