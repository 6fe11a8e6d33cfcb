#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace kresling::cli {

/// Shortest decimal that round-trips to the same double.
std::string format_number(double x);

class CsvWriter {
 public:
  explicit CsvWriter(std::span<const std::string> header);
  CsvWriter& cell(double x);
  CsvWriter& cell(const std::string& s);
  CsvWriter& cell(const char* s) { return cell(std::string(s)); }
  CsvWriter& cell(long long x);
  void end_row();
  const std::string& str() const noexcept { return text_; }

 private:
  std::string text_;
  bool row_open_ = false;
};

struct OutputFile {
  std::string name;
  std::string content;
};

/// Writes each file to a temporary sibling and renames it into place.
void write_atomically(const std::filesystem::path& dir, const std::vector<OutputFile>& files);

}  // namespace kresling::cli
