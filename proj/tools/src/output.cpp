#include "kresling_cli/output.hpp"

#include <charconv>
#include <fstream>
#include <random>
#include <system_error>

#include "kresling/errors.hpp"

namespace kresling::cli {

std::string format_number(double x) {
  if (x == 0.0) x = 0.0;  // drop the sign of negative zero
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

CsvWriter::CsvWriter(std::span<const std::string> header) {
  for (const std::string& h : header) cell(h);
  end_row();
}

CsvWriter& CsvWriter::cell(double x) { return cell(format_number(x)); }

CsvWriter& CsvWriter::cell(long long x) { return cell(std::to_string(x)); }

CsvWriter& CsvWriter::cell(const std::string& s) {
  if (row_open_) text_ += ',';
  text_ += s;
  row_open_ = true;
  return *this;
}

void CsvWriter::end_row() {
  text_ += '\n';
  row_open_ = false;
}

void write_atomically(const std::filesystem::path& dir, const std::vector<OutputFile>& files) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error("cannot create output directory '" + dir.string() + "': " + ec.message());

  std::random_device rd;
  std::vector<std::pair<fs::path, fs::path>> staged;
  auto discard = [&] {
    for (const auto& [tmp, _] : staged) fs::remove(tmp, ec);
  };
  for (const OutputFile& f : files) {
    const fs::path target = dir / f.name;
    const fs::path tmp = dir / ("." + f.name + ".tmp" + std::to_string(rd()));
    std::ofstream out(tmp, std::ios::binary);
    out << f.content;
    out.close();
    staged.emplace_back(tmp, target);
    if (!out) {
      discard();
      throw Error("cannot write '" + target.string() + "'");
    }
  }
  for (const auto& [tmp, target] : staged) {
    fs::rename(tmp, target, ec);
    if (ec) {
      discard();
      throw Error("cannot move '" + tmp.string() + "' into place: " + ec.message());
    }
  }
}

}  // namespace kresling::cli
