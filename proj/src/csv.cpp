#include "berry_ring/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>

#include "berry_ring/error.hpp"

namespace berry_ring {

std::string format_double(double value) {
  if (!std::isfinite(value)) fail(ErrorCode::numerical, "refusing to write a non-finite value");
  if (value == 0.0) value = 0.0;  // drop the sign of negative zero
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

CsvTable::CsvTable(std::vector<std::string> columns) : columns_(std::move(columns)) {
  require(!columns_.empty(), ErrorCode::invalid_argument, "CSV table needs columns");
}

void CsvTable::comment(const std::string& line) { comments_.push_back(line); }

void CsvTable::row(std::span<const double> values) {
  require(values.size() == columns_.size(), ErrorCode::invalid_argument, "CSV row width mismatch");
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) body_ += ',';
    body_ += format_double(values[i]);
  }
  body_ += '\n';
  ++rows_;
}

std::string CsvTable::str() const {
  std::string out;
  for (const auto& c : comments_) out += "# " + c + "\n";
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    if (i) out += ',';
    out += columns_[i];
  }
  out += '\n';
  return out + body_;
}

void CsvTable::write(const std::filesystem::path& path) const { write_text(path, str()); }

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::io, "cannot open " + path.string() + " for writing");
  out << text;
  out.close();
  if (!out) fail(ErrorCode::io, "failed writing " + path.string());
}

}  // namespace berry_ring
