#pragma once

#include <filesystem>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace berry_ring {

// Fixed 17 significant digits, general notation.
std::string format_double(double value);

class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> columns);

  void comment(const std::string& line);
  void row(std::span<const double> values);
  void row(std::initializer_list<double> values) { row(std::span<const double>(values.begin(), values.size())); }

  std::size_t rows() const { return rows_; }
  std::string str() const;

  // Throws ErrorCode::io on failure.
  void write(const std::filesystem::path& path) const;

 private:
  std::vector<std::string> columns_;
  std::vector<std::string> comments_;
  std::string body_;
  std::size_t rows_ = 0;
};

// Writes text to a file, throwing ErrorCode::io on failure.
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace berry_ring
