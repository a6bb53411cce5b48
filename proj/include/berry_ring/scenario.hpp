#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "berry_ring/config.hpp"

namespace berry_ring {

inline constexpr const char* library_version = "1.0.0";

struct RunReport {
  std::filesystem::path output_dir;
  std::vector<std::string> files;  // relative to output_dir, in write order
};

// Runs the configured scenario and writes its CSVs plus manifest.json.
// Errors keep their library codes; output failures are ErrorCode::io.
RunReport run_scenario(const RunConfig& config);

// Writes one gnuplot script per result CSV found in `dir` (or per name in
// `csv_names`). Missing files or a directory without results are I/O errors.
std::vector<std::string> emit_plots(const std::filesystem::path& dir, std::span<const std::string> csv_names = {});

}  // namespace berry_ring
