#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "berry_ring/evolution.hpp"
#include "berry_ring/paths.hpp"
#include "berry_ring/zener.hpp"

namespace berry_ring {

enum class Scenario { trajectory, sweep_alpha, sweep_lambda, spectrum, broadening, frenet_demo };

const char* to_string(Scenario scenario) noexcept;
std::optional<Scenario> parse_scenario(std::string_view name);

struct CouplerConfig {
  double xi_c = 1e-2;
  double xi_l = 1e-4;
  std::optional<double> theta_t;    // unset: calibrated
  std::optional<double> alpha_res;  // unset: deepest dip on the sweep grid
};

struct AlphaSweepConfig {
  double min = -0.6;
  double max = 0.6;
  std::size_t count = 2401;
  double fwhm_window = 0.03;  // half width of the re-sweep window about the dip
  std::size_t fwhm_points = 241;
  double phase_probe = 0.1;
};

struct LambdaSweepConfig {
  double min = 0.0;
  double max = 3.0;
  double step = 0.01;
  ZenerMethod method = ZenerMethod::numeric_monodromy;
  std::size_t zeros = 3;
  double zero_resolution = 0.01;
  double zero_tolerance = 1e-6;
};

struct TrajectoryConfig {
  double lambda = 5.0;
  std::size_t samples = 2001;
  double ring_alpha = 0.2;
  std::size_t ring_samples = 2001;
};

struct SpectrumConfig {
  double alpha = 0.0;  // unset theta_t/alpha_res calibrate as in sweep-alpha
  double min = -0.05;
  double max = 0.05;
  std::size_t count = 1001;
};

struct BroadeningConfig {
  double q = 500.0;
  std::vector<double> delta_vartheta{0.0, 0.001, 0.002, 0.005, 0.01};
  double min = -0.02;
  double max = 0.02;
  std::size_t count = 801;
};

struct FrenetConfig {
  std::optional<std::string> curve_csv;  // unset: helix below
  double radius = 1.0;
  double pitch = 0.25;  // helix (a cos t, a sin t, b t) with b = pitch
  double turns = 2.0;
  std::size_t samples = 4001;
};

struct RunConfig {
  Scenario scenario = Scenario::sweep_alpha;
  RingParams ring{};
  CouplerConfig coupler{};
  IntegrationConfig integration{};
  unsigned threads = 0;
  AlphaSweepConfig sweep_alpha{};
  LambdaSweepConfig sweep_lambda{};
  TrajectoryConfig trajectory{};
  SpectrumConfig spectrum{};
  BroadeningConfig broadening{};
  FrenetConfig frenet{};
  std::string output_dir = "out";

  // Sorted-key JSON of the fully merged configuration and its FNV-1a 64 hash.
  std::string canonical;
  std::uint64_t hash = 0;
};

// Default configuration as canonical JSON text.
std::string default_config_text();

struct ConfigSource {
  std::optional<std::filesystem::path> file;
  std::vector<std::string> overrides;  // "dotted.key=value"; value parsed as JSON, else taken as a string
  std::optional<std::string> scenario;
  std::optional<std::string> output_dir;          // wins over everything
  std::optional<std::string> default_output_dir;  // replaces the built-in default only
};

// Merges defaults, the file, then overrides; validates every parameter.
// Throws ErrorCode::config (with the parameter path) or ErrorCode::io.
RunConfig load_config(const ConfigSource& source);

// Parses a JSON document given as text (same merge and validation).
RunConfig load_config_text(std::string_view text, std::span<const std::string> overrides = {});

std::uint64_t fnv1a64(std::string_view data) noexcept;

}  // namespace berry_ring
