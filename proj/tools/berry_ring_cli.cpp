#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "berry_ring/berry_ring.h"

namespace {

constexpr int exit_ok = 0;
constexpr int exit_config = 2;
constexpr int exit_numerical = 3;
constexpr int exit_io = 4;

int exit_code(br_status s) {
  switch (s) {
    case BR_OK: return exit_ok;
    case BR_ERR_CONFIG: return exit_config;
    case BR_ERR_IO: return exit_io;
    default: return exit_numerical;
  }
}

int report(br_status s, const std::string& context) {
  std::fprintf(stderr, "berry-ring: %s: %s: %s\n", context.c_str(), br_status_string(s), br_last_error_message());
  return exit_code(s);
}

struct ConfigHandle {
  br_config* ptr = nullptr;
  ~ConfigHandle() { br_config_destroy(ptr); }
};

int run_scenario(const std::string& scenario, const std::string& config_path, const std::vector<std::string>& sets,
                 const std::string& out_dir, bool plots) {
  const char* env_out = std::getenv("BERRY_RING_OUT");
  ConfigHandle cfg;
  br_status s = br_config_create(config_path.empty() ? nullptr : config_path.c_str(), scenario.c_str(),
                                 (env_out && *env_out) ? env_out : nullptr, &cfg.ptr);
  if (s != BR_OK) return report(s, "configuration");
  for (const auto& kv : sets) {
    s = br_config_set(cfg.ptr, kv.c_str());
    if (s != BR_OK) return report(s, "--set " + kv);
  }
  if (!out_dir.empty()) {
    s = br_config_set_output_dir(cfg.ptr, out_dir.c_str());
    if (s != BR_OK) return report(s, "--out");
  }
  std::uint64_t hash = 0;
  br_config_hash(cfg.ptr, &hash);
  std::fprintf(stderr, "berry-ring %s: scenario %s, config %016llx\n", br_version(), scenario.c_str(),
               static_cast<unsigned long long>(hash));
  s = br_run(cfg.ptr);
  if (s != BR_OK) return report(s, "scenario " + scenario);
  const std::string dir = br_config_output_dir(cfg.ptr);
  if (plots) {
    s = br_emit_plots(dir.c_str());
    if (s != BR_OK) return report(s, "plots");
  }
  std::printf("%s\n", dir.c_str());
  return exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Polarization transport and ring-resonator modulator simulations"};
  app.require_subcommand(1);
  app.set_version_flag("--version", br_version());

  std::string config_path;
  std::vector<std::string> sets;
  std::string out_dir;
  bool plots = false;
  std::string chosen;

  for (const char* name : {"trajectory", "sweep-alpha", "sweep-lambda", "spectrum", "broadening", "frenet-demo"}) {
    auto* sub = app.add_subcommand(name, std::string("Run the ") + name + " scenario");
    sub->add_option("--config", config_path, "JSON configuration file");
    sub->add_option("--set", sets, "Override a dotted key, e.g. --set ring.beta=4");
    sub->add_option("--out", out_dir, "Output directory (default: $BERRY_RING_OUT or output.dir)");
    sub->add_flag("--plots", plots, "Also write gnuplot scripts");
    sub->callback([&chosen, name] { chosen = name; });
  }

  std::string plot_dir;
  auto* plot_cmd = app.add_subcommand("plots", "Write gnuplot scripts for the CSVs in a result directory");
  plot_cmd->add_option("dir", plot_dir, "Result directory")->required();

  auto* defaults_cmd = app.add_subcommand("defaults", "Print the default configuration");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? exit_ok : exit_config;
  }

  if (defaults_cmd->parsed()) {
    std::printf("%s\n", br_default_config());
    return exit_ok;
  }
  if (plot_cmd->parsed()) {
    const br_status s = br_emit_plots(plot_dir.c_str());
    return s == BR_OK ? exit_ok : report(s, "plots");
  }
  return run_scenario(chosen, config_path, sets, out_dir, plots);
}
