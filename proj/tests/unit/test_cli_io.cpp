#include <doctest.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "berry_ring/config.hpp"
#include "berry_ring/csv.hpp"
#include "berry_ring/error.hpp"
#include "berry_ring/scenario.hpp"

using namespace berry_ring;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("berry_ring_cli_io_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Table {
  std::vector<std::string> comments;
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

bool has_comment(const Table& t, const std::string& c) {
  return std::find(t.comments.begin(), t.comments.end(), c) != t.comments.end();
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  return out;
}

Table read_csv(const fs::path& p) {
  Table t;
  std::ifstream in(p);
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind("# ", 0) == 0) {
      REQUIRE(t.header.empty());
      t.comments.push_back(line.substr(2));
    } else if (t.header.empty()) {
      t.header = split(line);
    } else {
      std::vector<double> row;
      for (const auto& c : split(line)) row.push_back(std::stod(c));
      t.rows.push_back(row);
    }
  }
  return t;
}

std::string error_message(const std::function<void()>& f, ErrorCode expected) {
  try {
    f();
  } catch (const Error& e) {
    CHECK(e.code() == expected);
    return e.what();
  }
  FAIL("no error raised");
  return {};
}

RunConfig config_with(const std::vector<std::string>& overrides) {
  ConfigSource src;
  src.overrides = overrides;
  return load_config(src);
}

}  // namespace

TEST_CASE("defaults carry the physical parameter set") {
  const auto c = load_config({});
  CHECK(c.scenario == Scenario::sweep_alpha);
  CHECK(c.ring.beta == 5.0);
  CHECK(c.ring.lambda1 == 1.022);
  CHECK(c.ring.gamma == 1.0);
  CHECK(c.ring.a_sharp == 50.0);
  CHECK(c.ring.b_width == 0.6);
  CHECK(c.coupler.xi_c == 1e-2);
  CHECK(c.coupler.xi_l == 1e-4);
  CHECK_FALSE(c.coupler.theta_t.has_value());
  CHECK(c.output_dir == "out");
  CHECK(load_config_text(default_config_text()).hash == c.hash);
}

TEST_CASE("configuration errors name the parameter") {
  auto msg = error_message([] { config_with({"ring.beta=-2"}); }, ErrorCode::config);
  CHECK(msg.find("'ring.beta'") != std::string::npos);
  msg = error_message([] { load_config_text(R"({"ring": {"betta": 3}})"); }, ErrorCode::config);
  CHECK(msg.find("'ring.betta'") != std::string::npos);
  msg = error_message([] { config_with({"coupler.xi_c=1.5"}); }, ErrorCode::config);
  CHECK(msg.find("'coupler.xi_c'") != std::string::npos);
  msg = error_message([] { config_with({"sweep_alpha.count=\"many\""}); }, ErrorCode::config);
  CHECK(msg.find("'sweep_alpha.count'") != std::string::npos);
  msg = error_message([] { config_with({"ring.gamma=null"}); }, ErrorCode::config);
  CHECK(msg.find("'ring.gamma'") != std::string::npos);
  msg = error_message([] { config_with({"scenario=dance"}); }, ErrorCode::config);
  CHECK(msg.find("'scenario'") != std::string::npos);
  error_message([] { config_with({"ring=3"}); }, ErrorCode::config);
  error_message([] { config_with({"no-equals"}); }, ErrorCode::config);
  error_message([] { load_config_text("{ not json"); }, ErrorCode::config);
  ConfigSource missing;
  missing.file = "/nonexistent/berry.json";
  error_message([&] { load_config(missing); }, ErrorCode::io);
}

TEST_CASE("overrides, nullable keys and precedence") {
  const auto c = config_with({"ring.beta=4.5", "coupler.theta_t=-1.5", "sweep_lambda.method=perturbative-integral",
                              "frenet.curve_csv=curve.csv", "output.dir=results"});
  CHECK(c.ring.beta == 4.5);
  CHECK(c.coupler.theta_t == -1.5);
  CHECK(c.sweep_lambda.method == ZenerMethod::perturbative_integral);
  CHECK(c.frenet.curve_csv == "curve.csv");
  CHECK(c.output_dir == "results");

  const fs::path dir = scratch("precedence");
  fs::create_directories(dir);
  std::ofstream(dir / "c.json") << R"({"scenario": "trajectory", "ring": {"beta": 6}, "output": {"dir": "from-file"}})";
  ConfigSource src;
  src.file = dir / "c.json";
  src.default_output_dir = "from-env";
  CHECK(load_config(src).output_dir == "from-file");
  CHECK(load_config(src).scenario == Scenario::trajectory);
  src.scenario = "spectrum";
  src.overrides = {"ring.beta=7"};
  src.output_dir = "from-flag";
  const auto d = load_config(src);
  CHECK(d.scenario == Scenario::spectrum);
  CHECK(d.ring.beta == 7.0);
  CHECK(d.output_dir == "from-flag");

  ConfigSource env_only;
  env_only.default_output_dir = "from-env";
  CHECK(load_config(env_only).output_dir == "from-env");
  fs::remove_all(dir);
}

TEST_CASE("canonical form and hash") {
  const auto a = config_with({"ring.beta=4", "coupler.xi_l=2e-4"});
  const auto b = load_config_text(R"({"coupler": {"xi_l": 0.0002}, "ring": {"beta": 4.0}})");
  CHECK(a.canonical == b.canonical);
  CHECK(a.hash == b.hash);
  CHECK(a.hash == fnv1a64(a.canonical));
  CHECK(config_with({"output.dir=elsewhere"}).hash == load_config({}).hash);
  CHECK(config_with({"sweep.threads=3"}).hash == load_config({}).hash);
  CHECK(config_with({"ring.beta=4.0000001"}).hash != a.hash);
  CHECK(fnv1a64("") == 14695981039346656037ull);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cull);
}

TEST_CASE("CSV number formatting round-trips with 17 digits") {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, 1.0, 12345678.9}) {
    const std::string s = format_double(v);
    double back = 0.0;
    std::from_chars(s.data(), s.data() + s.size(), back);
    CHECK(back == v);
  }
  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(format_double(-0.0) == "0");
  CHECK_THROWS_AS(format_double(NAN), Error);
}

TEST_CASE("CSV table layout") {
  CsvTable t({"a", "b"});
  t.comment("note one");
  t.row({1.0, 2.5});
  t.row({-3.0, 0.125});
  CHECK(t.rows() == 2);
  CHECK(t.str() == "# note one\na,b\n1,2.5\n-3,0.125\n");
  CHECK_THROWS_AS(t.row({1.0}), Error);
  CHECK_THROWS_AS(t.write("/nonexistent-dir/x.csv"), Error);
}

TEST_CASE("trajectory scenario") {
  const fs::path dir = scratch("trajectory");
  auto c = config_with({"scenario=trajectory", "trajectory.samples=401", "trajectory.ring_samples=101",
                        "integration.steps_per_unit_length=1000", "output.dir=" + dir.string()});
  const auto report = run_scenario(c);
  CHECK(report.files == std::vector<std::string>{"fig5.csv", "fig2.csv", "manifest.json"});
  const auto fig5 = read_csv(dir / "fig5.csv");
  CHECK(fig5.header == std::vector<std::string>{"s", "p1", "p2", "p3"});
  REQUIRE(fig5.rows.size() == 401);
  for (const auto& r : fig5.rows) CHECK(std::abs(r[1] * r[1] + r[2] * r[2] + r[3] * r[3] - 1.0) < 1e-8);
  CHECK(fig5.rows.front()[0] == doctest::Approx(-5.0));
  CHECK(fig5.rows.back()[0] == doctest::Approx(5.0));
  CHECK(has_comment(fig5, "scenario: trajectory"));
  const auto fig2 = read_csv(dir / "fig2.csv");
  CHECK(fig2.rows.size() == 101);
  fs::remove_all(dir);
}

TEST_CASE("sweep-lambda scenario") {
  const fs::path dir = scratch("lambda");
  const auto c = config_with({"scenario=sweep-lambda", "sweep_lambda.zeros=1", "output.dir=" + dir.string()});
  run_scenario(c);
  const auto fig6 = read_csv(dir / "fig6.csv");
  CHECK(fig6.header == std::vector<std::string>{"lambda", "p_z"});
  REQUIRE(fig6.rows.size() == 301);
  for (const auto& r : fig6.rows) CHECK(std::isfinite(r[1]));
  std::size_t first_min = 0;
  for (std::size_t i = 1; i + 1 < fig6.rows.size(); ++i) {
    if (fig6.rows[i][1] < fig6.rows[i - 1][1] && fig6.rows[i][1] <= fig6.rows[i + 1][1]) {
      first_min = i;
      break;
    }
  }
  CHECK(fig6.rows[first_min][0] == doctest::Approx(1.022).epsilon(0.01));
  CHECK(fig6.rows.front()[1] == doctest::Approx(1.0));
  const auto zeros = read_csv(dir / "fig6_zeros.csv");
  REQUIRE(zeros.rows.size() == 1);
  CHECK(zeros.rows[0][1] == doctest::Approx(1.022).epsilon(0.005));
  fs::remove_all(dir);
}

TEST_CASE("sweep-alpha schema, determinism and thread independence") {
  const fs::path a = scratch("alpha_a");
  const fs::path b = scratch("alpha_b");
  const fs::path c = scratch("alpha_c");
  const std::vector<std::string> common{"scenario=sweep-alpha", "sweep_alpha.min=-0.2", "sweep_alpha.max=0.2",
                                      "sweep_alpha.count=81", "sweep_alpha.fwhm_points=41",
                                      "integration.steps_per_unit_length=400"};
  auto with = [&](const fs::path& dir, const std::string& threads) {
    auto o = common;
    o.push_back("output.dir=" + dir.string());
    o.push_back("sweep.threads=" + threads);
    return config_with(o);
  };
  run_scenario(with(a, "1"));
  run_scenario(with(b, "1"));
  run_scenario(with(c, "3"));
  for (const char* f : {"fig3.csv", "fig3_summary.csv", "manifest.json"}) {
    CHECK(slurp(a / f) == slurp(b / f));
  }
  for (const char* f : {"fig3.csv", "fig3_summary.csv"}) CHECK(slurp(a / f) == slurp(c / f));

  const auto fig3 = read_csv(a / "fig3.csv");
  CHECK(fig3.header == std::vector<std::string>{"alpha", "m12_sq", "arg_m11", "arg_m22", "p11", "p21"});
  CHECK(fig3.rows.size() == 81);
  for (const auto& r : fig3.rows) {
    for (double v : r) CHECK(std::isfinite(v));
  }
  const auto summary = read_csv(a / "fig3_summary.csv");
  REQUIRE(summary.rows.size() == 1);
  CHECK(summary.header.front() == "theta_t");

  const auto manifest = nlohmann::json::parse(slurp(a / "manifest.json"));
  CHECK(manifest["scenario"] == "sweep-alpha");
  CHECK(manifest["config"]["sweep_alpha"]["count"] == 81);
  CHECK(manifest["integration"]["steps_per_unit_length"] == 400);
  CHECK(manifest["modules"].size() == 8);
  CHECK(manifest["config_hash"].get<std::string>().size() == 16);
  CHECK(has_comment(fig3, "config_hash: " + manifest["config_hash"].get<std::string>()));
  for (const auto& d : {a, b, c}) fs::remove_all(d);
}

TEST_CASE("spectrum, broadening and frenet-demo scenarios") {
  const fs::path dir = scratch("misc");
  const std::string out = "output.dir=" + dir.string();
  run_scenario(config_with({"scenario=spectrum", "spectrum.alpha=0.2", "spectrum.count=101",
                            "integration.steps_per_unit_length=400", out}));
  run_scenario(config_with({"scenario=broadening", "broadening.count=41", out}));
  run_scenario(config_with({"scenario=frenet-demo", "frenet.samples=801", out}));
  const auto spectrum = read_csv(dir / "spectrum.csv");
  CHECK(spectrum.rows.size() == 101);
  for (const auto& r : spectrum.rows) CHECK(r[1] + r[2] <= 1.0 + 1e-12);
  const auto br = read_csv(dir / "broadening.csv");
  CHECK(br.header == std::vector<std::string>{"vartheta", "delta_vartheta", "t_bar", "t_critical"});
  CHECK(br.rows.size() == 41 * 5);
  const auto fr = read_csv(dir / "frenet.csv");
  REQUIRE(fr.rows.size() > 700);
  const double a = 1.0;
  const double b = 0.25;
  for (const auto& r : fr.rows) {
    CHECK(std::abs(r[1] - a / (a * a + b * b)) < 1e-6);
    CHECK(std::abs(r[2] - b / (a * a + b * b)) < 1e-6);
  }
  error_message([&] { run_scenario(config_with({"scenario=spectrum", "coupler.xi_c=0", out})); },
                ErrorCode::config);
  fs::remove_all(dir);
}

TEST_CASE("plot scripts") {
  const fs::path dir = scratch("plots");
  fs::create_directories(dir);
  error_message([&] { emit_plots(dir); }, ErrorCode::io);
  error_message([&] { emit_plots(dir / "absent"); }, ErrorCode::io);
  const std::vector<std::string> missing{"fig3.csv"};
  error_message([&] { emit_plots(dir, missing); }, ErrorCode::io);

  run_scenario(config_with({"scenario=sweep-lambda", "sweep_lambda.step=0.1", "sweep_lambda.zeros=0",
                            "output.dir=" + dir.string()}));
  std::ofstream(dir / "fig3.csv") << "alpha,m12_sq,arg_m11,arg_m22,p11,p21\n0,0,0,0,0,0\n";
  const auto scripts = emit_plots(dir);
  CHECK(scripts == std::vector<std::string>{"fig3.gp", "fig6.gp"});
  const std::string fig3 = slurp(dir / "fig3.gp");
  CHECK(fig3.find("layout 3,1") != std::string::npos);
  CHECK(fig3.find("'fig3.csv'") != std::string::npos);
  const std::string fig6 = slurp(dir / "fig6.gp");
  CHECK(fig6.find("multiplot") == std::string::npos);
  CHECK(fig6.find("'fig6.csv'") != std::string::npos);
  CHECK(fig6.find(dir.string()) == std::string::npos);
  fs::remove_all(dir);
}
