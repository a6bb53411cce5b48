#include "berry_ring/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <numbers>

#include <json.hpp>

#include "berry_ring/adiabatic.hpp"
#include "berry_ring/csv.hpp"
#include "berry_ring/error.hpp"
#include "berry_ring/evolution.hpp"
#include "berry_ring/frenet.hpp"
#include "berry_ring/parallel.hpp"
#include "berry_ring/resonator.hpp"
#include "berry_ring/zener.hpp"

namespace berry_ring {

namespace fs = std::filesystem;

namespace {

std::vector<double> linspace(double lo, double hi, std::size_t n) {
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) {
    v[i] = i + 1 == n ? hi : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  }
  return v;
}

std::string hex64(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

class Output {
 public:
  explicit Output(const RunConfig& cfg) : cfg_(cfg), dir_(cfg.output_dir) {
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec || !fs::is_directory(dir_)) fail(ErrorCode::io, "cannot create output directory " + dir_.string());
  }

  void write(const std::string& name, CsvTable table) {
    table.comment(std::string("scenario: ") + to_string(cfg_.scenario));
    table.comment("config_hash: " + hex64(cfg_.hash));
    table.comment("steps_per_unit_length: " + std::to_string(cfg_.integration.steps_per_unit_length));
    table.write(dir_ / name);
    files_.push_back(name);
  }

  RunReport finish() {
    nlohmann::json m;
    m["scenario"] = to_string(cfg_.scenario);
    m["config"] = nlohmann::json::parse(cfg_.canonical);
    m["config_hash"] = hex64(cfg_.hash);
    m["version"] = library_version;
    m["modules"] = {{"spinor-core", library_version},      {"path-models", library_version},
                    {"evolution-engine", library_version}, {"adiabatic-geometry", library_version},
                    {"zener", library_version},            {"resonator", library_version},
                    {"frenet-geometry", library_version},  {"cli-io", library_version}};
    m["integration"] = {{"steps_per_unit_length", cfg_.integration.steps_per_unit_length},
                        {"sampling", "midpoint"}};
    m["outputs"] = files_;
    write_text(dir_ / "manifest.json", m.dump(2) + "\n");
    files_.push_back("manifest.json");
    return {dir_, files_};
  }

 private:
  const RunConfig& cfg_;
  fs::path dir_;
  std::vector<std::string> files_;
};

SweepSettings sweep_settings(const RunConfig& c) {
  SweepSettings s;
  s.ring = c.ring;
  s.xi_c = c.coupler.xi_c;
  s.xi_l = c.coupler.xi_l;
  s.integration = c.integration;
  s.threads = c.threads;
  return s;
}

void run_sweep_alpha(const RunConfig& c, Output& out) {
  const SweepSettings settings = sweep_settings(c);
  const auto alphas = linspace(c.sweep_alpha.min, c.sweep_alpha.max, c.sweep_alpha.count);
  const auto ms = monodromies(alphas, settings);

  Calibration cal;
  if (c.coupler.theta_t) {
    cal.theta_t = *c.coupler.theta_t;
    cal.alpha_res = std::numeric_limits<double>::quiet_NaN();
  } else if (c.coupler.alpha_res) {
    cal = calibrate_theta_t(alphas, settings, c.coupler.alpha_res);
  } else {
    cal = calibrate_theta_t(alphas, ms, settings);
  }
  const SweepResult sweep = modulator_sweep(alphas, ms, settings, cal.theta_t);

  CsvTable fig3({"alpha", "m12_sq", "arg_m11", "arg_m22", "p11", "p21"});
  std::vector<double> p11(alphas.size()), a11(alphas.size()), a22(alphas.size());
  double p11_max = 0.0, p21_max = 0.0;
  std::size_t argmin = 0;
  for (std::size_t i = 0; i < sweep.rows.size(); ++i) {
    const SweepRow& r = sweep.rows[i];
    fig3.row({r.alpha, r.m12_sq, r.arg_m11, r.arg_m22, r.p11, r.p21});
    p11[i] = r.p11;
    a11[i] = r.arg_m11;
    a22[i] = r.arg_m22;
    p11_max = std::max(p11_max, r.p11);
    p21_max = std::max(p21_max, r.p21);
    if (r.p11 < p11[argmin]) argmin = i;
  }
  fig3.comment("theta_t: " + format_double(cal.theta_t));
  out.write("fig3.csv", std::move(fig3));

  if (std::isnan(cal.alpha_res)) {
    cal.alpha_res = alphas[argmin];
    cal.floor = p11[argmin];
  }
  const CouplerParams coupler = CouplerParams::from_loss(settings.xi_c, cal.theta_t, settings.xi_l);
  auto p11_at = [&](double a) {
    return std::norm(s_matrix(monodromy(standard_ring(a, settings.ring), settings.integration), coupler).m11);
  };
  const double w = c.sweep_alpha.fwhm_window;
  const FwhmResult width = fwhm_refined(p11_at, cal.alpha_res - w, cal.alpha_res + w, c.sweep_alpha.fwhm_points,
                                        Extremum::dip);
  const double probe = c.sweep_alpha.phase_probe;
  const bool probe_ok = alphas.front() <= -probe && alphas.back() >= probe;
  const double step11 = probe_ok ? phase_step(alphas, a11, 0.0, probe) : 0.0;
  const double step22 = probe_ok ? phase_step(alphas, a22, 0.0, probe) : 0.0;
  const AdiabaticWidth adi = adiabatic_resonance_width(settings.xi_c, settings.xi_l, settings.ring);

  CsvTable summary({"theta_t", "alpha_res", "p11_floor", "fwhm", "fwhm_left", "fwhm_right", "p11_min", "p11_max",
                    "p21_max", "step_arg_m11", "step_arg_m22", "adiabatic_vartheta_fwhm", "adiabatic_phase_slope",
                    "adiabatic_alpha_fwhm"});
  if (!probe_ok) summary.comment("phase steps need the sweep to cover +/- phase_probe; reported as 0");
  summary.row({cal.theta_t, cal.alpha_res, cal.floor, width.width, width.left, width.right, p11[argmin], p11_max,
               p21_max, step11, step22, adi.vartheta_fwhm, adi.phase_slope,
               adi.alpha_fwhm});
  out.write("fig3_summary.csv", std::move(summary));
}

void run_sweep_lambda(const RunConfig& c, Output& out) {
  const auto& L = c.sweep_lambda;
  const auto n = static_cast<std::size_t>(std::floor((L.max - L.min) / L.step + 1e-9)) + 1;
  std::vector<double> lambdas(n), pz(n);
  for (std::size_t i = 0; i < n; ++i) lambdas[i] = L.min + L.step * static_cast<double>(i);

  LambdaZeroOptions opt;
  opt.method = L.method;
  opt.tolerance = L.zero_tolerance;
  opt.lambda_min = L.min;
  opt.lambda_max = L.max;
  opt.gamma = c.ring.gamma;
  opt.integration = c.integration;
  parallel_for(n, c.threads, [&](std::size_t i) { pz[i] = pz_half_circle(lambdas[i], opt); });

  CsvTable fig6({"lambda", "p_z"});
  fig6.comment(std::string("method: ") + to_string(L.method));
  for (std::size_t i = 0; i < n; ++i) fig6.row({lambdas[i], pz[i]});
  out.write("fig6.csv", std::move(fig6));

  if (L.zeros > 0) {
    const auto zeros = find_lambda_zeros(L.zeros, L.zero_resolution, opt);
    CsvTable z({"n", "lambda", "p_z"});
    for (std::size_t i = 0; i < zeros.size(); ++i) {
      z.row({static_cast<double>(i + 1), zeros[i], pz_half_circle(zeros[i], opt)});
    }
    out.write("fig6_zeros.csv", std::move(z));
  }
}

CsvTable bloch_table(const BlochTrajectory& tr) {
  CsvTable t({"s", "p1", "p2", "p3"});
  for (const auto& b : tr) t.row({b.s, b.p.p1, b.p.p2, b.p.p3});
  return t;
}

void run_trajectory(const RunConfig& c, Output& out) {
  // Half circle from the south pole, starting in the local up mode (P = -e3).
  const HalfCirclePath half(c.trajectory.lambda, c.ring.gamma, c.ring.k0);
  const EigenFrame start = eigenframe_from_angles(std::numbers::pi, 0.0);
  out.write("fig5.csv", bloch_table(trajectory(PathSegment{half}, start.up, c.integration, c.trajectory.samples)));

  const RingPath ring = standard_ring(c.trajectory.ring_alpha, c.ring);
  const EigenFrame coupler = eigenframe(ring.kappa_at(0.0));
  CsvTable t = bloch_table(trajectory(ring, coupler.up, c.integration, c.trajectory.ring_samples));
  t.comment("alpha: " + format_double(c.trajectory.ring_alpha));
  out.write("fig2.csv", std::move(t));
}

void run_spectrum(const RunConfig& c, Output& out) {
  const SweepSettings settings = sweep_settings(c);
  const TransferMatrix m = monodromy(standard_ring(c.spectrum.alpha, c.ring), c.integration);
  const double theta_t = c.coupler.theta_t ? *c.coupler.theta_t
                                           : calibrate_theta_t({}, settings, c.spectrum.alpha).theta_t;
  const CouplerParams coupler = CouplerParams::from_loss(c.coupler.xi_c, theta_t, c.coupler.xi_l);
  require(c.coupler.xi_c > 0.0, ErrorCode::config, "config 'coupler.xi_c': spectrum needs xi_c > 0");
  const double q = 1.0 / (2.0 * c.coupler.xi_c);
  CsvTable t({"vartheta", "p11", "p21", "t_near_sq", "t_critical"});
  t.comment("alpha: " + format_double(c.spectrum.alpha));
  t.comment("theta_t: " + format_double(theta_t));
  for (double v : linspace(c.spectrum.min, c.spectrum.max, c.spectrum.count)) {
    // Detuning enters as a common round-trip phase.
    const TransferMatrix s = s_matrix(std::polar(1.0, v) * m, coupler);
    t.row({v, std::norm(s.m11), std::norm(s.m21),
           std::norm(transmission_near_resonance(v, c.coupler.xi_l, c.coupler.xi_c)), transmission_critical(v, q)});
  }
  out.write("spectrum.csv", std::move(t));
}

void run_broadening(const RunConfig& c, Output& out) {
  const auto& b = c.broadening;
  CsvTable t({"vartheta", "delta_vartheta", "t_bar", "t_critical"});
  t.comment("q: " + format_double(b.q));
  for (double dv : b.delta_vartheta) {
    for (double v : linspace(b.min, b.max, b.count)) {
      t.row({v, dv, broadened_transmission(v, b.q, dv), transmission_critical(v, b.q)});
    }
  }
  out.write("broadening.csv", std::move(t));
}

void run_frenet(const RunConfig& c, Output& out) {
  std::vector<Vec3> pts;
  if (c.frenet.curve_csv) {
    pts = load_curve_csv(*c.frenet.curve_csv);
  } else {
    const double tmax = 2.0 * std::numbers::pi * c.frenet.turns;
    for (double t : linspace(0.0, tmax, c.frenet.samples)) {
      pts.push_back({c.frenet.radius * std::cos(t), c.frenet.radius * std::sin(t), c.frenet.pitch * t});
    }
  }
  const SpaceCurve curve = SpaceCurve::from_samples(pts);
  const auto frames = frenet_frames(curve);
  require(frames.size() >= 2, ErrorCode::invalid_argument, "curve too short for Frenet frames");

  // Geometric birefringence in (normal, binormal) components, starting from
  // linear polarization along the normal.
  std::vector<double> s;
  std::vector<Vec3> kappa;
  for (const auto& f : frames) {
    s.push_back(f.s);
    kappa.push_back(rytov_birefringence(f.torsion).kappa);
  }
  const PathSegment path{TabulatedPath(s, kappa)};
  const auto tr = trajectory(path, Spinor{}, c.integration, frames.size());

  CsvTable t({"s", "curvature", "torsion", "tx", "ty", "tz", "nx", "ny", "nz", "bx", "by", "bz", "p1", "p2", "p3"});
  for (std::size_t i = 0; i < frames.size(); ++i) {
    const auto& f = frames[i];
    const auto& p = tr[i].p;
    t.row({f.s, f.curvature, f.torsion, f.tangent.x, f.tangent.y, f.tangent.z, f.normal.x, f.normal.y, f.normal.z,
           f.binormal.x, f.binormal.y, f.binormal.z, p.p1, p.p2, p.p3});
  }
  out.write("frenet.csv", std::move(t));
}

}  // namespace

RunReport run_scenario(const RunConfig& config) {
  Output out(config);
  try {
    switch (config.scenario) {
      case Scenario::sweep_alpha: run_sweep_alpha(config, out); break;
      case Scenario::sweep_lambda: run_sweep_lambda(config, out); break;
      case Scenario::trajectory: run_trajectory(config, out); break;
      case Scenario::spectrum: run_spectrum(config, out); break;
      case Scenario::broadening: run_broadening(config, out); break;
      case Scenario::frenet_demo: run_frenet(config, out); break;
    }
  } catch (const Error& e) {
    if (e.code() == ErrorCode::config || e.code() == ErrorCode::io) throw;
    fail(e.code(), std::string("scenario ") + to_string(config.scenario) + ": " + e.what());
  }
  return out.finish();
}

namespace {

const std::string gp_header =
    "set datafile separator ','\n"
    "set datafile commentschars '#'\n"
    "set key autotitle columnhead\n"
    "set terminal pngcairo size 900,%H%\n";

std::string script_for(const std::string& csv, const std::string& png) {
  const std::string q = "'" + csv + "'";
  std::string body;
  int height = 600;
  if (csv == "fig3.csv") {
    height = 1200;
    body = "set multiplot layout 3,1\n"
           "set xlabel 'alpha'\n"
           "set ylabel '|M12|^2'\n"
           "plot " + q + " using 1:2 with lines title '|M12|^2'\n"
           "set ylabel 'phase [rad]'\n"
           "plot " + q + " using 1:3 with lines title 'arg M11', " + q + " using 1:4 with lines dt 2 title 'arg M22'\n"
           "set ylabel 'transmission'\n"
           "plot " + q + " using 1:5 with lines title 'P11', " + q + " using 1:6 with lines dt 2 title 'P21'\n"
           "unset multiplot\n";
  } else if (csv == "fig6.csv") {
    body = "set xlabel 'Lambda'\nset ylabel 'p_z'\n"
           "plot " + q + " using 1:2 with lines title 'p_z'\n";
  } else if (csv == "fig5.csv" || csv == "fig2.csv") {
    body = "set view equal xyz\nset xlabel 'P1'\nset ylabel 'P2'\nset zlabel 'P3'\n"
           "set parametric\nset urange [0:2*pi]\nset vrange [-pi/2:pi/2]\nset isosamples 24,12\n"
           "splot cos(u)*cos(v),sin(u)*cos(v),sin(v) with lines lc rgb '#cccccc' notitle, \\\n"
           "      " + q + " using 2:3:4 with lines lw 2 title 'P(s)'\n";
  } else if (csv == "spectrum.csv") {
    body = "set xlabel 'vartheta'\nset ylabel 'transmission'\n"
           "plot " + q + " using 1:2 with lines title 'P11', " + q + " using 1:3 with lines title 'P21', " + q +
           " using 1:4 with lines dt 2 title '|t|^2 near resonance'\n";
  } else if (csv == "broadening.csv") {
    body = "set xlabel 'vartheta'\nset ylabel 'mean transmission'\n"
           "plot " + q + " using 1:3:2 with lines lc variable title 'T_bar (colour: linewidth)'\n";
  } else if (csv == "frenet.csv") {
    height = 900;
    body = "set multiplot layout 2,1\nset xlabel 's'\n"
           "plot " + q + " using 1:2 with lines title 'curvature', " + q + " using 1:3 with lines title 'torsion'\n"
           "plot " + q + " using 1:13 with lines title 'P1', " + q + " using 1:14 with lines title 'P2', " + q +
           " using 1:15 with lines title 'P3'\n"
           "unset multiplot\n";
  } else {
    fail(ErrorCode::io, "no plot layout for " + csv);
  }
  std::string head = gp_header;
  head.replace(head.find("%H%"), 3, std::to_string(height));
  return head + "set output '" + png + "'\n" + body;
}

const std::vector<std::string> known_csvs{"fig3.csv", "fig6.csv", "fig5.csv", "fig2.csv",
                                          "spectrum.csv", "broadening.csv", "frenet.csv"};

}  // namespace

std::vector<std::string> emit_plots(const fs::path& dir, std::span<const std::string> csv_names) {
  if (!fs::is_directory(dir)) fail(ErrorCode::io, "result directory " + dir.string() + " does not exist");
  std::vector<std::string> names;
  if (csv_names.empty()) {
    for (const auto& n : known_csvs) {
      if (fs::is_regular_file(dir / n)) names.push_back(n);
    }
    if (names.empty()) fail(ErrorCode::io, "no result CSVs found in " + dir.string());
  } else {
    for (const auto& n : csv_names) {
      if (!fs::is_regular_file(dir / n)) fail(ErrorCode::io, "missing result file " + (dir / n).string());
      names.push_back(n);
    }
  }
  std::vector<std::string> scripts;
  for (const auto& n : names) {
    const std::string stem = fs::path(n).stem().string();
    const std::string gp = stem + ".gp";
    write_text(dir / gp, script_for(n, stem + ".png"));
    scripts.push_back(gp);
  }
  return scripts;
}

}  // namespace berry_ring
