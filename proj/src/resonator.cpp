#include "berry_ring/resonator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "berry_ring/error.hpp"
#include "berry_ring/parallel.hpp"

namespace berry_ring {

namespace {

constexpr double pi = std::numbers::pi;

void require_unit_interval(double v, const char* what) {
  if (!(std::isfinite(v) && v >= 0.0 && v <= 1.0)) fail(ErrorCode::invalid_argument, std::string(what) + " must be in [0, 1]");
}

}  // namespace

CouplerParams CouplerParams::from_loss(double xi_c, double theta_t, double xi_l) {
  require_unit_interval(xi_c, "xi_c");
  require_unit_interval(xi_l, "xi_l");
  require_finite(theta_t, "theta_t");
  CouplerParams p;
  const double mag = 1.0 - xi_c;
  p.t = std::polar(mag, theta_t);
  p.r = std::sqrt(std::max(0.0, 1.0 - mag * mag));
  p.theta_t = theta_t;
  p.xi_c = xi_c;
  p.xi_l = xi_l;
  return p;
}

void validate(const CouplerParams& p) {
  require_unit_interval(p.xi_c, "xi_c");
  require_unit_interval(p.xi_l, "xi_l");
  if (!(std::abs(std::norm(p.t) + std::norm(p.r) - 1.0) <= 1e-12)) {
    fail(ErrorCode::invalid_argument, "coupler is not unitary: |t|^2 + |r|^2 != 1");
  }
  if (!(std::abs(std::abs(p.t) - (1.0 - p.xi_c)) <= 1e-12)) {
    fail(ErrorCode::invalid_argument, "coupler |t| does not equal 1 - xi_c");
  }
}

PortVector coupler_apply(const CouplerParams& p, const PortVector& a) {
  validate(p);
  const Complex rs = std::conj(p.r);
  const Complex ts = std::conj(p.t);
  return {p.t * a.up_1 + p.r * a.up_2, -rs * a.up_1 + ts * a.up_2, p.t * a.down_1 + p.r * a.down_2,
          -rs * a.down_1 + ts * a.down_2};
}

TransferMatrix s_matrix(const TransferMatrix& m, const CouplerParams& p) {
  validate(p);
  const TransferMatrix lossy = Complex{1.0 - p.xi_l, 0.0} * m;
  const TransferMatrix mi = inverse(lossy);
  const TransferMatrix id = TransferMatrix::identity();
  const TransferMatrix num = id - p.t * mi;
  const TransferMatrix den = std::conj(p.t) * id - mi;
  TransferMatrix den_inv;
  try {
    den_inv = inverse(den);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::singular_matrix) throw;
    fail(ErrorCode::singularity, "s_matrix: t* I - M^{-1} is singular (resonance pole)");
  }
  const TransferMatrix s = num * den_inv;
  const double scale = std::max(1.0, std::abs(num.m11) + std::abs(num.m12) + std::abs(num.m21) + std::abs(num.m22)) *
                       std::max(1.0, std::abs(den_inv.m11) + std::abs(den_inv.m12) + std::abs(den_inv.m21) +
                                         std::abs(den_inv.m22));
  if (!(max_abs_diff(s, den_inv * num) < 1e-10 * scale)) {
    fail(ErrorCode::numerical, "s_matrix: factors do not commute");
  }
  return s;
}

Complex transmission_near_resonance(double vartheta, double xi_l, double xi_c, double theta_t) {
  require_finite(vartheta, "vartheta");
  require_unit_interval(xi_l, "xi_l");
  require_unit_interval(xi_c, "xi_c");
  require_finite(theta_t, "theta_t");
  const Complex num{xi_l - xi_c, -vartheta};
  const Complex den{xi_l + xi_c, -vartheta};
  if (den == Complex{}) fail(ErrorCode::singularity, "transmission_near_resonance: zero denominator");
  return std::polar(1.0, theta_t) * num / den;
}

double transmission_critical(double vartheta, double q) {
  require_finite(vartheta, "vartheta");
  if (!(std::isfinite(q) && q > 0.0)) fail(ErrorCode::invalid_argument, "Q must be positive");
  const double x = q * vartheta;
  return x * x / (1.0 + x * x);
}

double linewidth_phase(double rel_linewidth, double ring_length, double wavelength) {
  if (!(std::isfinite(rel_linewidth) && rel_linewidth >= 0.0)) {
    fail(ErrorCode::invalid_argument, "relative linewidth must be non-negative");
  }
  if (!(std::isfinite(ring_length) && ring_length > 0.0 && std::isfinite(wavelength) && wavelength > 0.0)) {
    fail(ErrorCode::invalid_argument, "ring length and wavelength must be positive");
  }
  return 2.0 * pi * rel_linewidth * ring_length / wavelength;
}

double broadened_transmission(double vartheta, double q, double delta_vartheta) {
  require_finite(vartheta, "vartheta");
  if (!(std::isfinite(q) && q > 0.0)) fail(ErrorCode::invalid_argument, "Q must be positive");
  if (!(std::isfinite(delta_vartheta) && delta_vartheta >= 0.0)) {
    fail(ErrorCode::invalid_argument, "linewidth must be non-negative");
  }
  const double g = 1.0 + q * delta_vartheta;
  const double x = q * vartheta / g;
  return 1.0 - (1.0 / g) / (1.0 + x * x);
}

FwhmResult fwhm(std::span<const double> x, std::span<const double> y, Extremum orientation,
                std::optional<double> baseline) {
  require(x.size() == y.size() && x.size() >= 3, ErrorCode::invalid_argument, "fwhm needs matching samples");
  const bool dip = orientation == Extremum::dip;
  const auto ext_it = dip ? std::min_element(y.begin(), y.end()) : std::max_element(y.begin(), y.end());
  const std::size_t i = static_cast<std::size_t>(ext_it - y.begin());
  const double base = baseline ? *baseline : (dip ? *std::max_element(y.begin(), y.end())
                                                  : *std::min_element(y.begin(), y.end()));
  FwhmResult r;
  r.center = x[i];
  r.extremum = y[i];
  r.level = 0.5 * (r.extremum + base);
  auto outside = [&](double v) { return dip ? v >= r.level : v <= r.level; };
  auto cross = [&](std::size_t a, std::size_t b) {
    const double t = (r.level - y[a]) / (y[b] - y[a]);
    return x[a] + t * (x[b] - x[a]);
  };
  std::size_t j = i;
  while (j > 0 && !outside(y[j - 1])) --j;
  if (j == 0) fail(ErrorCode::analysis, "fwhm: no half-level crossing left of the extremum");
  r.left = cross(j - 1, j);
  std::size_t k = i;
  while (k + 1 < y.size() && !outside(y[k + 1])) ++k;
  if (k + 1 == y.size()) fail(ErrorCode::analysis, "fwhm: no half-level crossing right of the extremum");
  r.right = cross(k, k + 1);
  r.width = r.right - r.left;
  return r;
}

namespace {

std::vector<double> linspace(double lo, double hi, std::size_t n) {
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) {
    v[i] = i + 1 == n ? hi : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  }
  return v;
}

// Crossing of `level` inside [lo, hi], searched on a fine grid.
std::optional<double> local_crossing(const std::function<double(double)>& f, double lo, double hi, double level,
                                     std::size_t n) {
  const auto xs = linspace(lo, hi, n);
  double fa = f(xs[0]);
  for (std::size_t i = 1; i < n; ++i) {
    const double fb = f(xs[i]);
    if ((fa - level) * (fb - level) <= 0.0 && fa != fb) {
      return xs[i - 1] + (level - fa) / (fb - fa) * (xs[i] - xs[i - 1]);
    }
    fa = fb;
  }
  return std::nullopt;
}

}  // namespace

FwhmResult fwhm_refined(const std::function<double(double)>& f, double lo, double hi, std::size_t n,
                        Extremum orientation, std::optional<double> baseline) {
  require(n >= 5 && hi > lo, ErrorCode::invalid_argument, "fwhm_refined needs a non-empty grid");
  const auto xs = linspace(lo, hi, n);
  std::vector<double> ys(n);
  for (std::size_t i = 0; i < n; ++i) ys[i] = f(xs[i]);
  FwhmResult r = fwhm(xs, ys, orientation, baseline);
  const double base = 2.0 * r.level - r.extremum;
  const bool dip = orientation == Extremum::dip;

  double h = (hi - lo) / static_cast<double>(n - 1);
  constexpr std::size_t local = 41;
  for (int iter = 0; iter < 8; ++iter) {
    // Sharpen the extremum first; the level follows it.
    const auto cx = linspace(r.center - 2.0 * h, r.center + 2.0 * h, local);
    for (double x : cx) {
      const double v = f(x);
      if (dip ? v < r.extremum : v > r.extremum) {
        r.extremum = v;
        r.center = x;
      }
    }
    const double level = 0.5 * (r.extremum + base);
    const auto left = local_crossing(f, r.left - 2.0 * h, r.left + 2.0 * h, level, local);
    const auto right = local_crossing(f, r.right - 2.0 * h, r.right + 2.0 * h, level, local);
    if (!left || !right) fail(ErrorCode::analysis, "fwhm_refined: lost the half-level crossing while refining");
    const double width = *right - *left;
    const double change = std::abs(width - r.width);
    r.left = *left;
    r.right = *right;
    r.level = level;
    r.width = width;
    h *= 4.0 / static_cast<double>(local - 1);
    if (change < 0.01 * std::abs(width)) return r;
  }
  fail(ErrorCode::analysis, "fwhm_refined: width did not stabilize");
}

std::vector<double> unwrap_phase(std::span<const double> phases) {
  std::vector<double> out(phases.begin(), phases.end());
  double shift = 0.0;
  for (std::size_t i = 1; i < out.size(); ++i) {
    const double d = phases[i] - phases[i - 1];
    if (d > pi) shift -= 2.0 * pi * std::round(d / (2.0 * pi));
    else if (d < -pi) shift -= 2.0 * pi * std::round(d / (2.0 * pi));
    out[i] = phases[i] + shift;
  }
  return out;
}

double phase_step(std::span<const double> x, std::span<const double> unwrapped, double x0, double probe) {
  require(x.size() == unwrapped.size() && x.size() >= 2, ErrorCode::invalid_argument,
          "phase_step needs matching samples");
  auto at = [&](double xq) {
    if (xq < x.front() || xq > x.back()) fail(ErrorCode::analysis, "phase_step: probe outside the sweep");
    auto it = std::lower_bound(x.begin(), x.end(), xq);
    std::size_t b = std::max<std::size_t>(1, static_cast<std::size_t>(it - x.begin()));
    b = std::min(b, x.size() - 1);
    const std::size_t a = b - 1;
    const double t = (xq - x[a]) / (x[b] - x[a]);
    return unwrapped[a] + t * (unwrapped[b] - unwrapped[a]);
  };
  return at(x0 + probe) - at(x0 - probe);
}

double p11_of(const TransferMatrix& m, double xi_c, double xi_l, double theta_t) {
  return std::norm(s_matrix(m, CouplerParams::from_loss(xi_c, theta_t, xi_l)).m11);
}

std::vector<TransferMatrix> monodromies(std::span<const double> alphas, const SweepSettings& settings) {
  validate(settings.ring);
  validate(settings.integration);
  std::vector<TransferMatrix> out(alphas.size());
  parallel_for(alphas.size(), settings.threads, [&](std::size_t i) {
    out[i] = monodromy(standard_ring(alphas[i], settings.ring), settings.integration);
  });
  return out;
}

namespace {

double angle_distance(double a, double b) { return std::abs(std::remainder(a - b, 2.0 * pi)); }

struct Candidate {
  double p = 2.0;
  double theta = 0.0;
};

Candidate best_branch(const TransferMatrix& m, const SweepSettings& s) {
  Candidate best;
  for (const Complex& lambda : eigenvalues(m)) {
    const double theta = std::arg(lambda);
    const double p = p11_of(m, s.xi_c, s.xi_l, theta);
    if (p < best.p) best = {p, theta};
  }
  return best;
}

Candidate tracked_branch(const TransferMatrix& m, const SweepSettings& s, double near) {
  const auto ev = eigenvalues(m);
  const double t0 = std::arg(ev[0]);
  const double t1 = std::arg(ev[1]);
  const double theta = angle_distance(t0, near) <= angle_distance(t1, near) ? t0 : t1;
  return {p11_of(m, s.xi_c, s.xi_l, theta), theta};
}

}  // namespace

Calibration calibrate_theta_t(std::span<const double> alphas, const SweepSettings& settings,
                              std::optional<double> alpha_res) {
  if (alpha_res) {
    const Candidate c = best_branch(monodromy(standard_ring(*alpha_res, settings.ring), settings.integration), settings);
    return {c.theta, *alpha_res, c.p};
  }
  const auto ms = monodromies(alphas, settings);
  return calibrate_theta_t(alphas, ms, settings);
}

Calibration calibrate_theta_t(std::span<const double> alphas, std::span<const TransferMatrix> ms,
                              const SweepSettings& settings) {
  require(alphas.size() >= 3 && ms.size() == alphas.size(), ErrorCode::invalid_argument,
          "calibration needs at least three alpha values with monodromies");
  std::size_t best_i = 0;
  Candidate best;
  for (std::size_t i = 0; i < ms.size(); ++i) {
    const Candidate c = best_branch(ms[i], settings);
    if (c.p < best.p) {
      best = c;
      best_i = i;
    }
  }
  const double track = best.theta;
  auto g = [&](double x) {
    return tracked_branch(monodromy(standard_ring(x, settings.ring), settings.integration), settings, track);
  };
  double a = alphas[best_i == 0 ? 0 : best_i - 1];
  double b = alphas[std::min(best_i + 1, alphas.size() - 1)];
  constexpr double phi = 0.6180339887498949;
  double c = b - phi * (b - a), d = a + phi * (b - a);
  Candidate gc = g(c), gd = g(d);
  while (b - a > 1e-8 * std::max(1.0, std::abs(a) + std::abs(b))) {
    if (gc.p < gd.p) {
      b = d; d = c; gd = gc;
      c = b - phi * (b - a); gc = g(c);
    } else {
      a = c; c = d; gc = gd;
      d = a + phi * (b - a); gd = g(d);
    }
  }
  const double xm = 0.5 * (a + b);
  const Candidate fin = g(xm);
  if (fin.p < best.p) return {fin.theta, xm, fin.p};
  return {best.theta, alphas[best_i], best.p};
}

SweepResult modulator_sweep(std::span<const double> alphas, const SweepSettings& settings, double theta_t) {
  const auto ms = monodromies(alphas, settings);
  return modulator_sweep(alphas, ms, settings, theta_t);
}

SweepResult modulator_sweep(std::span<const double> alphas, std::span<const TransferMatrix> ms,
                            const SweepSettings& settings, double theta_t) {
  require(ms.size() == alphas.size(), ErrorCode::invalid_argument, "one monodromy per alpha is required");
  const CouplerParams coupler = CouplerParams::from_loss(settings.xi_c, theta_t, settings.xi_l);
  SweepResult result;
  result.theta_t = theta_t;
  result.rows.resize(alphas.size());
  std::vector<double> a11(alphas.size()), a22(alphas.size());
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    const TransferMatrix& m = ms[i];
    const TransferMatrix s = s_matrix(m, coupler);
    SweepRow& row = result.rows[i];
    row.alpha = alphas[i];
    row.m12_sq = std::norm(m.m12);
    row.p11 = std::norm(s.m11);
    row.p21 = std::norm(s.m21);
    a11[i] = std::arg(m.m11);
    a22[i] = std::arg(m.m22);
  }
  const auto u11 = unwrap_phase(a11);
  const auto u22 = unwrap_phase(a22);
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    result.rows[i].arg_m11 = u11[i];
    result.rows[i].arg_m22 = u22[i];
  }
  return result;
}

double adiabatic_phase_slope(const RingParams& ring, std::optional<double> alpha) {
  validate(ring);
  const FermiStepPerturbation f(1.0, ring.a_sharp, ring.b_width, ring.beta, ring.gamma);
  const double half = ring.beta / ring.gamma;
  auto integrand = [&](double s) {
    const double prof = f.profile(s);
    if (!alpha) return prof;
    const double k3 = ring.lambda1 * ring.gamma * ring.gamma * s / ring.beta;
    const double k2 = *alpha * prof;
    const double mag = std::hypot(k3, k2);
    return mag > 0.0 ? *alpha * prof * prof / mag : (*alpha >= 0.0 ? prof : -prof);
  };
  constexpr std::size_t panels = 40000;
  const double h = 2.0 * half / static_cast<double>(panels);
  double sum = integrand(-half) + integrand(half);
  for (std::size_t i = 1; i < panels; ++i) sum += (i % 2 ? 4.0 : 2.0) * integrand(-half + h * static_cast<double>(i));
  return sum * h / 3.0;
}

AdiabaticWidth adiabatic_resonance_width(double xi_c, double xi_l, const RingParams& ring,
                                         std::optional<double> alpha) {
  const double span = 10.0 * (xi_c + xi_l);
  require(span > 0.0, ErrorCode::invalid_argument, "xi_c + xi_l must be positive");
  auto t2 = [&](double v) { return std::norm(transmission_near_resonance(v, xi_l, xi_c)); };
  // Off resonance the transmission tends to one.
  const FwhmResult w = fwhm_refined(t2, -span, span, 2001, Extremum::dip, 1.0);
  AdiabaticWidth out;
  out.vartheta_fwhm = w.width;
  out.phase_slope = std::abs(adiabatic_phase_slope(ring, alpha));
  out.alpha_fwhm = out.vartheta_fwhm / out.phase_slope;
  return out;
}

}  // namespace berry_ring
