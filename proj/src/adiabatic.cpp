#include "berry_ring/adiabatic.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <vector>

#include "berry_ring/error.hpp"

namespace berry_ring {

EigenFrame eigenframe_from_angles(double theta, double phi) {
  const double c = std::cos(0.5 * theta);
  const double s = std::sin(0.5 * theta);
  const Complex em = std::polar(1.0, -0.5 * phi);
  const Complex ep = std::polar(1.0, 0.5 * phi);
  EigenFrame f;
  f.up = {c * em, s * ep};
  f.down = {-s * em, c * ep};
  f.theta = theta;
  f.phi = phi;
  return f;
}

EigenFrame eigenframe(const BirefringenceSample& sample) {
  const double a = sample.magnitude();
  if (!(a > 1e-12)) fail(ErrorCode::degeneracy, "eigenframe: |kappa| <= 1e-12");
  // + 0.0 folds negative zeros so that phi = 0 on the 3-axis.
  const double phi = std::atan2(sample.kappa.y + 0.0, sample.kappa.x + 0.0);
  const double theta = std::acos(std::clamp(sample.kappa.z / a, -1.0, 1.0));
  EigenFrame f = eigenframe_from_angles(theta, phi);
  f.k_plus = sample.k0 + a;
  f.k_minus = sample.k0 - a;
  return f;
}

TransferMatrix basis_matrix(const EigenFrame& frame) { return TransferMatrix::from_columns(frame.up, frame.down); }

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

std::vector<Vec3> unit_samples(const RingPath& ring, std::size_t n) {
  require(n >= 3, ErrorCode::invalid_argument, "solid_angle needs at least three samples");
  const double len = ring.total_length();
  std::vector<Vec3> v(n);
  for (std::size_t k = 0; k < n; ++k) {
    const Vec3 kap = ring.kappa_at(len * static_cast<double>(k) / static_cast<double>(n)).kappa;
    const double m = norm(kap);
    if (!(m >= 1e-9)) fail(ErrorCode::degeneracy, "solid_angle: path passes through the origin (|kappa| < 1e-9)");
    v[k] = kap / m;
  }
  for (std::size_t k = 0; k < n; ++k) {
    if (dot(v[k], v[(k + 1) % n]) < 0.0) {
      fail(ErrorCode::degeneracy, "solid_angle: path crosses the origin between samples");
    }
  }
  return v;
}

// Normal of the plane through the origin containing every direction, if any.
bool plane_normal(const std::vector<Vec3>& v, Vec3& normal) {
  Vec3 best{};
  double best_norm = 0.0;
  for (const Vec3& w : v) {
    const Vec3 c = cross(v.front(), w);
    const double m = norm(c);
    if (m > best_norm) {
      best_norm = m;
      best = c;
    }
  }
  if (best_norm < 1e-6) return false;
  best = best / best_norm;
  for (const Vec3& w : v) {
    if (std::abs(dot(best, w)) > 1e-9) return false;
  }
  const double ax = std::abs(best.x), ay = std::abs(best.y), az = std::abs(best.z);
  const double lead = ax >= ay && ax >= az ? best.x : (ay >= az ? best.y : best.z);
  normal = lead < 0.0 ? -best : best;
  return true;
}

double planar_solid_angle(const std::vector<Vec3>& v, const Vec3& normal) {
  double turn = 0.0;
  for (std::size_t k = 0; k < v.size(); ++k) {
    const Vec3& a = v[k];
    const Vec3& b = v[(k + 1) % v.size()];
    turn += std::atan2(dot(normal, cross(a, b)), dot(a, b));
  }
  const double winding = turn / two_pi;
  const double n = std::round(winding);
  if (!(std::abs(winding - n) < 0.05)) {
    fail(ErrorCode::analysis, "solid_angle: planar winding number is not close to an integer");
  }
  return two_pi * n;
}

Vec3 reference_direction(const std::vector<Vec3>& v) {
  Vec3 best{0.0, 0.0, 1.0};
  double best_score = -1.0;
  for (int i = -1; i <= 1; ++i) {
    for (int j = -1; j <= 1; ++j) {
      for (int k = -1; k <= 1; ++k) {
        if (i == 0 && j == 0 && k == 0) continue;
        Vec3 r{static_cast<double>(i), static_cast<double>(j), static_cast<double>(k)};
        r = r / norm(r);
        double score = 2.0;
        for (const Vec3& w : v) score = std::min(score, 1.0 + dot(r, w));
        if (score > best_score) {
          best_score = score;
          best = r;
        }
      }
    }
  }
  return best;
}

double fan_solid_angle(const std::vector<Vec3>& v) {
  const Vec3 r = reference_direction(v);
  double omega = 0.0;
  for (std::size_t k = 0; k < v.size(); ++k) {
    const Vec3& a = v[k];
    const Vec3& b = v[(k + 1) % v.size()];
    omega += 2.0 * std::atan2(dot(r, cross(a, b)), 1.0 + dot(r, a) + dot(a, b) + dot(b, r));
  }
  // Defined modulo 4 pi; report the representative in (-2 pi, 2 pi].
  omega = std::remainder(omega, 2.0 * two_pi);
  if (omega <= -two_pi) omega += 2.0 * two_pi;
  return omega;
}

// Composite Simpson of f over [a, b] with an even number of panels.
template <class F>
double simpson(F&& f, double a, double b, std::size_t panels) {
  if (a == b) return 0.0;
  if (panels % 2) ++panels;
  const double h = (b - a) / static_cast<double>(panels);
  double sum = f(a) + f(b);
  for (std::size_t i = 1; i < panels; ++i) sum += (i % 2 ? 4.0 : 2.0) * f(a + h * static_cast<double>(i));
  return sum * h / 3.0;
}

}  // namespace

double solid_angle(const RingPath& ring, std::size_t n_samples) {
  const std::vector<Vec3> v = unit_samples(ring, n_samples);
  Vec3 normal;
  if (plane_normal(v, normal)) return planar_solid_angle(v, normal);
  return fan_solid_angle(v);
}

AdiabaticResult adiabatic_monodromy(const RingPath& ring, std::size_t n_samples) {
  AdiabaticPhases ph;
  ph.omega = solid_angle(ring, n_samples);
  ph.gamma_up = -0.5 * ph.omega;
  ph.gamma_down = 0.5 * ph.omega;

  const double len = ring.total_length();
  for (const PathSegment& seg : ring.segments()) {
    const Interval d = domain_of(seg);
    const double share = len > 0.0 ? d.length() / len : 1.0;
    const auto panels = std::max<std::size_t>(2, static_cast<std::size_t>(std::ceil(share * n_samples)));
    ph.dyn_up += simpson([&](double s) { const auto k = kappa_at(seg, s); return k.k0 + k.magnitude(); },
                         d.begin, d.end, panels);
    ph.dyn_down += simpson([&](double s) { const auto k = kappa_at(seg, s); return k.k0 - k.magnitude(); },
                           d.begin, d.end, panels);
  }
  ph.delta_up = ph.gamma_up + ph.dyn_up;
  ph.delta_down = ph.gamma_down + ph.dyn_down;
  return {TransferMatrix::diagonal(std::polar(1.0, ph.delta_up), std::polar(1.0, ph.delta_down)), ph};
}

}  // namespace berry_ring
