#include "berry_ring/zener.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>

#include "berry_ring/adiabatic.hpp"
#include "berry_ring/error.hpp"

namespace berry_ring {

const char* to_string(ZenerMethod method) noexcept {
  switch (method) {
    case ZenerMethod::perturbative_integral: return "perturbative-integral";
    case ZenerMethod::numeric_monodromy: return "numeric-monodromy";
    case ZenerMethod::closed_form: return "closed-form";
  }
  return "unknown";
}

namespace {

constexpr double pi = std::numbers::pi;

ZenerResult make(double p, ZenerMethod method, bool valid) {
  return {p, method, p > 1.0 + 1e-9, valid};
}

void require_lambda(double lambda) {
  if (!(std::isfinite(lambda) && lambda >= 0.0)) fail(ErrorCode::invalid_argument, "Lambda must be non-negative");
}

double j0_series(double x) {
  const long double q = -0.25L * static_cast<long double>(x) * static_cast<long double>(x);
  long double term = 1.0L;
  long double sum = 1.0L;
  long double comp = 0.0L;
  for (int k = 1; k < 200; ++k) {
    term *= q / (static_cast<long double>(k) * static_cast<long double>(k));
    // Neumaier compensated add.
    const long double t = sum + term;
    comp += std::fabs(sum) >= std::fabs(term) ? (sum - t) + term : (term - t) + sum;
    sum = t;
    if (std::fabs(term) < 1e-22L * std::max(1.0L, std::fabs(sum))) break;
  }
  return static_cast<double>(sum + comp);
}

double j0_asymptotic(double x) {
  // t_k = a_k(0) / x^k with a_k(0) = prod_{j<=k} (-(2j-1)^2) / (k! 8^k).
  double p = 1.0;
  double q = 0.0;
  double t = 1.0;
  double last = 1.0;
  for (int k = 1; k < 60; ++k) {
    const double odd = 2.0 * k - 1.0;
    t *= -(odd * odd) / (8.0 * k * x);
    if (std::abs(t) > last) break;
    last = std::abs(t);
    // P = sum (-1)^m a_{2m}/x^{2m}, Q = sum (-1)^m a_{2m+1}/x^{2m+1}.
    const int m = k / 2;
    const double sign = (m % 2) ? -1.0 : 1.0;
    if (k % 2 == 0) {
      p += sign * t;
    } else {
      q += sign * t;
    }
    if (last < 1e-17) break;
  }
  const double chi = x - 0.25 * pi;
  return std::sqrt(2.0 / (pi * x)) * (p * std::cos(chi) - q * std::sin(chi));
}

}  // namespace

double bessel_j0(double x) {
  require_finite(x, "bessel_j0 argument");
  x = std::abs(x);
  return x <= 17.0 ? j0_series(x) : j0_asymptotic(x);
}

ZenerResult pz_perturbative_planar(const PathSegment& segment, std::size_t n_quad) {
  require(n_quad >= 2, ErrorCode::invalid_argument, "n_quad must be at least 2");
  const Interval d = domain_of(segment);

  // Azimuth of the plane from the sample farthest from the 3-axis.
  const std::size_t probe = 1024;
  double rho_max = 0.0;
  double phi0 = 0.0;
  std::vector<Vec3> probes(probe + 1);
  for (std::size_t i = 0; i <= probe; ++i) {
    probes[i] = kappa_at(segment, d.begin + d.length() * static_cast<double>(i) / probe).kappa;
    const double rho = std::hypot(probes[i].x, probes[i].y);
    if (rho > rho_max) {
      rho_max = rho;
      phi0 = std::atan2(probes[i].y, probes[i].x);
    }
  }
  const double c = std::cos(phi0);
  const double s = std::sin(phi0);
  auto off_plane = [&](const Vec3& k) { return std::abs(-s * k.x + c * k.y); };
  for (const Vec3& k : probes) {
    if (off_plane(k) > 1e-9 * std::max(1.0, norm(k))) {
      fail(ErrorCode::invalid_argument, "pz_perturbative_planar: path is not planar with constant azimuth");
    }
  }
  if (d.length() == 0.0) return make(0.0, ZenerMethod::perturbative_integral, true);

  auto evaluate = [&](std::size_t n) {
    const double h = d.length() / static_cast<double>(n);
    std::complex<double> acc{};
    double zeta = 0.0;
    double theta_prev = 0.0;
    double speed_prev = 0.0;
    std::complex<double> phase_prev{};
    for (std::size_t i = 0; i <= n; ++i) {
      const Vec3 k = kappa_at(segment, d.begin + h * static_cast<double>(i)).kappa;
      double theta = std::atan2(c * k.x + s * k.y, k.z);
      const double speed = norm(k);
      if (i > 0) {
        // Continuous signed angle.
        while (theta - theta_prev > pi) theta -= 2.0 * pi;
        while (theta - theta_prev < -pi) theta += 2.0 * pi;
        zeta -= h * (speed + speed_prev);
      }
      const std::complex<double> phase = std::polar(1.0, zeta);
      if (i > 0) acc += 0.5 * (phase + phase_prev) * (theta - theta_prev);
      theta_prev = theta;
      speed_prev = speed;
      phase_prev = phase;
    }
    return 0.25 * std::norm(acc);
  };

  double p = evaluate(n_quad);
  for (std::size_t n = 2 * n_quad; n <= (std::size_t{1} << 24); n *= 2) {
    const double next = evaluate(n);
    if (std::abs(next - p) < 1e-6) return make(next, ZenerMethod::perturbative_integral, true);
    p = next;
  }
  fail(ErrorCode::numerical, "pz_perturbative_planar: quadrature did not converge");
}

ZenerResult pz_half_circle_large(double lambda) {
  require_lambda(lambda);
  const double j = bessel_j0(2.0 * lambda * lambda);
  return make(0.25 * pi * pi * j * j, ZenerMethod::closed_form, lambda >= 1.0);
}

ZenerResult pz_half_circle_small(double lambda) {
  require_lambda(lambda);
  const double j = bessel_j0(pi * lambda * lambda / std::numbers::sqrt2);
  return make(j * j, ZenerMethod::closed_form, lambda <= 1.0);
}

ZenerResult pz_straight_line(double delta, double gamma) {
  if (!(std::isfinite(gamma) && gamma > 0.0)) fail(ErrorCode::invalid_argument, "gamma must be positive");
  if (!(std::isfinite(delta) && delta >= 0.0)) fail(ErrorCode::invalid_argument, "Delta must be non-negative");
  return make(std::exp(-pi * delta / gamma), ZenerMethod::closed_form, true);
}

ZenerResult pz_ring_estimate(double alpha, double beta, double lambda1, double gamma) {
  require_finite(alpha, "alpha");
  for (double v : {beta, lambda1, gamma}) {
    if (!(std::isfinite(v) && v > 0.0)) fail(ErrorCode::invalid_argument, "beta, Lambda1 and gamma must be positive");
  }
  const double p = std::exp(-pi * beta * alpha * alpha / (lambda1 * gamma * gamma));
  return make(p, ZenerMethod::closed_form, p < 0.1);
}

namespace {

double transition(const TransferMatrix& u, const EigenFrame& start, const EigenFrame& end) {
  return std::norm(inner(end.down, u * start.up));
}

}  // namespace

ZenerResult pz_numeric(const PathSegment& segment, const IntegrationConfig& config) {
  const Interval d = domain_of(segment);
  const EigenFrame a = eigenframe(kappa_at(segment, d.begin));
  const EigenFrame b = eigenframe(kappa_at(segment, d.end));
  return make(transition(evolve(segment, d.begin, d.end, config), a, b), ZenerMethod::numeric_monodromy, true);
}

ZenerResult pz_half_circle_numeric(double lambda, double gamma, const IntegrationConfig& config) {
  require_lambda(lambda);
  const HalfCirclePath path(lambda, gamma);
  const Interval d = path.domain();
  const TransferMatrix u = evolve(PathSegment{path}, d.begin, d.end, config);
  return make(transition(u, eigenframe_from_angles(pi, 0.0), eigenframe_from_angles(0.0, 0.0)),
              ZenerMethod::numeric_monodromy, true);
}

double pz_half_circle(double lambda, const LambdaZeroOptions& options) {
  switch (options.method) {
    case ZenerMethod::numeric_monodromy:
      return pz_half_circle_numeric(lambda, options.gamma, options.integration).p_z;
    case ZenerMethod::perturbative_integral:
      return pz_perturbative_planar(HalfCirclePath(lambda, options.gamma)).p_z;
    case ZenerMethod::closed_form:
      return pz_half_circle_large(lambda).p_z;
  }
  fail(ErrorCode::invalid_argument, "unknown Zener method");
}

std::vector<double> find_lambda_zeros(std::size_t count, double resolution, const LambdaZeroOptions& options) {
  require(count >= 1, ErrorCode::invalid_argument, "count must be at least 1");
  require(std::isfinite(resolution) && resolution > 0.0, ErrorCode::invalid_argument,
          "resolution must be positive");
  require(options.tolerance > 0.0 && options.lambda_min >= 0.0 && options.lambda_max > options.lambda_min,
          ErrorCode::invalid_argument, "invalid Lambda search options");

  auto f = [&](double lambda) { return pz_half_circle(lambda, options); };
  std::vector<double> zeros;

  double x0 = options.lambda_min;
  double x1 = x0 + resolution;
  double f0 = f(x0);
  double f1 = f(x1);
  while (zeros.size() < count) {
    const double x2 = x1 + resolution;
    if (x2 > options.lambda_max + 1e-12) break;
    const double f2 = f(x2);
    if (f1 <= f0 && f1 < f2) {
      // Golden-section search on [x0, x2].
      constexpr double g = 0.6180339887498949;
      double a = x0, b = x2;
      double c = b - g * (b - a), dd = a + g * (b - a);
      double fc = f(c), fd = f(dd);
      while (b - a > options.tolerance) {
        if (fc < fd) {
          b = dd; dd = c; fd = fc;
          c = b - g * (b - a); fc = f(c);
        } else {
          a = c; c = dd; fc = fd;
          dd = a + g * (b - a); fd = f(dd);
        }
      }
      const double xm = 0.5 * (a + b);
      if (f(xm) < options.threshold) zeros.push_back(xm);
    }
    x0 = x1; f0 = f1;
    x1 = x2; f1 = f2;
  }
  if (zeros.size() < count) {
    std::ostringstream os;
    os << "find_lambda_zeros: bracketed " << zeros.size() << " of " << count << " zeros below Lambda = "
       << options.lambda_max;
    fail(ErrorCode::search, os.str());
  }
  return zeros;
}

}  // namespace berry_ring
