#include "berry_ring/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "berry_ring/adiabatic.hpp"
#include "berry_ring/error.hpp"

namespace berry_ring {

std::size_t IntegrationConfig::steps_for(double length) const {
  const double n = std::ceil(static_cast<double>(steps_per_unit_length) * std::abs(length));
  if (!(n < 1e12)) fail(ErrorCode::invalid_argument, "integration step count is not finite");
  return std::max<std::size_t>(2, static_cast<std::size_t>(n));
}

void validate(const IntegrationConfig& config) {
  require(config.steps_per_unit_length > 0, ErrorCode::invalid_argument,
          "integration.steps_per_unit_length must be positive");
}

namespace {

// Left-multiplies factors from s0 toward s1 on an n-step midpoint grid.
TransferMatrix product(const PathSegment& segment, double s0, double s1, std::size_t n) {
  TransferMatrix u = TransferMatrix::identity();
  if (s0 == s1) return u;
  const double ds = (s1 - s0) / static_cast<double>(n);
  const bool forward = s1 > s0;
  // Backward walks visit the forward midpoints in reverse order.
  const double lo = std::min(s0, s1);
  const double h = std::abs(ds);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t j = forward ? k : n - 1 - k;
    const double mid = lo + (static_cast<double>(j) + 0.5) * h;
    u = pauli_exp(ds, kappa_at(segment, mid)) * u;
  }
  return u;
}

}  // namespace

TransferMatrix evolve(const PathSegment& segment, double s0, double s1, const IntegrationConfig& config) {
  validate(config);
  require_finite(s0, "s0");
  require_finite(s1, "s1");
  kappa_at(segment, s0);
  kappa_at(segment, s1);
  return product(segment, s0, s1, config.steps_for(s1 - s0));
}

TransferMatrix evolve(const RingPath& ring, double u0, double u1, const IntegrationConfig& config) {
  validate(config);
  if (u0 == u1) {
    ring.locate(u0);
    return TransferMatrix::identity();
  }
  const auto a = ring.locate(u0);
  const auto b = ring.locate(u1);
  const auto segs = ring.segments();
  TransferMatrix u = TransferMatrix::identity();
  if (u1 > u0) {
    for (std::size_t i = a.index; i <= b.index; ++i) {
      const Interval d = domain_of(segs[i]);
      const double from = i == a.index ? a.local_s : d.begin;
      const double to = i == b.index ? b.local_s : d.end;
      if (to > from) u = product(segs[i], from, to, config.steps_for(to - from)) * u;
    }
  } else {
    for (std::size_t i = a.index + 1; i-- > b.index;) {
      const Interval d = domain_of(segs[i]);
      const double from = i == a.index ? a.local_s : d.end;
      const double to = i == b.index ? b.local_s : d.begin;
      if (from > to) u = product(segs[i], from, to, config.steps_for(from - to)) * u;
    }
  }
  return u;
}

TransferMatrix evolve(const RingPath& ring, const IntegrationConfig& config) {
  return evolve(ring, 0.0, ring.total_length(), config);
}

namespace {

template <class Step>
BlochTrajectory sample_trajectory(double s0, double s1, const Spinor& initial, std::size_t n_samples,
                                  Step&& step) {
  require(n_samples >= 2, ErrorCode::invalid_argument, "trajectory needs at least two samples");
  Spinor e = initial;
  BlochTrajectory out;
  out.reserve(n_samples);
  out.push_back({s0, bloch_of(e)});
  double prev = s0;
  for (std::size_t k = 1; k < n_samples; ++k) {
    const double s = k + 1 == n_samples
                         ? s1
                         : s0 + (s1 - s0) * static_cast<double>(k) / static_cast<double>(n_samples - 1);
    e = step(prev, s) * e;
    out.push_back({s, bloch_of(e)});
    prev = s;
  }
  return out;
}

void require_normalized(const Spinor& e) {
  if (!(std::abs(e.norm_squared() - 1.0) <= 1e-6)) {
    fail(ErrorCode::contract_violation, "trajectory requires a normalized initial spinor");
  }
}

}  // namespace

BlochTrajectory trajectory(const PathSegment& segment, double s0, double s1, const Spinor& initial,
                           const IntegrationConfig& config, std::size_t n_samples) {
  require_normalized(initial);
  return sample_trajectory(s0, s1, initial, n_samples,
                           [&](double a, double b) { return evolve(segment, a, b, config); });
}

BlochTrajectory trajectory(const PathSegment& segment, const Spinor& initial, const IntegrationConfig& config,
                           std::size_t n_samples) {
  const Interval d = domain_of(segment);
  return trajectory(segment, d.begin, d.end, initial, config, n_samples);
}

BlochTrajectory trajectory(const RingPath& ring, const Spinor& initial, const IntegrationConfig& config,
                           std::size_t n_samples) {
  require_normalized(initial);
  return sample_trajectory(0.0, ring.total_length(), initial, n_samples,
                           [&](double a, double b) { return evolve(ring, a, b, config); });
}

TransferMatrix monodromy(const RingPath& ring, const IntegrationConfig& config) {
  const BirefringenceSample c = ring.kappa_at(0.0);
  if (!(c.magnitude() > 1e-9)) {
    fail(ErrorCode::degeneracy, "coupler point has |kappa| <= 1e-9; local eigenbasis undefined");
  }
  const TransferMatrix v = basis_matrix(eigenframe(c));
  return adjoint(v) * evolve(ring, config) * v;
}

}  // namespace berry_ring
