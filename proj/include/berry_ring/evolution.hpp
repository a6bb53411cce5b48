#pragma once

#include <cstddef>
#include <vector>

#include "berry_ring/paths.hpp"
#include "berry_ring/spinor.hpp"

namespace berry_ring {

// Product-formula resolution. Each factor samples the generator at the
// midpoint of its subinterval.
struct IntegrationConfig {
  int steps_per_unit_length = 2000;

  // max(2, ceil(steps_per_unit_length * |length|)).
  std::size_t steps_for(double length) const;
};

void validate(const IntegrationConfig& config);

// u(s1, s0) for one segment. s1 < s0 walks the same grid backwards, so the
// result is the inverse of the forward product.
TransferMatrix evolve(const PathSegment& segment, double s0, double s1, const IntegrationConfig& config);

// Same over global ring arc length; each segment piece is integrated on its own
// grid so junction kinks never sit inside a step.
TransferMatrix evolve(const RingPath& ring, double u0, double u1, const IntegrationConfig& config);

// One full circulation, lab frame.
TransferMatrix evolve(const RingPath& ring, const IntegrationConfig& config);

struct BlochSample {
  double s = 0.0;
  BlochVector p;
};

using BlochTrajectory = std::vector<BlochSample>;

// n_samples >= 2 evenly spaced points on [s0, s1] including both ends.
BlochTrajectory trajectory(const PathSegment& segment, const Spinor& initial, const IntegrationConfig& config,
                           std::size_t n_samples);
BlochTrajectory trajectory(const PathSegment& segment, double s0, double s1, const Spinor& initial,
                           const IntegrationConfig& config, std::size_t n_samples);
BlochTrajectory trajectory(const RingPath& ring, const Spinor& initial, const IntegrationConfig& config,
                           std::size_t n_samples);

// Ring monodromy in the local eigenbasis at u = 0: V^dagger U_lab V.
TransferMatrix monodromy(const RingPath& ring, const IntegrationConfig& config);

}  // namespace berry_ring
