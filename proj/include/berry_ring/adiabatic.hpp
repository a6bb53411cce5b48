#pragma once

#include <cstddef>

#include "berry_ring/paths.hpp"
#include "berry_ring/spinor.hpp"

namespace berry_ring {

// Local eigenmodes of K = k0 I + kappa . sigma with
//   |up>   = ( cos(theta/2) e^{-i phi/2}, sin(theta/2) e^{i phi/2})
//   |down> = (-sin(theta/2) e^{-i phi/2}, cos(theta/2) e^{i phi/2})
// phi = atan2(kappa2, kappa1), theta = acos(kappa3/|kappa|).
struct EigenFrame {
  Spinor up;
  Spinor down;
  double k_plus = 0.0;
  double k_minus = 0.0;
  double theta = 0.0;
  double phi = 0.0;
};

// Requires |kappa| > 1e-12 (degeneracy error otherwise).
EigenFrame eigenframe(const BirefringenceSample& sample);

// Same gauge from spherical angles alone; used where only the direction limit
// of kappa is known.
EigenFrame eigenframe_from_angles(double theta, double phi);

// Columns |up>, |down>.
TransferMatrix basis_matrix(const EigenFrame& frame);

// Signed solid angle subtended at the origin by the closed curve kappa(u),
// sampled at n_samples points. Planar curves return 2 pi times the winding
// number about the plane normal (oriented with its largest component positive).
// Throws degeneracy when a sample has |kappa| < 1e-9 or when consecutive
// directions are more than 90 degrees apart (origin crossing between samples).
double solid_angle(const RingPath& ring, std::size_t n_samples = 20000);

struct AdiabaticPhases {
  double omega = 0.0;
  double gamma_up = 0.0;
  double gamma_down = 0.0;
  double dyn_up = 0.0;
  double dyn_down = 0.0;
  double delta_up = 0.0;
  double delta_down = 0.0;
};

struct AdiabaticResult {
  TransferMatrix m;
  AdiabaticPhases phases;
};

// diag(e^{i delta_up}, e^{i delta_down}) with delta = -/+ Omega/2 + int (k0 +/- |kappa|).
// The dynamic integrals use composite Simpson on each segment.
AdiabaticResult adiabatic_monodromy(const RingPath& ring, std::size_t n_samples = 20000);

}  // namespace berry_ring
