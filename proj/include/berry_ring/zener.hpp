#pragma once

#include <cstddef>
#include <vector>

#include "berry_ring/evolution.hpp"
#include "berry_ring/paths.hpp"

namespace berry_ring {

enum class ZenerMethod { perturbative_integral, numeric_monodromy, closed_form };

const char* to_string(ZenerMethod method) noexcept;

struct ZenerResult {
  double p_z = 0.0;
  ZenerMethod method = ZenerMethod::closed_form;
  // Lowest-order values can exceed one; the raw value is kept and flagged.
  bool exceeds_unity = false;
  // False when the formula is used outside its stated range.
  bool within_validity = true;
};

// J0(x): long-double power series up to |x| = 17, Hankel asymptotic beyond.
double bessel_j0(double x);

// Lowest-order transition probability p = |int dtheta e^{i zeta} / 2|^2 on a
// path confined to a half plane phi = const,
//   zeta(s) = -2 int_{s0}^{s} |kappa|.
// theta is the signed polar angle inside that plane. The Stieltjes sum over a
// uniform s grid starts at n_quad nodes and doubles until p moves by < 1e-6.
// Throws invalid_argument for non-planar paths.
ZenerResult pz_perturbative_planar(const PathSegment& segment, std::size_t n_quad = 256);

// (pi^2/4) J0^2(2 Lambda^2); within_validity for Lambda >= 1.
ZenerResult pz_half_circle_large(double lambda);

// J0^2(pi Lambda^2 / sqrt 2); within_validity for Lambda <= 1.
ZenerResult pz_half_circle_small(double lambda);

// exp(-pi Delta / gamma).
ZenerResult pz_straight_line(double delta, double gamma);

// exp(-pi beta alpha^2 / (Lambda1 gamma^2)); within_validity when p < 0.1.
ZenerResult pz_ring_estimate(double alpha, double beta, double lambda1, double gamma);

// |<down(end)|U|up(start)>|^2 from the integrated evolution operator, with
// the eigenbases taken from kappa at the two segment ends.
ZenerResult pz_numeric(const PathSegment& segment, const IntegrationConfig& config = {});

// Same for the half circle, using the exact end directions (south to north
// pole) so that Lambda = 0 gives the sudden limit p = 1.
ZenerResult pz_half_circle_numeric(double lambda, double gamma, const IntegrationConfig& config = {});

struct LambdaZeroOptions {
  ZenerMethod method = ZenerMethod::numeric_monodromy;
  double tolerance = 1e-6;   // golden-section bracket width in Lambda
  double threshold = 1e-4;   // a zero is a local minimum below this
  double lambda_min = 0.05;
  double lambda_max = 6.0;
  double gamma = 1.0;
  IntegrationConfig integration{};
};

// Local minima of p_z(Lambda) on the half circle, bracketed on a grid of
// spacing `resolution` and refined by golden-section search.
std::vector<double> find_lambda_zeros(std::size_t count, double resolution, const LambdaZeroOptions& options = {});

// p_z(Lambda) on the half circle with the chosen method.
double pz_half_circle(double lambda, const LambdaZeroOptions& options);

}  // namespace berry_ring
