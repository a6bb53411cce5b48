#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "berry_ring/evolution.hpp"
#include "berry_ring/paths.hpp"
#include "berry_ring/spinor.hpp"

namespace berry_ring {

// Lossless directional coupler, identical for both SOPs:
//   (b1, b2) = [[t, r], [-r*, t*]] (a1, a2).
struct CouplerParams {
  Complex t{1.0, 0.0};
  Complex r{0.0, 0.0};
  double theta_t = 0.0;
  double xi_c = 0.0;
  double xi_l = 0.0;

  // t = (1 - xi_c) e^{i theta_t}, r = sqrt(1 - |t|^2) (real).
  static CouplerParams from_loss(double xi_c, double theta_t, double xi_l);
};

// |t|^2 + |r|^2 = 1 within 1e-12, |t| = 1 - xi_c, xi's in [0, 1].
void validate(const CouplerParams& params);

struct PortVector {
  Complex up_1{};
  Complex up_2{};
  Complex down_1{};
  Complex down_2{};

  double power() const { return std::norm(up_1) + std::norm(up_2) + std::norm(down_1) + std::norm(down_2); }
};

PortVector coupler_apply(const CouplerParams& params, const PortVector& a_side);

// S = (I - t M^{-1}) (t* I - M^{-1})^{-1} with M <- (1 - xi_l) M.
// Throws singularity when the second factor is singular.
TransferMatrix s_matrix(const TransferMatrix& m, const CouplerParams& params);

// e^{i theta_t} (xi_l - xi_c - i v) / (xi_l + xi_c - i v).
Complex transmission_near_resonance(double vartheta, double xi_l, double xi_c, double theta_t = 0.0);

// (Q v)^2 / (1 + (Q v)^2).
double transmission_critical(double vartheta, double q);

// 2 pi (d omega / omega) (L / lambda).
double linewidth_phase(double rel_linewidth, double ring_length, double wavelength);

// Critical-coupling transmission averaged over a Lorentzian of half width
// delta_vartheta:
//   1 - [1/(1 + Q dv)] / [1 + (Q v / (1 + Q dv))^2].
double broadened_transmission(double vartheta, double q, double delta_vartheta);

enum class Extremum { dip, peak };

struct FwhmResult {
  double width = 0.0;
  double left = 0.0;
  double right = 0.0;
  double center = 0.0;
  double extremum = 0.0;
  double level = 0.0;
};

// Width at the level halfway between the extremum and the baseline (default:
// the opposite extreme of the samples), by linear interpolation between the
// bracketing samples. x must be increasing.
FwhmResult fwhm(std::span<const double> x, std::span<const double> y, Extremum orientation,
                std::optional<double> baseline = std::nullopt);

// fwhm on a uniform grid over [lo, hi], then repeated local re-sweeps around the
// extremum and both crossings until the width changes by less than 1%.
FwhmResult fwhm_refined(const std::function<double(double)>& f, double lo, double hi, std::size_t n,
                        Extremum orientation, std::optional<double> baseline = std::nullopt);

// Removes 2 pi jumps between consecutive values whose difference exceeds pi.
std::vector<double> unwrap_phase(std::span<const double> phases);

// unwrapped(x0 + probe) - unwrapped(x0 - probe) on an increasing grid.
double phase_step(std::span<const double> x, std::span<const double> unwrapped, double x0 = 0.0,
                  double probe = 0.1);

struct SweepRow {
  double alpha = 0.0;
  double m12_sq = 0.0;
  double arg_m11 = 0.0;
  double arg_m22 = 0.0;
  double p11 = 0.0;
  double p21 = 0.0;
};

struct SweepSettings {
  RingParams ring{};
  double xi_c = 1e-2;
  double xi_l = 1e-4;
  IntegrationConfig integration{};
  unsigned threads = 0;  // 0: hardware concurrency
};

struct Calibration {
  double theta_t = 0.0;
  double alpha_res = 0.0;
  double floor = 0.0;  // P11 at (alpha_res, theta_t)
};

// |S11|^2 for a lossless monodromy.
double p11_of(const TransferMatrix& m, double xi_c, double xi_l, double theta_t);

// theta_t is locked to an eigenphase of M(alpha_res), picking the branch with the
// deeper P11. Without alpha_res the deepest such dip over `alphas` is chosen and
// refined by golden-section search between the neighbouring grid points.
Calibration calibrate_theta_t(std::span<const double> alphas, const SweepSettings& settings,
                              std::optional<double> alpha_res = std::nullopt);

// Grid search on precomputed monodromies (ms[i] belongs to alphas[i]).
Calibration calibrate_theta_t(std::span<const double> alphas, std::span<const TransferMatrix> ms,
                              const SweepSettings& settings);

struct SweepResult {
  std::vector<SweepRow> rows;
  double theta_t = 0.0;
};

// Rows in input order; arg columns are unwrapped along the sweep and read
// from the lossless monodromy.
SweepResult modulator_sweep(std::span<const double> alphas, const SweepSettings& settings, double theta_t);
SweepResult modulator_sweep(std::span<const double> alphas, std::span<const TransferMatrix> ms,
                            const SweepSettings& settings, double theta_t);

// Monodromies for each alpha, computed on the worker pool.
std::vector<TransferMatrix> monodromies(std::span<const double> alphas, const SweepSettings& settings);

// d delta_up / d alpha in the adiabatic regime. With alpha unset this is the
// |alpha| -> infinity limit, the integral of the perturbation profile.
double adiabatic_phase_slope(const RingParams& ring, std::optional<double> alpha = std::nullopt);

struct AdiabaticWidth {
  double vartheta_fwhm = 0.0;
  double phase_slope = 0.0;
  double alpha_fwhm = 0.0;
};

// FWHM of |t(vartheta)|^2 from the near-resonance amplitude, mapped to alpha
// through the adiabatic phase slope.
AdiabaticWidth adiabatic_resonance_width(double xi_c, double xi_l, const RingParams& ring,
                                         std::optional<double> alpha = std::nullopt);

}  // namespace berry_ring
