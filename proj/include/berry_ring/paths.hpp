#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "berry_ring/spinor.hpp"

namespace berry_ring {

struct Interval {
  double begin = 0.0;
  double end = 0.0;

  double length() const { return end - begin; }
};

// kappa(s) = gamma (sqrt(Lambda^2 - (gamma s)^2), 0, gamma s) on |s| <= Lambda/gamma.
// Runs from the south pole (0,0,-gamma Lambda) to the north pole at constant radius.
class HalfCirclePath {
 public:
  HalfCirclePath(double lambda, double gamma, double k0 = 0.0);

  double lambda() const { return lambda_; }
  double gamma() const { return gamma_; }
  Interval domain() const { return {-lambda_ / gamma_, lambda_ / gamma_}; }
  BirefringenceSample kappa_at(double s) const;

 private:
  double lambda_;
  double gamma_;
  double k0_;
};

// kappa(s) = Delta (0, 1, gamma s), truncated to a finite window.
class StraightLinePath {
 public:
  StraightLinePath(double delta, double gamma, Interval domain, double k0 = 0.0);

  // Window |gamma s| <= reach.
  static StraightLinePath symmetric(double delta, double gamma, double reach);

  double delta() const { return delta_; }
  double gamma() const { return gamma_; }
  Interval domain() const { return domain_; }
  BirefringenceSample kappa_at(double s) const;

 private:
  double delta_;
  double gamma_;
  Interval domain_;
  double k0_;
};

// Circular birefringence from the applied field: a smooth plateau of height
// alpha over |gamma s / beta| < B whose edges sharpen with A.
class FermiStepPerturbation {
 public:
  FermiStepPerturbation(double alpha, double a_sharp, double b_width, double beta, double gamma);

  double alpha() const { return alpha_; }
  // 1 / (1 + exp A[(gamma s/beta)^2 - B^2]), in (0, 1).
  double profile(double s) const;
  double value(double s) const { return alpha_ * profile(s); }
  Vec3 kappa_at(double s) const { return {0.0, value(s), 0.0}; }

 private:
  double alpha_;
  double a_sharp_;
  double b_width_;
  double beta_;
  double gamma_;
};

// kappa0(s) = -(0, 0, Lambda1 gamma^2 s / beta) on |s| <= beta/gamma, plus an
// optional field-induced perturbation.
class DiameterPath {
 public:
  DiameterPath(double beta, double lambda1, double gamma,
               std::optional<FermiStepPerturbation> perturbation = std::nullopt, double k0 = 0.0);

  double beta() const { return beta_; }
  double lambda1() const { return lambda1_; }
  double gamma() const { return gamma_; }
  const std::optional<FermiStepPerturbation>& perturbation() const { return perturbation_; }
  Interval domain() const { return {-beta_ / gamma_, beta_ / gamma_}; }
  BirefringenceSample kappa_at(double s) const;

 private:
  double beta_;
  double lambda1_;
  double gamma_;
  std::optional<FermiStepPerturbation> perturbation_;
  double k0_;
};

// Piecewise-linear kappa between tabulated nodes (s strictly increasing).
class TabulatedPath {
 public:
  TabulatedPath(std::vector<double> s, std::vector<Vec3> kappa, double k0 = 0.0);

  Interval domain() const { return {s_.front(), s_.back()}; }
  BirefringenceSample kappa_at(double s) const;
  std::span<const double> nodes() const { return s_; }

 private:
  std::vector<double> s_;
  std::vector<Vec3> kappa_;
  double k0_;
};

class ConstantPath {
 public:
  ConstantPath(BirefringenceSample sample, Interval domain);

  Interval domain() const { return domain_; }
  BirefringenceSample kappa_at(double s) const;

 private:
  BirefringenceSample sample_;
  Interval domain_;
};

// Library-level escape hatch for arbitrary kappa(s); not reachable from configuration.
class CustomPath {
 public:
  using Function = std::function<BirefringenceSample(double)>;

  CustomPath(Function f, Interval domain);

  Interval domain() const { return domain_; }
  BirefringenceSample kappa_at(double s) const;

 private:
  Function f_;
  Interval domain_;
};

using PathSegment =
    std::variant<HalfCirclePath, StraightLinePath, DiameterPath, TabulatedPath, ConstantPath, CustomPath>;

Interval domain_of(const PathSegment& segment);

// Exact evaluation of the segment's defining formula; s outside the domain is
// a domain error.
BirefringenceSample kappa_at(const PathSegment& segment, double s);

// Segments traversed in order; global arc length u runs over [0, total_length].
// Closed in kappa-space: kappa at the end of the last segment equals kappa at
// the start of the first within the closure tolerance.
class RingPath {
 public:
  explicit RingPath(std::vector<PathSegment> segments, double closure_tolerance = 1e-9);

  std::span<const PathSegment> segments() const { return segments_; }
  double total_length() const { return offsets_.back(); }
  Interval domain() const { return {0.0, total_length()}; }
  double segment_offset(std::size_t i) const { return offsets_[i]; }

  struct Location {
    std::size_t index;
    double local_s;
  };
  Location locate(double u) const;

  BirefringenceSample kappa_at(double u) const;

 private:
  std::vector<PathSegment> segments_;
  std::vector<double> offsets_;
};

struct RingParams {
  double beta = 5.0;
  double lambda1 = 1.022;
  double gamma = 1.0;
  double a_sharp = 50.0;
  double b_width = 0.6;
  double k0 = 0.0;
};

void validate(const RingParams& params);

// Half circle (length 2 Lambda1/gamma) followed by the perturbed diameter
// (length 2 beta/gamma). The coupler junction kappa = (0,0,-Lambda1 gamma) is u = 0.
RingPath standard_ring(double alpha, const RingParams& params = {});

}  // namespace berry_ring
