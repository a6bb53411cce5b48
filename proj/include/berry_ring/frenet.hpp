#pragma once

#include <filesystem>
#include <span>
#include <vector>

#include "berry_ring/spinor.hpp"
#include "berry_ring/vec3.hpp"

namespace berry_ring {

// Curve resampled at uniform arc-length spacing.
class SpaceCurve {
 public:
  // Accepts any regular parametrization (at least 8 distinct points).
  // Arc length comes from refined chord length; the resampling uses a
  // monotone cubic map from arc length to sample index.
  static SpaceCurve from_samples(std::span<const Vec3> points, std::size_t n_out = 0);

  // Points already at uniform arc-length spacing h.
  static SpaceCurve from_arc_length(std::vector<Vec3> points, double h);

  std::span<const Vec3> points() const { return points_; }
  double spacing() const { return h_; }
  double length() const { return h_ * static_cast<double>(points_.size() - 1); }
  std::size_t size() const { return points_.size(); }

 private:
  SpaceCurve(std::vector<Vec3> points, double h) : points_(std::move(points)), h_(h) {}

  std::vector<Vec3> points_;
  double h_;
};

struct FrenetFrame {
  double s = 0.0;
  Vec3 tangent;
  Vec3 normal;
  Vec3 binormal;
  double curvature = 0.0;
  double torsion = 0.0;
};

// Frames at the interior samples reachable by the 7-point stencil (three
// points are dropped at each end). Throws degeneracy with the offending s
// range when the curvature falls to 1e-8 or below.
std::vector<FrenetFrame> frenet_frames(const SpaceCurve& curve);

// Rytov law in (normal, binormal) components: k0 = 0, kappa = (0, tau, 0).
BirefringenceSample rytov_birefringence(double tau);

// CSV with header s_index,x,y,z (any column order, extra columns ignored).
std::vector<Vec3> load_curve_csv(const std::filesystem::path& path);

}  // namespace berry_ring
