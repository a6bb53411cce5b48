#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include "berry_ring/error.hpp"
#include "berry_ring/evolution.hpp"
#include "berry_ring/frenet.hpp"
#include "oracles.hpp"

using namespace berry_ring;
using oracle::pi;

namespace {

double orthonormality_residual(const FrenetFrame& f) {
  return std::max({std::abs(dot(f.tangent, f.tangent) - 1.0), std::abs(dot(f.normal, f.normal) - 1.0),
                   std::abs(dot(f.binormal, f.binormal) - 1.0), std::abs(dot(f.tangent, f.normal)),
                   std::abs(dot(f.tangent, f.binormal)), std::abs(dot(f.normal, f.binormal)),
                   norm(cross(f.tangent, f.normal) - f.binormal)});
}

struct Frame3 {
  Vec3 t, n, b;
};

Frame3 frenet_rhs(const Frame3& f, double k, double tau) {
  return {k * f.n, -k * f.t + tau * f.b, -tau * f.n};
}

Frame3 axpy(const Frame3& f, double h, const Frame3& d) { return {f.t + h * d.t, f.n + h * d.n, f.b + h * d.b}; }

}  // namespace

TEST_CASE("helix curvature and torsion") {
  const double a = 1.0;
  const double b = 0.25;
  const auto pts = oracle::helix(a, b, 4.0 * pi, 4001);
  const auto frames = frenet_frames(SpaceCurve::from_samples(pts));
  REQUIRE(frames.size() == 4001 - 6);
  for (const auto& f : frames) {
    CHECK(std::abs(f.curvature / oracle::helix_curvature(a, b) - 1.0) < 1e-6);
    CHECK(std::abs(f.torsion / oracle::helix_torsion(a, b) - 1.0) < 1e-6);
    CHECK(orthonormality_residual(f) < 1e-12);
    CHECK(rytov_birefringence(f.torsion).kappa.y == doctest::Approx(oracle::helix_torsion(a, b)).epsilon(1e-6));
  }
}

TEST_CASE("helix in a non-uniform parametrization") {
  const double a = 2.0;
  const double b = 0.5;
  std::vector<Vec3> pts;
  const int n = 6001;
  for (int i = 0; i < n; ++i) {
    const double u = 4.0 * pi * i / (n - 1);
    const double t = u + 0.3 * std::sin(u);
    pts.push_back({a * std::cos(t), a * std::sin(t), b * t});
  }
  const auto curve = SpaceCurve::from_samples(pts);
  CHECK(curve.length() == doctest::Approx(4.0 * pi * std::hypot(a, b)).epsilon(1e-9));
  for (const auto& f : frenet_frames(curve)) {
    CHECK(std::abs(f.curvature / oracle::helix_curvature(a, b) - 1.0) < 1e-6);
    // Resampling error is amplified by the third difference.
    CHECK(std::abs(f.torsion / oracle::helix_torsion(a, b) - 1.0) < 2e-4);
  }
}

TEST_CASE("planar circle has zero torsion") {
  std::vector<Vec3> pts;
  for (int i = 0; i < 2001; ++i) {
    const double t = 1.5 * pi * i / 2000.0;
    pts.push_back({3.0 * std::cos(t), 3.0 * std::sin(t), 0.0});
  }
  for (const auto& f : frenet_frames(SpaceCurve::from_samples(pts))) {
    CHECK(f.curvature == doctest::Approx(1.0 / 3.0).epsilon(1e-7));
    CHECK(std::abs(f.torsion) < 1e-8);
    CHECK(norm(f.binormal - Vec3{0, 0, 1}) < 1e-10);
  }
}

TEST_CASE("smooth random curves give orthonormal frames") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 5; ++trial) {
    std::array<Vec3, 3> c{};
    for (auto& v : c) v = {u(rng), u(rng), u(rng)};
    std::vector<Vec3> pts;
    for (int i = 0; i < 3001; ++i) {
      const double t = 2.0 * i / 3000.0;
      pts.push_back(Vec3{std::cos(3.0 * t), std::sin(3.0 * t), t} + 0.2 * (c[0] * std::sin(t) + c[1] * t * t +
                                                                             c[2] * std::cos(2.0 * t)));
    }
    for (const auto& f : frenet_frames(SpaceCurve::from_samples(pts))) CHECK(orthonormality_residual(f) < 1e-8);
  }
}

TEST_CASE("torsion agrees with the binormal derivative") {
  const auto frames = frenet_frames(SpaceCurve::from_samples(oracle::helix(1.5, 0.8, 3.0 * pi, 3001)));
  const double h = frames[1].s - frames[0].s;
  for (std::size_t i = 1; i + 1 < frames.size(); i += 50) {
    const Vec3 db = (frames[i + 1].binormal - frames[i - 1].binormal) / (2.0 * h);
    CHECK(-dot(db, frames[i].normal) == doctest::Approx(frames[i].torsion).epsilon(1e-5));
  }
}

TEST_CASE("integrating the Frenet equations reproduces the frames") {
  std::vector<Vec3> pts;
  for (int i = 0; i < 4001; ++i) {
    const double t = 3.0 * i / 4000.0;
    pts.push_back({std::cos(2.0 * t) * (1.0 + 0.2 * t), std::sin(2.0 * t), 0.4 * t + 0.1 * t * t});
  }
  const auto frames = frenet_frames(SpaceCurve::from_samples(pts));
  Frame3 f{frames[0].tangent, frames[0].normal, frames[0].binormal};
  const double h = frames[1].s - frames[0].s;
  double worst = 0.0;
  // RK4 over two samples per step, using the middle sample for the midpoint stages.
  for (std::size_t i = 0; i + 2 < frames.size(); i += 2) {
    const auto& a = frames[i];
    const auto& m = frames[i + 1];
    const auto& e = frames[i + 2];
    const double step = 2.0 * h;
    const Frame3 k1 = frenet_rhs(f, a.curvature, a.torsion);
    const Frame3 k2 = frenet_rhs(axpy(f, h, k1), m.curvature, m.torsion);
    const Frame3 k3 = frenet_rhs(axpy(f, h, k2), m.curvature, m.torsion);
    const Frame3 k4 = frenet_rhs(axpy(f, step, k3), e.curvature, e.torsion);
    f.t = f.t + step / 6.0 * (k1.t + 2.0 * k2.t + 2.0 * k3.t + k4.t);
    f.n = f.n + step / 6.0 * (k1.n + 2.0 * k2.n + 2.0 * k3.n + k4.n);
    f.b = f.b + step / 6.0 * (k1.b + 2.0 * k2.b + 2.0 * k3.b + k4.b);
    worst = std::max({worst, norm(f.t - e.tangent), norm(f.n - e.normal), norm(f.b - e.binormal)});
  }
  CHECK(worst < 1e-4);
}

TEST_CASE("straight stretch is reported with its range") {
  std::vector<Vec3> pts;
  for (int i = 0; i < 200; ++i) pts.push_back({0.01 * i, 0.0, 0.0});
  try {
    frenet_frames(SpaceCurve::from_samples(pts));
    FAIL("expected a degeneracy error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::degeneracy);
    CHECK(std::string(e.what()).find("s in [") != std::string::npos);
  }
  CHECK_THROWS_AS(SpaceCurve::from_samples(std::vector<Vec3>(5)), Error);
}

TEST_CASE("Rytov birefringence") {
  const auto zero = rytov_birefringence(0.0);
  CHECK(zero.k0 == 0.0);
  CHECK(norm(zero.kappa) == 0.0);

  // Constant torsion rotates a linear polarization about axis 2 by 2 tau L.
  const double tau = 0.35;
  const double len = 2.0;
  const PathSegment seg = ConstantPath(rytov_birefringence(tau), {0.0, len});
  const auto traj = trajectory(seg, {1.0, 0.0}, {}, 2);
  const Vec3 p = traj.back().p.as_vec();
  CHECK(std::abs(p.y) < 1e-14);
  CHECK(std::acos(std::clamp(p.z, -1.0, 1.0)) == doctest::Approx(2.0 * tau * len).epsilon(1e-12));
  CHECK(p.x == doctest::Approx(-std::sin(2.0 * tau * len)).epsilon(1e-12));
}

TEST_CASE("planar fibre transports polarization trivially") {
  std::vector<Vec3> pts;
  for (int i = 0; i < 1001; ++i) {
    const double t = 2.0 * i / 1000.0;
    pts.push_back({t, std::sin(t) + 0.2 * t * t, 0.0});
  }
  const auto frames = frenet_frames(SpaceCurve::from_samples(pts));
  std::vector<double> s;
  std::vector<Vec3> k;
  for (const auto& f : frames) {
    s.push_back(f.s);
    k.push_back(rytov_birefringence(f.torsion).kappa);
  }
  const PathSegment seg = TabulatedPath(s, k);
  const auto u = evolve(seg, s.front(), s.back(), {});
  CHECK(oracle::max_abs(u, TransferMatrix::identity()) < 1e-8);
}

TEST_CASE("curve CSV loading") {
  const auto dir = std::filesystem::temp_directory_path() / "berry_ring_frenet_test";
  std::filesystem::create_directories(dir);
  const auto file = dir / "curve.csv";
  {
    std::ofstream out(file);
    out << "# helix\nz,s_index,x,y,label\n";
    const auto pts = oracle::helix(1.0, 0.2, 2.0, 20);
    for (int i = 19; i >= 0; --i) out << pts[i].z << "," << i << "," << pts[i].x << "," << pts[i].y << ",p\n";
  }
  const auto loaded = load_curve_csv(file);
  REQUIRE(loaded.size() == 20);
  const auto pts = oracle::helix(1.0, 0.2, 2.0, 20);
  for (std::size_t i = 0; i < 20; ++i) CHECK(norm(loaded[i] - pts[i]) < 1e-5);
  try {
    load_curve_csv(dir / "missing.csv");
    FAIL("expected an I/O error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::io);
  }
  std::filesystem::remove_all(dir);
}
