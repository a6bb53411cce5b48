#include <doctest.h>

#include <cmath>

#include "berry_ring/error.hpp"
#include "berry_ring/paths.hpp"

using namespace berry_ring;

TEST_CASE("half circle runs pole to pole at constant radius") {
  const HalfCirclePath hc(1.022, 1.0);
  const auto mid = hc.kappa_at(0.0);
  CHECK(mid.kappa.x == doctest::Approx(1.022).epsilon(1e-15));
  CHECK(mid.kappa.y == 0.0);
  CHECK(mid.kappa.z == 0.0);
  CHECK(norm(hc.kappa_at(-1.022).kappa - Vec3{0, 0, -1.022}) < 1e-15);
  CHECK(norm(hc.kappa_at(1.022).kappa - Vec3{0, 0, 1.022}) < 1e-15);
  const HalfCirclePath g2(2.0, 0.5);
  for (double s = -4.0; s <= 4.0; s += 0.25) CHECK(norm(g2.kappa_at(s).kappa) == doctest::Approx(1.0));
  CHECK_THROWS_AS(hc.kappa_at(1.1), Error);
}

TEST_CASE("diameter crosses the origin") {
  const DiameterPath d(5.0, 1.022, 1.0);
  CHECK(norm(d.kappa_at(0.0).kappa) == 0.0);
  CHECK(norm(d.kappa_at(-5.0).kappa - Vec3{0, 0, 1.022}) < 1e-15);
  CHECK(norm(d.kappa_at(5.0).kappa - Vec3{0, 0, -1.022}) < 1e-15);
}

TEST_CASE("Fermi step is half height at the edge, even and decreasing") {
  const FermiStepPerturbation f(0.2, 50.0, 0.6, 5.0, 1.0);
  CHECK(f.value(3.0) == doctest::Approx(0.1).epsilon(1e-15));
  double previous = f.value(0.0);
  for (double s = 0.01; s <= 5.0; s += 0.01) {
    CHECK(f.value(s) == f.value(-s));
    CHECK(f.value(s) < previous);
    previous = f.value(s);
  }
}

TEST_CASE("straight line window") {
  const auto line = StraightLinePath::symmetric(0.5, 2.0, 8.0);
  CHECK(line.domain().begin == doctest::Approx(-4.0));
  CHECK(line.domain().end == doctest::Approx(4.0));
  const auto k = line.kappa_at(1.0).kappa;
  CHECK(k.x == 0.0);
  CHECK(k.y == doctest::Approx(0.5));
  CHECK(k.z == doctest::Approx(1.0));
}

TEST_CASE("tabulated path interpolates linearly") {
  const TabulatedPath t({0.0, 1.0, 3.0}, {{0, 0, 1}, {1, 0, 1}, {1, 2, 1}});
  CHECK(norm(t.kappa_at(0.5).kappa - Vec3{0.5, 0, 1}) < 1e-15);
  CHECK(norm(t.kappa_at(2.0).kappa - Vec3{1, 1, 1}) < 1e-15);
  CHECK_THROWS_AS(TabulatedPath({0.0, 0.0}, {{0, 0, 1}, {0, 0, 1}}), Error);
}

TEST_CASE("standard ring geometry") {
  const auto ring = standard_ring(0.0);
  CHECK(ring.total_length() == doctest::Approx(12.044).epsilon(1e-12));
  CHECK(norm(ring.kappa_at(0.0).kappa - Vec3{0, 0, -1.022}) < 1e-15);
  CHECK(norm(ring.kappa_at(2.044).kappa - Vec3{0, 0, 1.022}) < 1e-12);
  CHECK(norm(ring.kappa_at(ring.total_length()).kappa - Vec3{0, 0, -1.022}) < 1e-12);

  auto min_on_diameter = [](const RingPath& r) {
    double m = INFINITY;
    const double u0 = r.segment_offset(1);
    const int n = 200000;
    for (int i = 0; i <= n; ++i) m = std::min(m, norm(r.kappa_at(u0 + (r.total_length() - u0) * i / n).kappa));
    return m;
  };
  CHECK(min_on_diameter(ring) < 1e-12);
  CHECK(min_on_diameter(standard_ring(0.2)) == doctest::Approx(0.2).epsilon(1e-6));
}

// The half circle leaves its poles with unbounded slope, so the gap shrinks
// like n^-1/2 there.
TEST_CASE("standard ring is continuous in kappa-space") {
  for (double alpha : {-0.5, 0.0, 0.3}) {
    const auto ring = standard_ring(alpha);
    double previous_gap = INFINITY;
    for (int n : {1000, 10000, 100000, 1000000}) {
      double gap = 0.0;
      for (int i = 0; i < n; ++i) {
        const double a = ring.total_length() * i / n;
        const double b = ring.total_length() * (i + 1) / n;
        gap = std::max(gap, norm(ring.kappa_at(b).kappa - ring.kappa_at(a).kappa));
      }
      CHECK(gap < previous_gap);
      previous_gap = gap;
    }
    CHECK(previous_gap < 6e-3);
  }
}

TEST_CASE("ring closure is enforced") {
  std::vector<PathSegment> parts{HalfCirclePath(1.0, 1.0)};
  CHECK_THROWS_AS(RingPath{parts}, Error);
  try {
    RingPath bad(parts);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::invalid_argument);
  }
}

TEST_CASE("ring parameters are validated") {
  RingParams p;
  p.beta = -1.0;
  CHECK_THROWS_AS(standard_ring(0.1, p), Error);
  CHECK_THROWS_AS(standard_ring(std::nan(""), {}), Error);
}
