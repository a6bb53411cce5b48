#include <doctest.h>

#include <random>

#include "berry_ring/error.hpp"
#include "berry_ring/spinor.hpp"
#include "oracles.hpp"

using namespace berry_ring;
using oracle::max_abs;
using oracle::pi;

namespace {

BirefringenceSample random_sample(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  return {u(rng), {u(rng), u(rng), u(rng)}};
}

}  // namespace

TEST_CASE("pauli_exp quarter turn about axis 3 is diag(i, -i)") {
  const auto u = pauli_exp(pi / 2.0, {0.0, {0.0, 0.0, 1.0}});
  CHECK(max_abs(u, TransferMatrix::diagonal({0.0, 1.0}, {0.0, -1.0})) < 1e-15);
}

TEST_CASE("pauli_exp with zero kappa is a scalar phase") {
  for (double x : {-3.0, 0.0, 0.7, 12.5}) {
    const auto u = pauli_exp(x, {0.4, {0.0, 0.0, 0.0}});
    const Complex ph = std::polar(1.0, 0.4 * x);
    CHECK(max_abs(u, TransferMatrix::diagonal(ph, ph)) < 1e-15);
  }
}

TEST_CASE("pauli_exp matches the Taylor series") {
  const auto u = pauli_exp(1.0, {0.3, {0.6, 0.0, 0.8}});
  CHECK(max_abs(u, oracle::taylor_exp(1.0, 0.3, {0.6, 0.0, 0.8}, 30)) < 1e-13);
  const Vec3 k{-0.4, 1.1, 0.25};
  CHECK(max_abs(pauli_exp(0.8, {-0.2, k}), oracle::taylor_exp(0.8, -0.2, k, 30)) < 1e-13);
}

TEST_CASE("pauli_exp is unitary and a one-parameter group") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> ux(-5.0, 5.0);
  for (int n = 0; n < 200; ++n) {
    const auto s = random_sample(rng);
    const double x1 = ux(rng);
    const double x2 = ux(rng);
    CHECK(unitarity_defect(pauli_exp(x1, s)) < 1e-10);
    CHECK(max_abs(pauli_exp(x1 + x2, s), pauli_exp(x2, s) * pauli_exp(x1, s)) < 1e-10);
  }
}

TEST_CASE("pauli_exp rejects non-finite input") {
  CHECK_THROWS_AS(pauli_exp(std::nan(""), {0.0, {1.0, 0.0, 0.0}}), Error);
  CHECK_THROWS_AS(pauli_exp(1.0, {0.0, {INFINITY, 0.0, 0.0}}), Error);
}

TEST_CASE("bloch_of on the Pauli eigenstates") {
  const double h = 1.0 / std::sqrt(2.0);
  auto close = [](BlochVector p, Vec3 q) { return norm(p.as_vec() - q) < 1e-15; };
  CHECK(close(bloch_of({1.0, 0.0}), {0, 0, 1}));
  CHECK(close(bloch_of({h, h}), {1, 0, 0}));
  CHECK(close(bloch_of({h, Complex(0.0, h)}), {0, 1, 0}));
}

TEST_CASE("bloch_of ignores a global phase") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int n = 0; n < 100; ++n) {
    const Spinor psi = Spinor{{u(rng), u(rng)}, {u(rng), u(rng)}}.normalized();
    const Spinor rotated = std::polar(1.0, 3.0 * u(rng)) * psi;
    const auto a = bloch_of(psi);
    const auto b = bloch_of(rotated);
    CHECK(norm(a.as_vec() - b.as_vec()) < 1e-12);
    CHECK(a.norm() == doctest::Approx(1.0).epsilon(1e-14));
  }
  CHECK_THROWS_AS(bloch_of({0.0, 0.0}), Error);
  CHECK_THROWS_AS(bloch_of({2.0, 0.0}), Error);
}

TEST_CASE("matrix algebra") {
  const auto d = TransferMatrix::diagonal({0.0, 1.0}, {0.0, -1.0});
  CHECK(max_abs(inverse(d), TransferMatrix::diagonal({0.0, -1.0}, {0.0, 1.0})) < 1e-15);

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int n = 0; n < 100; ++n) {
    const auto w = oracle::random_unitary(rng);
    CHECK(std::abs(determinant(w)) == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(max_abs(adjoint(w) * w, TransferMatrix::identity()) < 1e-13);

    TransferMatrix m{{u(rng), u(rng)}, {u(rng), u(rng)}, {u(rng), u(rng)}, {u(rng), u(rng)}};
    m = m + Complex(3.0, 0.0) * TransferMatrix::identity();
    CHECK(max_abs(inverse(m) * m, TransferMatrix::identity()) < 1e-12);
    CHECK(max_abs(m * inverse(m), TransferMatrix::identity()) < 1e-12);

    const auto ev = eigenvalues(m);
    CHECK(std::abs(ev[0] + ev[1] - trace(m)) < 1e-12);
    CHECK(std::abs(ev[0] * ev[1] - determinant(m)) < 1e-12);
  }
  CHECK_THROWS_AS(inverse(TransferMatrix{1.0, 2.0, 2.0, 4.0}), Error);
}

TEST_CASE("generator matrix layout") {
  const auto g = generator_matrix({0.5, {1.0, 2.0, 3.0}});
  CHECK(g.m11 == Complex(3.5, 0.0));
  CHECK(g.m12 == Complex(1.0, -2.0));
  CHECK(g.m21 == Complex(1.0, 2.0));
  CHECK(g.m22 == Complex(-2.5, 0.0));
}
