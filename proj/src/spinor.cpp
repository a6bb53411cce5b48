#include "berry_ring/spinor.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "berry_ring/error.hpp"

namespace berry_ring {

Spinor Spinor::normalized() const {
  const double n = std::sqrt(norm_squared());
  require(n > 0.0, ErrorCode::invalid_argument, "cannot normalize a zero spinor");
  return {up / n, down / n};
}

Complex inner(const Spinor& bra, const Spinor& ket) {
  return std::conj(bra.up) * ket.up + std::conj(bra.down) * ket.down;
}

TransferMatrix adjoint(const TransferMatrix& m) {
  return {std::conj(m.m11), std::conj(m.m21), std::conj(m.m12), std::conj(m.m22)};
}

Complex determinant(const TransferMatrix& m) { return m.m11 * m.m22 - m.m12 * m.m21; }

Complex trace(const TransferMatrix& m) { return m.m11 + m.m22; }

TransferMatrix inverse(const TransferMatrix& m) {
  const Complex det = determinant(m);
  if (!(std::abs(det) > 1e-14)) fail(ErrorCode::singular_matrix, "matrix is singular (|det| <= 1e-14)");
  const Complex inv = 1.0 / det;
  return {inv * m.m22, -inv * m.m12, -inv * m.m21, inv * m.m11};
}

std::array<Complex, 2> eigenvalues(const TransferMatrix& m) {
  const Complex half_tr = 0.5 * trace(m);
  const Complex root = std::sqrt(half_tr * half_tr - determinant(m));
  return {half_tr + root, half_tr - root};
}

double max_abs_diff(const TransferMatrix& a, const TransferMatrix& b) {
  return std::max({std::abs(a.m11 - b.m11), std::abs(a.m12 - b.m12), std::abs(a.m21 - b.m21),
                   std::abs(a.m22 - b.m22)});
}

double unitarity_defect(const TransferMatrix& u) {
  return max_abs_diff(adjoint(u) * u, TransferMatrix::identity());
}

TransferMatrix generator_matrix(const BirefringenceSample& s) {
  const Vec3& k = s.kappa;
  return {s.k0 + k.z, Complex{k.x, -k.y}, Complex{k.x, k.y}, s.k0 - k.z};
}

TransferMatrix pauli_exp(double x, const BirefringenceSample& sample) {
  require_finite(x, "pauli_exp length");
  require_finite(sample.k0, "k0");
  if (!is_finite(sample.kappa)) fail(ErrorCode::invalid_argument, "kappa must be finite");

  const double a = sample.magnitude();
  const double c = std::cos(a * x);
  const double s = std::sin(a * x);
  // sin(a x) * kappa_hat == sin(a x) / a * kappa; the a = 0 limit is zero.
  const double w = a > 0.0 ? s / a : 0.0;
  const double n1 = w * sample.kappa.x;
  const double n2 = w * sample.kappa.y;
  const double n3 = w * sample.kappa.z;
  const Complex phase = std::polar(1.0, sample.k0 * x);
  // I c + i (n1 sigma1 + n2 sigma2 + n3 sigma3)
  return {phase * Complex{c, n3}, phase * Complex{n2, n1}, phase * Complex{-n2, n1},
          phase * Complex{c, -n3}};
}

BlochVector bloch_of(const Spinor& e) {
  const double n2 = e.norm_squared();
  if (!(std::abs(n2 - 1.0) <= 1e-6)) {
    fail(ErrorCode::contract_violation,
         "bloch_of requires a normalized spinor (|e|^2 = " + std::to_string(n2) + ")");
  }
  const Complex c = std::conj(e.up) * e.down;
  return {2.0 * c.real(), 2.0 * c.imag(), std::norm(e.up) - std::norm(e.down)};
}

}  // namespace berry_ring
