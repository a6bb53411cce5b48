#pragma once

#include <array>
#include <complex>

#include "berry_ring/vec3.hpp"

namespace berry_ring {

using Complex = std::complex<double>;

// Two-component polarization state in whatever basis the caller works in
// (lab frame, local eigenbasis, or Frenet components).
struct Spinor {
  Complex up{1.0, 0.0};
  Complex down{0.0, 0.0};

  double norm_squared() const { return std::norm(up) + std::norm(down); }
  Spinor normalized() const;
  friend Spinor operator*(Complex a, const Spinor& v) { return {a * v.up, a * v.down}; }
};

Complex inner(const Spinor& bra, const Spinor& ket);

// Local generator K = k0 I + kappa . sigma.
struct BirefringenceSample {
  double k0 = 0.0;
  Vec3 kappa{};

  double magnitude() const { return norm(kappa); }
};

struct BlochVector {
  double p1 = 0.0;
  double p2 = 0.0;
  double p3 = 0.0;

  double norm() const { return std::sqrt(p1 * p1 + p2 * p2 + p3 * p3); }
  Vec3 as_vec() const { return {p1, p2, p3}; }
};

// Fixed-size 2x2 complex matrix: evolution operators, ring monodromies and
// scattering matrices all use this type.
struct TransferMatrix {
  Complex m11{1.0, 0.0};
  Complex m12{0.0, 0.0};
  Complex m21{0.0, 0.0};
  Complex m22{1.0, 0.0};

  static constexpr TransferMatrix identity() { return {}; }
  static constexpr TransferMatrix diagonal(Complex a, Complex b) { return {a, 0.0, 0.0, b}; }
  static constexpr TransferMatrix from_columns(const Spinor& c1, const Spinor& c2) {
    return {c1.up, c2.up, c1.down, c2.down};
  }

  Spinor column(int j) const { return j == 0 ? Spinor{m11, m21} : Spinor{m12, m22}; }

  friend TransferMatrix operator*(const TransferMatrix& a, const TransferMatrix& b) {
    return {a.m11 * b.m11 + a.m12 * b.m21, a.m11 * b.m12 + a.m12 * b.m22,
            a.m21 * b.m11 + a.m22 * b.m21, a.m21 * b.m12 + a.m22 * b.m22};
  }
  friend Spinor operator*(const TransferMatrix& a, const Spinor& v) {
    return {a.m11 * v.up + a.m12 * v.down, a.m21 * v.up + a.m22 * v.down};
  }
  friend TransferMatrix operator*(Complex k, const TransferMatrix& a) {
    return {k * a.m11, k * a.m12, k * a.m21, k * a.m22};
  }
  friend TransferMatrix operator+(const TransferMatrix& a, const TransferMatrix& b) {
    return {a.m11 + b.m11, a.m12 + b.m12, a.m21 + b.m21, a.m22 + b.m22};
  }
  friend TransferMatrix operator-(const TransferMatrix& a, const TransferMatrix& b) {
    return {a.m11 - b.m11, a.m12 - b.m12, a.m21 - b.m21, a.m22 - b.m22};
  }
};

TransferMatrix adjoint(const TransferMatrix& m);
Complex determinant(const TransferMatrix& m);
Complex trace(const TransferMatrix& m);

// Throws ErrorCode::singular_matrix when |det| <= 1e-14.
TransferMatrix inverse(const TransferMatrix& m);

std::array<Complex, 2> eigenvalues(const TransferMatrix& m);

// Largest elementwise modulus of a - b.
double max_abs_diff(const TransferMatrix& a, const TransferMatrix& b);

// ||U^dagger U - I||_inf, elementwise.
double unitarity_defect(const TransferMatrix& u);

namespace pauli {
inline constexpr TransferMatrix sigma1{0.0, 1.0, 1.0, 0.0};
inline constexpr TransferMatrix sigma2{0.0, Complex{0.0, -1.0}, Complex{0.0, 1.0}, 0.0};
inline constexpr TransferMatrix sigma3{1.0, 0.0, 0.0, -1.0};
}  // namespace pauli

TransferMatrix generator_matrix(const BirefringenceSample& sample);

// exp(i x K) from the closed-form Pauli identity
//   exp(i x K) = e^{i k0 x} [I cos(|kappa| x) + i (kappa/|kappa|).sigma sin(|kappa| x)].
// For kappa = 0 the direction term is dropped (its coefficient is sin(0)).
TransferMatrix pauli_exp(double x, const BirefringenceSample& sample);

// P = <e|sigma|e>. Requires a normalized spinor (tolerance 1e-6).
BlochVector bloch_of(const Spinor& spinor);

}  // namespace berry_ring
