// Copyright 2026 The chronon-lab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

/// @file linalg2.hpp
/// Closed-form 2x2 complex linear algebra.
///
/// Every function of a matrix here (exp, principal log) is evaluated through
/// the spectral calculus of a 2x2 matrix: with m = tr(M)/2 and the traceless
/// part C = M - m*I one has C^2 = delta^2 * I, so
///
///     f(M) = <f>(lambda) * I + f[lambda_1, lambda_2] * C
///
/// where <f> is the mean of f over the two eigenvalues and f[.,.] their
/// divided difference. The divided difference is evaluated in a stable form
/// when the eigenvalues are close, and takes its analytic limit when they
/// coincide, so no eigenvector matrix is ever inverted.

#include <algorithm>
#include <array>
#include <cmath>
#include <utility>

#include "chronon/common.hpp"

namespace chronon {

using Vec2 = std::array<Complex, 2>;

inline double norm2(const Vec2& v) { return std::norm(v[0]) + std::norm(v[1]); }

/// <a, b> with the conjugate on the left argument.
inline Complex inner(const Vec2& a, const Vec2& b) {
  return std::conj(a[0]) * b[0] + std::conj(a[1]) * b[1];
}

inline Vec2 operator*(Complex s, const Vec2& v) { return {s * v[0], s * v[1]}; }

class Operator2 {
 public:
  constexpr Operator2() = default;
  constexpr Operator2(Complex a, Complex b, Complex c, Complex d) : m_{{{a, b}, {c, d}}} {}

  static constexpr Operator2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
  static constexpr Operator2 zero() { return {}; }
  static constexpr Operator2 diag(Complex a, Complex d) { return {a, 0.0, 0.0, d}; }

  constexpr Complex& operator()(int i, int j) { return m_[i][j]; }
  constexpr const Complex& operator()(int i, int j) const { return m_[i][j]; }

  Complex trace() const { return m_[0][0] + m_[1][1]; }
  Complex det() const { return m_[0][0] * m_[1][1] - m_[0][1] * m_[1][0]; }

  Operator2 adjoint() const {
    return {std::conj(m_[0][0]), std::conj(m_[1][0]), std::conj(m_[0][1]), std::conj(m_[1][1])};
  }

  bool finite() const {
    return is_finite(m_[0][0]) && is_finite(m_[0][1]) && is_finite(m_[1][0]) &&
           is_finite(m_[1][1]);
  }

  double frobenius_norm() const {
    double s = 0.0;
    for (const auto& row : m_)
      for (const auto& z : row) s += std::norm(z);
    return std::sqrt(s);
  }

  /// Largest entry modulus.
  double max_abs() const {
    double s = 0.0;
    for (const auto& row : m_)
      for (const auto& z : row) s = std::max(s, std::abs(z));
    return s;
  }

  bool is_hermitian(double tol = kDefaultTol) const;
  bool is_unitary(double tol = kDefaultTol) const;

  Operator2& operator+=(const Operator2& o) {
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) m_[i][j] += o.m_[i][j];
    return *this;
  }
  Operator2& operator-=(const Operator2& o) {
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) m_[i][j] -= o.m_[i][j];
    return *this;
  }
  Operator2& operator*=(Complex s) {
    for (auto& row : m_)
      for (auto& z : row) z *= s;
    return *this;
  }

  friend Operator2 operator+(Operator2 a, const Operator2& b) { return a += b; }
  friend Operator2 operator-(Operator2 a, const Operator2& b) { return a -= b; }
  friend Operator2 operator*(Complex s, Operator2 a) { return a *= s; }
  friend Operator2 operator*(Operator2 a, Complex s) { return a *= s; }

  friend Operator2 operator*(const Operator2& a, const Operator2& b) {
    Operator2 r;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) r.m_[i][j] = a.m_[i][0] * b.m_[0][j] + a.m_[i][1] * b.m_[1][j];
    return r;
  }

  friend Vec2 operator*(const Operator2& a, const Vec2& v) {
    return {a.m_[0][0] * v[0] + a.m_[0][1] * v[1], a.m_[1][0] * v[0] + a.m_[1][1] * v[1]};
  }

  friend bool operator==(const Operator2&, const Operator2&) = default;

 private:
  std::array<std::array<Complex, 2>, 2> m_{};
};

/// max_ij |a_ij - b_ij|
inline double max_abs_diff(const Operator2& a, const Operator2& b) { return (a - b).max_abs(); }

inline bool Operator2::is_hermitian(double tol) const { return max_abs_diff(*this, adjoint()) <= tol; }

inline bool Operator2::is_unitary(double tol) const {
  return max_abs_diff(*this * adjoint(), identity()) <= tol;
}

inline constexpr Operator2 sigma_x() { return {0.0, 1.0, 1.0, 0.0}; }
inline constexpr Operator2 sigma_y() { return {0.0, -kI, kI, 0.0}; }
inline constexpr Operator2 sigma_z() { return {1.0, 0.0, 0.0, -1.0}; }

/// Integer power by repeated squaring.
inline Operator2 power(Operator2 base, unsigned long long exponent) {
  Operator2 result = Operator2::identity();
  while (exponent > 0) {
    if (exponent & 1ULL) result = result * base;
    exponent >>= 1;
    if (exponent > 0) base = base * base;
  }
  return result;
}

struct EigenPair2 {
  Complex value;
  Vec2 vector;
  bool degenerate_flag = false;
};

namespace detail {

/// Spectral pieces of a 2x2 matrix: M = mean*I + C with C^2 = delta^2 * I.
struct Spectral2 {
  Complex mean;
  Complex delta;  // principal sqrt of ((a - d)/2)^2 + b*c
  Operator2 traceless;
};

inline Spectral2 spectral(const Operator2& m) {
  const Complex mean = 0.5 * m.trace();
  const Complex h = 0.5 * (m(0, 0) - m(1, 1));
  const Complex delta = std::sqrt(h * h + m(0, 1) * m(1, 0));
  return {mean, delta, Operator2{h, m(0, 1), m(1, 0), -h}};
}

/// Ordering used for all eigenvalue lists: real part, then imaginary part.
inline bool eig_less(Complex a, Complex b) {
  if (a.real() != b.real()) return a.real() < b.real();
  return a.imag() < b.imag();
}

inline Vec2 fix_phase(Vec2 v) {
  const double n = std::sqrt(norm2(v));
  v = Complex(1.0 / n) * v;
  const Complex lead = std::abs(v[0]) > 1e-12 ? v[0] : v[1];
  const Complex phase = std::conj(lead) / std::abs(lead);
  return phase * v;
}

/// sinh(z)/z, analytic at 0.
inline Complex sinhc(Complex z) {
  if (std::abs(z) < 1e-3) {
    const Complex z2 = z * z;
    return 1.0 + z2 / 6.0 * (1.0 + z2 / 20.0 * (1.0 + z2 / 42.0));
  }
  return std::sinh(z) / z;
}

/// atanh(w)/w, analytic at 0.
inline Complex atanhc(Complex w) {
  if (std::abs(w) < 1e-2) {
    const Complex w2 = w * w;
    Complex sum = 0.0;
    Complex term = 1.0;
    for (int k = 0; k < 8; ++k) {
      sum += term / double(2 * k + 1);
      term *= w2;
    }
    return sum;
  }
  return std::atanh(w) / w;
}

inline void require_finite(const Operator2& m, const char* who) {
  if (!m.finite()) throw Error(ErrorCode::InvalidInput, std::string(who) + ": non-finite matrix entry");
}

}  // namespace detail

/// Eigendecomposition of a general complex 2x2 matrix.
///
/// Eigenvalues are ordered by real part, then imaginary part. Each eigenvector
/// has unit norm with its first non-negligible component real and positive.
/// `degenerate_flag` is set on both pairs when |l1 - l2| <= tol * ||M||_F;
/// when M is then a multiple of the identity the canonical basis is returned,
/// otherwise (a defective matrix) both pairs carry the single eigenvector.
inline std::pair<EigenPair2, EigenPair2> eig2(const Operator2& m, double tol = kDefaultTol) {
  detail::require_finite(m, "eig2");
  const auto sp = detail::spectral(m);
  const double scale = m.frobenius_norm();
  const bool degenerate = 2.0 * std::abs(sp.delta) <= tol * scale;

  Complex lambda[2] = {sp.mean - sp.delta, sp.mean + sp.delta};
  double sign[2] = {-1.0, 1.0};
  if (detail::eig_less(lambda[1], lambda[0])) {
    std::swap(lambda[0], lambda[1]);
    std::swap(sign[0], sign[1]);
  }

  const Complex h = sp.traceless(0, 0);
  const Complex b = m(0, 1);
  const Complex c = m(1, 0);
  const double null_tol = tol * std::max(scale, 1.0);

  EigenPair2 pairs[2];
  for (int k = 0; k < 2; ++k) {
    const Complex d = sign[k] * sp.delta;
    // Rows of (M - lambda I): (h - d, b) and (c, -h - d).
    const Vec2 from_row0{b, d - h};
    const Vec2 from_row1{h + d, c};
    const Vec2& pick = norm2(from_row0) >= norm2(from_row1) ? from_row0 : from_row1;
    Vec2 v;
    if (std::sqrt(norm2(pick)) <= null_tol) {
      v = k == 0 ? Vec2{1.0, 0.0} : Vec2{0.0, 1.0};
    } else {
      v = detail::fix_phase(pick);
    }
    pairs[k] = EigenPair2{lambda[k], v, degenerate};
  }
  return {pairs[0], pairs[1]};
}

/// exp(s * M).
inline Operator2 exp2(const Operator2& m, Complex s) {
  detail::require_finite(m, "exp2");
  if (!is_finite(s)) throw Error(ErrorCode::InvalidInput, "exp2: non-finite scale");
  const auto sp = detail::spectral(m);
  const Complex z = s * sp.delta;

  Complex mean_f;
  Complex divided;
  if (std::abs(z) < 1e-2) {
    // Close or coincident eigenvalues: e^{s m} [cosh(z) I + s sinhc(z) C].
    const Complex em = std::exp(s * sp.mean);
    mean_f = em * std::cosh(z);
    divided = em * s * detail::sinhc(z);
  } else {
    const Complex e1 = std::exp(s * (sp.mean + sp.delta));
    const Complex e2 = std::exp(s * (sp.mean - sp.delta));
    mean_f = 0.5 * (e1 + e2);
    divided = (e1 - e2) / (2.0 * sp.delta);
  }
  return mean_f * Operator2::identity() + divided * sp.traceless;
}

/// Principal matrix logarithm.
///
/// Eigenvalues of the result have imaginary part in (-pi, pi]. An eigenvalue
/// of U with modulus <= tol raises SingularMap; one on the negative real axis
/// (|Im| <= tol * |mu|) raises BranchCut.
inline Operator2 log2(const Operator2& u, double tol = kDefaultTol) {
  detail::require_finite(u, "log2");
  // Work with K = U - I so that maps close to the identity keep full precision.
  const Operator2 k = u - Operator2::identity();
  const auto sp = detail::spectral(k);
  const Complex kappa[2] = {sp.mean + sp.delta, sp.mean - sp.delta};

  for (const Complex kap : kappa) {
    const Complex mu = 1.0 + kap;
    if (std::abs(mu) <= tol) throw Error(ErrorCode::SingularMap, "log2: eigenvalue at zero");
    if (mu.real() < 0.0 && std::abs(mu.imag()) <= tol * std::abs(mu))
      throw Error(ErrorCode::BranchCut, "log2: eigenvalue on the negative real axis");
  }

  const Complex l1 = chronon::log1p(kappa[0]);
  const Complex l2 = chronon::log1p(kappa[1]);
  const Complex mu_sum = 2.0 + kappa[0] + kappa[1];
  const Complex w = 2.0 * sp.delta / mu_sum;

  Complex divided;
  if (std::abs(w) < 1e-2) {
    // log(mu1) - log(mu2) = 2 atanh((mu1 - mu2)/(mu1 + mu2)) near coincidence.
    divided = 2.0 * detail::atanhc(w) / mu_sum;
  } else {
    divided = (l1 - l2) / (2.0 * sp.delta);
  }
  return 0.5 * (l1 + l2) * Operator2::identity() + divided * sp.traceless;
}

struct PauliCoefficients {
  Complex a0, a1, a2, a3;
};

/// M = a0 I + a1 sx + a2 sy + a3 sz.
inline PauliCoefficients pauli_decompose(const Operator2& m) {
  return {0.5 * (m(0, 0) + m(1, 1)), 0.5 * (m(0, 1) + m(1, 0)), 0.5 * kI * (m(0, 1) - m(1, 0)),
          0.5 * (m(0, 0) - m(1, 1))};
}

inline Operator2 pauli_reconstruct(const PauliCoefficients& p) {
  return {p.a0 + p.a3, p.a1 - kI * p.a2, p.a1 + kI * p.a2, p.a0 - p.a3};
}

/// ||M - M^dagger||_F / (2 ||M||_F): 0 for Hermitian, 1 for anti-Hermitian.
inline double non_hermiticity(const Operator2& m) {
  const double norm = m.frobenius_norm();
  if (!(norm > 0.0)) throw Error(ErrorCode::UndefinedMeasure, "non_hermiticity: zero matrix");
  return (m - m.adjoint()).frobenius_norm() / (2.0 * norm);
}

}  // namespace chronon
