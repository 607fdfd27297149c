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

/// @file spectrum.hpp
/// Complex effective energies of the chronon step map.
///
/// A mode of energy h is multiplied by lambda = 1 - i*h*n*tau/hbar per step.
/// Two energies are attached to it:
///   - the exact one, h_eff = (i*hbar/(n*tau)) * Log(lambda), the unique
///     principal-branch energy with exp(-i*h_eff*n*tau/hbar) = lambda;
///   - the first-order expression h + i*h^2*tau/hbar, kept verbatim. It has
///     twice the imaginary part of the true second-order term
///     i*h^2*n*tau/(2*hbar) and both are reported side by side.

#include <array>
#include <cmath>
#include <limits>
#include <optional>

#include "chronon/evolution.hpp"

namespace chronon {

enum class Direction { Growth, Decay, Stationary };

inline const char* to_string(Direction d) {
  switch (d) {
    case Direction::Growth: return "growth";
    case Direction::Decay: return "decay";
    case Direction::Stationary: return "stationary";
  }
  return "?";
}

enum class EnergyKind { Exact, FirstOrder };

struct EFold {
  double time = 0.0;  // +inf when |lambda| = 1
  Direction direction = Direction::Stationary;
};

struct ModeRecord {
  int mode_index = 0;
  Vec2 eigvec{};
  double h_continuous = 0.0;
  Complex lambda_step;
  Complex h_eff_exact;
  Complex h_first_order;
  double step_magnitude = 0.0;
  double efold_time = 0.0;
  Direction efold_direction = Direction::Stationary;
  /// How the sign of Im(h_eff_exact) reads under the chosen phase convention.
  Direction imag_reading = Direction::Stationary;
  /// Distance of lambda_step from the branch cut (the closed negative real axis).
  double cut_distance = 0.0;
};

struct EffectiveSpectrum {
  std::array<ModeRecord, 2> modes{};
  ChrononParams chronon;
  PhaseConvention convention = PhaseConvention::Paper;
  std::optional<double> nu_nonhermitian;
  std::optional<ErrorCode> nu_status;
  /// max_k |U_d v_k - lambda_k v_k| over the eigenvectors of H.
  double eigvec_residual = 0.0;
};

/// ln|z| accurate for |z| close to 1.
inline double log_modulus(Complex z) {
  const double x = z.real();
  const double y = z.imag();
  return 0.5 * std::log1p((x - 1.0) * (x + 1.0) + y * y);
}

inline double cut_distance(Complex z) { return z.real() >= 0.0 ? std::abs(z) : std::abs(z.imag()); }

/// The energy e with exp(-i e dt / hbar) = multiplier, principal branch.
inline Complex effective_energy_from_multiplier(Complex multiplier, double dt, const UnitSystem& units) {
  if (std::abs(multiplier) == 0.0) throw Error(ErrorCode::SingularMap, "zero step multiplier");
  if (multiplier.real() < 0.0 && std::abs(multiplier.imag()) <= kDefaultTol * std::abs(multiplier))
    throw Error(ErrorCode::BranchCut, "step multiplier on the negative real axis");
  return kI * (units.hbar / dt) * chronon::log1p(multiplier - 1.0);
}

inline Complex effective_energy_exact(double h, const ChrononParams& p, const UnitSystem& units) {
  p.validate();
  units.validate();
  const double dt = p.step(units);
  const double x = h * dt / units.hbar;
  // log1p on -i*x directly keeps the O(x^2) real part for tiny steps.
  const Complex lambda_minus_one{0.0, -x};
  const Complex lambda = 1.0 + lambda_minus_one;
  if (lambda.real() < 0.0 && std::abs(lambda.imag()) <= kDefaultTol * std::abs(lambda))
    throw Error(ErrorCode::BranchCut, "effective_energy_exact: multiplier on the branch cut");
  return kI * (units.hbar / dt) * chronon::log1p(lambda_minus_one);
}

/// E + i E^2 tau / hbar for an explicit tau (tau = 0 is allowed).
inline Complex first_order_energy(double energy, double tau, const UnitSystem& units) {
  units.validate();
  return {energy, energy * energy * tau / units.hbar};
}

/// Same, with tau taken from the chronon parameters. n is not applied.
inline Complex first_order_energy(double energy, const ChrononParams& p, const UnitSystem& units) {
  p.validate();
  return first_order_energy(energy, p.tau(units), units);
}

/// Time n*tau / |ln|lambda|| for the amplitude magnitude to change by e.
inline EFold efold_time(Complex lambda_step, const ChrononParams& p, const UnitSystem& units = {}) {
  p.validate();
  if (std::abs(lambda_step) == 0.0) throw Error(ErrorCode::SingularMap, "efold_time: lambda = 0");
  const double rate = log_modulus(lambda_step);
  if (rate == 0.0) return {std::numeric_limits<double>::infinity(), Direction::Stationary};
  return {p.step(units) / std::abs(rate), rate > 0.0 ? Direction::Growth : Direction::Decay};
}

inline Direction imag_reading(Complex energy, PhaseConvention convention) {
  if (energy.imag() == 0.0) return Direction::Stationary;
  const bool grows = energy.imag() > 0.0;  // |exp(-i e t)| = exp(Im(e) t)
  if (convention == PhaseConvention::Standard) return grows ? Direction::Growth : Direction::Decay;
  return grows ? Direction::Decay : Direction::Growth;
}

/// |Im(h)/Re(h)| of the selected effective energy of a mode.
inline double imag_real_ratio(const ModeRecord& m, EnergyKind which) {
  const Complex h = which == EnergyKind::Exact ? m.h_eff_exact : m.h_first_order;
  if (h.real() == 0.0) throw Error(ErrorCode::UndefinedRatio, "imag_real_ratio: zero real part");
  return std::abs(h.imag() / h.real());
}

/// Mode-by-mode spectrum of the chronon map of a Hermitian H.
inline EffectiveSpectrum mode_report(const Operator2& h, const ChrononParams& p, const UnitSystem& units,
                                     PhaseConvention convention = PhaseConvention::Paper) {
  p.validate();
  units.validate();
  if (!h.is_hermitian(kDefaultTol)) throw Error(ErrorCode::InvalidInput, "mode_report: H is not Hermitian");

  const double dt = p.step(units);
  const Operator2 step_map = discrete_step_operator(h, p, units);
  const auto [e0, e1] = eig2(h);

  EffectiveSpectrum out;
  out.chronon = p;
  out.convention = convention;

  const EigenPair2 pairs[2] = {e0, e1};
  for (int k = 0; k < 2; ++k) {
    ModeRecord& m = out.modes[k];
    m.mode_index = k;
    m.eigvec = pairs[k].vector;
    m.h_continuous = pairs[k].value.real();
    m.lambda_step = Complex{1.0, -m.h_continuous * dt / units.hbar};
    m.h_eff_exact = effective_energy_exact(m.h_continuous, p, units);
    m.h_first_order = first_order_energy(m.h_continuous, p, units);
    m.step_magnitude = std::abs(m.lambda_step);
    const EFold ef = efold_time(m.lambda_step, p, units);
    m.efold_time = ef.time;
    m.efold_direction = ef.direction;
    m.imag_reading = imag_reading(m.h_eff_exact, convention);
    m.cut_distance = cut_distance(m.lambda_step);

    Vec2 r = step_map * m.eigvec;
    r[0] -= m.lambda_step * m.eigvec[0];
    r[1] -= m.lambda_step * m.eigvec[1];
    out.eigvec_residual = std::max(out.eigvec_residual, std::sqrt(norm2(r)));
  }

  try {
    const Operator2 h_eff = (kI * (units.hbar / dt)) * log2(step_map);
    out.nu_nonhermitian = non_hermiticity(h_eff);
  } catch (const Error& e) {
    out.nu_status = e.code();
  }
  return out;
}

}  // namespace chronon
