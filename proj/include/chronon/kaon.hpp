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

/// @file kaon.hpp
/// Neutral-kaon two-state model.
///
/// CP eigenstates K1 = (K0 + K0bar)/sqrt(2) and K2 = (K0 - K0bar)/sqrt(2).
/// In the CP basis the generator is
///
///     [[ E - i hbar G_S/2,  delta               ],
///      [ conj(delta),       -E - i hbar G_L/2   ]]
///
/// with Wigner-Weisskopf widths on the diagonal and delta the only coupling
/// between K1 and K2. K1 decays to two pions with rate G_S, K2 to three pions
/// with rate G_L.

#include <cmath>
#include <vector>

#include "chronon/spectrum.hpp"

namespace chronon {

enum class KaonBasis { Flavor, CP };

struct KaonModel {
  double mixing_E = 1.0;
  double gamma_S = 0.0;
  double gamma_L = 0.0;
  Complex delta{0.0, 0.0};
  UnitSystem units;

  void validate() const {
    units.validate();
    if (!(mixing_E > 0.0) || !std::isfinite(mixing_E))
      throw Error(ErrorCode::InvalidInput, "kaon: mixing_E must be > 0");
    if (!(gamma_L >= 0.0) || !std::isfinite(gamma_S) || !(gamma_S >= gamma_L))
      throw Error(ErrorCode::InvalidInput, "kaon: widths must satisfy gamma_S >= gamma_L >= 0");
    if (!is_finite(delta)) throw Error(ErrorCode::InvalidInput, "kaon: delta must be finite");
  }
};

/// Flavor (K0, K0bar) amplitudes to CP (K1, K2) amplitudes. Self-inverse.
inline Operator2 flavor_to_cp() {
  const double r = 1.0 / std::sqrt(2.0);
  return {r, r, r, -r};
}

inline Vec2 to_cp(const Vec2& flavor) { return flavor_to_cp() * flavor; }
inline Vec2 to_flavor(const Vec2& cp) { return flavor_to_cp() * cp; }

inline Vec2 kaon_state(const char* name, KaonBasis basis) {
  const double r = 1.0 / std::sqrt(2.0);
  const std::string n = name;
  Vec2 cp;
  if (n == "K1") cp = {1.0, 0.0};
  else if (n == "K2") cp = {0.0, 1.0};
  else if (n == "K0") cp = {r, r};
  else if (n == "K0bar") cp = {r, -r};
  else throw Error(ErrorCode::InvalidInput, "unknown kaon state '" + n + "'");
  return basis == KaonBasis::CP ? cp : to_flavor(cp);
}

inline Operator2 kaon_hamiltonian(const KaonModel& m, KaonBasis basis) {
  m.validate();
  const double hbar = m.units.hbar;
  const Operator2 cp{Complex{m.mixing_E, -0.5 * hbar * m.gamma_S}, m.delta, std::conj(m.delta),
                     Complex{-m.mixing_E, -0.5 * hbar * m.gamma_L}};
  if (basis == KaonBasis::CP) return cp;
  const Operator2 s = flavor_to_cp();
  return s * cp * s;
}

struct KaonScales {
  ChrononParams chronon;
  UnitSystem units;
  KaonModel model;  // widths left at zero: they are not fixed by the chronon scale
};

/// E/hbar = 1e10 s^-1 and tau = hbar/E = 1e-10 s (times tau_scale).
///
/// Energies are carried as angular frequencies (hbar = 1, time in seconds).
inline KaonScales kaon_chronon_scales(double tau_scale = 1.0) {
  KaonScales s;
  s.units = UnitSystem{1.0, "s", "hbar/s"};
  s.chronon = ChrononParams{1.0e10, 1, tau_scale};
  s.chronon.validate();
  s.model.mixing_E = 1.0e10;
  s.model.units = s.units;
  return s;
}

namespace detail {

inline Series channel_intensity(const Trajectory& traj, double rate, int cp_component, KaonBasis basis) {
  Series out;
  out.reserve(traj.states.size());
  for (std::size_t k = 0; k < traj.states.size(); ++k) {
    const Vec2& a = traj.states[k].amplitudes;
    const Vec2 cp = basis == KaonBasis::CP ? a : to_cp(a);
    out.emplace_back(traj.times[k], rate * std::norm(cp[cp_component]));
  }
  return out;
}

}  // namespace detail

/// Instantaneous 2-pion rate G_S |<K1|psi(t)>|^2.
inline Series two_pion_intensity(const Trajectory& traj, const KaonModel& m,
                                 KaonBasis basis = KaonBasis::CP) {
  return detail::channel_intensity(traj, m.gamma_S, 0, basis);
}

/// Instantaneous 3-pion rate G_L |<K2|psi(t)>|^2.
inline Series three_pion_intensity(const Trajectory& traj, const KaonModel& m,
                                   KaonBasis basis = KaonBasis::CP) {
  return detail::channel_intensity(traj, m.gamma_L, 1, basis);
}

/// Wrong-CP admixture <K1|v_slow>/<K2|v_slow> of the long-lived eigenvector of
/// a CP-basis generator.
///
/// Continuous engine: the slow mode has the smaller -Im(eigenvalue).
/// Discrete engine: eigenvectors of the one-step map, slow mode by the smaller
/// effective width -(2/(n tau)) ln|mu|, i.e. the larger ln|mu|. Ranking by
/// |ln|mu|| instead would pick K1 whenever the map amplifies both modes, since
/// the width damps K1's amplification. Equal decay measures (widthless models)
/// are resolved toward the mode with the larger K2 weight.
inline Complex epsilon_mixing(const Operator2& generator_cp, const ChrononParams& p,
                              const UnitSystem& units, Engine engine) {
  const Operator2 g =
      engine == Engine::Continuous ? generator_cp : discrete_step_operator(generator_cp, p, units);
  const auto [a, b] = eig2(g);
  if (a.degenerate_flag) throw Error(ErrorCode::DegenerateModes, "epsilon_mixing: degenerate modes");

  auto decay = [engine](Complex ev) {
    return engine == Engine::Continuous ? -ev.imag() : -log_modulus(ev);
  };
  const double da = decay(a.value);
  const double db = decay(b.value);
  const EigenPair2* slow = nullptr;
  const double tie_tol = engine == Engine::Continuous ? kDefaultTol * generator_cp.frobenius_norm() : kDefaultTol;
  if (std::abs(da - db) <= tie_tol) {
    slow = std::abs(a.vector[1]) >= std::abs(b.vector[1]) ? &a : &b;
  } else {
    slow = da < db ? &a : &b;
  }
  if (std::abs(slow->vector[1]) == 0.0)
    throw Error(ErrorCode::UndefinedRatio, "epsilon_mixing: slow mode has no K2 component");
  return slow->vector[0] / slow->vector[1];
}

inline Complex epsilon_mixing(const KaonModel& m, const ChrononParams& p, Engine engine) {
  m.validate();
  p.validate();
  return epsilon_mixing(kaon_hamiltonian(m, KaonBasis::CP), p, m.units, engine);
}

struct WidthShiftRecord {
  int mode_index = 0;
  Complex eigenvalue;       // of the generator
  Complex step_multiplier;  // 1 - i eigenvalue n tau / hbar
  double step_magnitude = 0.0;
  double gamma_continuous = 0.0;
  double gamma_effective = 0.0;  // negative: the chronon map amplifies the mode
  bool fast = false;
};

/// Per-mode decay widths of the continuous generator and of the chronon map.
inline std::vector<WidthShiftRecord> width_shift(const Operator2& generator_cp, const ChrononParams& p,
                                                 const UnitSystem& units) {
  p.validate();
  units.validate();
  const double dt = p.step(units);
  const auto [a, b] = eig2(generator_cp);
  std::vector<WidthShiftRecord> out;
  for (const EigenPair2* e : {&a, &b}) {
    WidthShiftRecord r;
    r.mode_index = int(out.size());
    r.eigenvalue = e->value;
    r.step_multiplier = 1.0 - kI * e->value * (dt / units.hbar);
    r.step_magnitude = std::abs(r.step_multiplier);
    if (r.step_magnitude <= kDefaultTol) throw Error(ErrorCode::SingularMap, "width_shift: step multiplier at zero");
    r.gamma_continuous = -2.0 * e->value.imag() / units.hbar + 0.0;
    r.gamma_effective = -(2.0 / dt) * log_modulus(r.step_multiplier);
    out.push_back(r);
  }
  const int fast = out[1].gamma_continuous > out[0].gamma_continuous ? 1 : 0;
  out[fast].fast = true;
  return out;
}

inline std::vector<WidthShiftRecord> width_shift(const KaonModel& m, const ChrononParams& p) {
  return width_shift(kaon_hamiltonian(m, KaonBasis::CP), p, m.units);
}

}  // namespace chronon
