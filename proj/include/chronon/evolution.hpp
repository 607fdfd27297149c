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

/// @file evolution.hpp
/// Continuous propagators and the chronon forward-difference step map.
///
/// The difference quotient i*hbar*[psi(t + n*tau) - psi(t)]/(n*tau) = H psi
/// is solved for the later state, giving the explicit update
///
///     psi(t + n*tau) = (I - i*H*n*tau/hbar) psi(t).
///
/// The map is applied repeatedly, one chronon block at a time, and the norm is
/// carried along untouched.

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "chronon/linalg2.hpp"

namespace chronon {

struct UnitSystem {
  double hbar = 1.0;
  std::string time_unit_label = "1";
  std::string energy_unit_label = "1";

  void validate() const {
    if (!(hbar > 0.0) || !std::isfinite(hbar)) throw Error(ErrorCode::InvalidInput, "hbar must be > 0");
  }
};

/// Chronon parameters. tau = tau_scale * hbar / energy_E; tau_scale = 1 is the
/// Compton-time chronon of the energy scale.
struct ChrononParams {
  double energy_E = 1.0;
  unsigned n = 1;
  double tau_scale = 1.0;

  void validate() const {
    if (!(energy_E > 0.0) || !std::isfinite(energy_E))
      throw Error(ErrorCode::InvalidInput, "chronon energy must be > 0");
    if (n < 1) throw Error(ErrorCode::InvalidInput, "chronon multiplier n must be >= 1");
    if (!(tau_scale > 0.0) || !std::isfinite(tau_scale))
      throw Error(ErrorCode::InvalidInput, "tau_scale must be > 0");
  }

  double tau(const UnitSystem& units) const { return tau_scale * units.hbar / energy_E; }
  /// Duration of one application of the step map, n * tau.
  double step(const UnitSystem& units) const { return double(n) * tau(units); }
};

enum class Engine { Continuous, Discrete };

/// Sign of the phase ansatz. Paper: psi ~ exp(+i E t / hbar); Standard: exp(-i E t / hbar).
enum class PhaseConvention { Paper, Standard };

struct TwoState {
  Vec2 amplitudes{};
  double time = 0.0;

  double norm2() const { return chronon::norm2(amplitudes); }
};

struct Trajectory {
  std::vector<double> times;
  std::vector<TwoState> states;
  Engine engine_tag = Engine::Continuous;
};

using Series = std::vector<std::pair<double, double>>;

/// [[diag, E], [E, diag]]
inline Operator2 symmetric_hamiltonian(double energy, double diag = 0.0) {
  return {diag, energy, energy, diag};
}

/// exp(-i H t / hbar). Non-Hermitian generators (decay widths) must be
/// requested explicitly.
inline Operator2 continuous_propagator(const Operator2& h, double t, const UnitSystem& units,
                                       bool allow_nonhermitian = false) {
  units.validate();
  if (!allow_nonhermitian && !h.is_hermitian(kDefaultTol))
    throw Error(ErrorCode::InvalidInput, "continuous_propagator: Hamiltonian is not Hermitian");
  return exp2(h, -kI * (t / units.hbar));
}

/// I - (i/hbar) H dt for an arbitrary step dt.
inline Operator2 discrete_step_operator(const Operator2& h, double dt, const UnitSystem& units) {
  units.validate();
  if (!h.finite()) throw Error(ErrorCode::InvalidInput, "discrete_step_operator: non-finite H");
  return Operator2::identity() - (kI * (dt / units.hbar)) * h;
}

/// The chronon map I - (i/hbar) H n tau.
inline Operator2 discrete_step_operator(const Operator2& h, const ChrononParams& p,
                                        const UnitSystem& units) {
  p.validate();
  return discrete_step_operator(h, p.step(units), units);
}

/// Trajectory of `steps` + 1 states on the uniform grid t_k = k * t_max / steps.
///
/// The discrete engine only exists on the chronon grid: t_max / steps must
/// equal n * tau to 1e-9 relative, otherwise GridMismatch.
inline Trajectory evolve(const Operator2& h, const TwoState& psi0, Engine engine, double t_max,
                         unsigned long steps, const ChrononParams& p, const UnitSystem& units,
                         bool allow_nonhermitian = false) {
  units.validate();
  p.validate();
  if (steps < 1) throw Error(ErrorCode::InvalidInput, "evolve: steps must be >= 1");
  if (!(t_max >= 0.0) || !std::isfinite(t_max))
    throw Error(ErrorCode::InvalidInput, "evolve: t_max must be finite and >= 0");

  const double dt = t_max / double(steps);
  if (engine == Engine::Discrete) {
    const double block = p.step(units);
    if (std::abs(dt - block) > 1e-9 * block) {
      throw Error(ErrorCode::GridMismatch, "evolve: t_max is not " + std::to_string(steps) +
                                               " chronon blocks of n*tau = " + std::to_string(block));
    }
  }

  Trajectory traj;
  traj.engine_tag = engine;
  traj.times.reserve(steps + 1);
  traj.states.reserve(steps + 1);

  const Operator2 step_map = engine == Engine::Discrete ? discrete_step_operator(h, p, units)
                                                        : Operator2::identity();
  if (engine == Engine::Continuous && !allow_nonhermitian && !h.is_hermitian(kDefaultTol))
    throw Error(ErrorCode::InvalidInput, "evolve: Hamiltonian is not Hermitian");

  Vec2 state = psi0.amplitudes;
  for (unsigned long k = 0; k <= steps; ++k) {
    const double t = double(k) * dt;
    if (engine == Engine::Continuous) {
      state = continuous_propagator(h, t, units, true) * psi0.amplitudes;
    } else if (k > 0) {
      state = step_map * state;
    }
    traj.times.push_back(t);
    traj.states.push_back(TwoState{state, t});
  }
  return traj;
}

/// |<direction, psi(t_k)>|^2 at every grid point. With `normalized` the value
/// is divided by the state norm^2 (zero states give 0).
inline Series probability_series(const Trajectory& traj, const Vec2& direction,
                                 bool normalized = false) {
  if (std::abs(norm2(direction) - 1.0) > kDefaultTol)
    throw Error(ErrorCode::InvalidInput, "probability_series: direction is not a unit vector");
  Series out;
  out.reserve(traj.states.size());
  for (std::size_t k = 0; k < traj.states.size(); ++k) {
    const auto& s = traj.states[k];
    double value = std::norm(inner(direction, s.amplitudes));
    if (normalized) {
      const double n2 = s.norm2();
      value = n2 > 0.0 ? value / n2 : 0.0;
    }
    out.emplace_back(traj.times[k], value);
  }
  return out;
}

inline Series norm_series(const Trajectory& traj) {
  Series out;
  out.reserve(traj.states.size());
  for (std::size_t k = 0; k < traj.states.size(); ++k)
    out.emplace_back(traj.times[k], traj.states[k].norm2());
  return out;
}

}  // namespace chronon
