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

/// @file observables.hpp
/// Table builders shared by the CLI subcommands and the scan driver.

#include <functional>
#include <string>
#include <vector>

#include "chronon/kaon.hpp"
#include "chronon/runner/table.hpp"

namespace chronon::runner {

inline const char* to_string(Engine e) { return e == Engine::Continuous ? "continuous" : "discrete"; }
inline const char* to_string(PhaseConvention c) { return c == PhaseConvention::Paper ? "paper" : "standard"; }

inline Engine parse_engine(std::string_view s) {
  if (s == "continuous") return Engine::Continuous;
  if (s == "discrete") return Engine::Discrete;
  throw Error(ErrorCode::InvalidInput, "unknown engine '" + std::string(s) + "'");
}

inline PhaseConvention parse_convention(std::string_view s) {
  if (s == "paper") return PhaseConvention::Paper;
  if (s == "standard") return PhaseConvention::Standard;
  throw Error(ErrorCode::InvalidInput, "unknown convention '" + std::string(s) + "'");
}

/// Runs f and returns its value, or an empty cell after recording the error
/// code in `status`.
inline Cell guarded(const std::function<double()>& f, std::string& status) {
  try {
    return f();
  } catch (const Error& e) {
    if (!status.empty()) status += ';';
    status += to_string(e.code());
    return std::monostate{};
  }
}

inline std::string status_or_ok(const std::string& s) { return s.empty() ? "ok" : s; }

/// One row per mode.
inline Table modes_table(const EffectiveSpectrum& s) {
  Table t;
  t.columns = {"mode",          "h",              "eigvec0_re",       "eigvec0_im",
               "eigvec1_re",    "eigvec1_im",     "lambda_re",        "lambda_im",
               "step_magnitude", "h_eff_re",      "h_eff_im",         "h_first_order_re",
               "h_first_order_im", "ratio_exact", "ratio_first_order", "efold_time",
               "efold_direction", "imag_reading", "cut_distance",     "nu",
               "status"};
  for (const ModeRecord& m : s.modes) {
    std::string status;
    Row r{double(m.mode_index), m.h_continuous, m.eigvec[0].real(), m.eigvec[0].imag(),
          m.eigvec[1].real(),   m.eigvec[1].imag(), m.lambda_step.real(), m.lambda_step.imag(),
          m.step_magnitude,     m.h_eff_exact.real(), m.h_eff_exact.imag(), m.h_first_order.real(),
          m.h_first_order.imag()};
    r.push_back(guarded([&] { return imag_real_ratio(m, EnergyKind::Exact); }, status));
    r.push_back(guarded([&] { return imag_real_ratio(m, EnergyKind::FirstOrder); }, status));
    r.push_back(m.efold_time);
    r.push_back(std::string(to_string(m.efold_direction)));
    r.push_back(std::string(to_string(m.imag_reading)));
    r.push_back(m.cut_distance);
    if (s.nu_nonhermitian) {
      r.push_back(*s.nu_nonhermitian);
    } else {
      r.push_back(std::monostate{});
      if (!status.empty()) status += ';';
      status += to_string(s.nu_status.value_or(ErrorCode::UndefinedMeasure));
    }
    r.push_back(status_or_ok(status));
    t.rows.push_back(std::move(r));
  }
  return t;
}

/// t, amplitudes, norm^2 and the raw basis-state probabilities.
inline Table trajectory_table(const Trajectory& traj) {
  Table t;
  t.columns = {"t", "psi1_re", "psi1_im", "psi2_re", "psi2_im", "norm2", "p1", "p2"};
  for (std::size_t k = 0; k < traj.states.size(); ++k) {
    const Vec2& a = traj.states[k].amplitudes;
    t.rows.push_back(Row{traj.times[k], a[0].real(), a[0].imag(), a[1].real(), a[1].imag(),
                         norm2(a), std::norm(a[0]), std::norm(a[1])});
  }
  return t;
}

inline Table series_table(const Series& s, const std::string& value_column) {
  Table t;
  t.columns = {"t", value_column};
  for (const auto& [time, v] : s) t.rows.push_back(Row{time, v});
  return t;
}

inline Table epsilon_table(Complex eps, Engine engine) {
  Table t;
  t.columns = {"engine", "eps_re", "eps_im", "eps_abs"};
  t.rows.push_back(Row{std::string(to_string(engine)), eps.real(), eps.imag(), std::abs(eps)});
  return t;
}

inline Table width_shift_table(const std::vector<WidthShiftRecord>& recs) {
  Table t;
  t.columns = {"mode", "fast", "eigen_re", "eigen_im", "step_re", "step_im", "step_magnitude",
               "gamma_continuous", "gamma_effective"};
  for (const auto& r : recs)
    t.rows.push_back(Row{double(r.mode_index), r.fast ? 1.0 : 0.0, r.eigenvalue.real(), r.eigenvalue.imag(),
                         r.step_multiplier.real(), r.step_multiplier.imag(), r.step_magnitude,
                         r.gamma_continuous, r.gamma_effective});
  return t;
}

}  // namespace chronon::runner
