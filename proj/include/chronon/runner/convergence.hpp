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

/// @file convergence.hpp
/// Order of accuracy of the chronon map against the exact propagator.

#include <cmath>
#include <vector>

#include "chronon/evolution.hpp"
#include "chronon/runner/table.hpp"

namespace chronon::runner {

struct ConvergenceRow {
  unsigned long long m = 0;
  double max_entry_error = 0.0;
  double observed_order = std::nan("");  // NaN on the first row or when undefined
  bool valid = true;
};

/// For H = E * sigma_x (hbar = 1): compose m steps of I - i H (t_max/m) and
/// compare with exp(-i H t_max). The order between consecutive rows is
/// log(err_prev / err) / log(m / m_prev), i.e. log2(err(m)/err(2m)) for doubling lists.
inline std::vector<ConvergenceRow> convergence_study(double energy, double t_max,
                                                     const std::vector<unsigned long long>& m_list) {
  if (!std::isfinite(energy) || !std::isfinite(t_max) || t_max < 0.0)
    throw Error(ErrorCode::InvalidInput, "convergence_study: energy and t_max must be finite, t_max >= 0");
  for (std::size_t i = 0; i < m_list.size(); ++i) {
    if (m_list[i] < 2) throw Error(ErrorCode::InvalidInput, "convergence_study: every m must be >= 2");
    if (i && m_list[i] <= m_list[i - 1])
      throw Error(ErrorCode::InvalidInput, "convergence_study: m_list must be strictly ascending");
  }

  const UnitSystem units;
  const Operator2 h = symmetric_hamiltonian(energy);
  const Operator2 exact = continuous_propagator(h, t_max, units);

  std::vector<ConvergenceRow> rows;
  for (const auto m : m_list) {
    ConvergenceRow row;
    row.m = m;
    const Operator2 composed = power(discrete_step_operator(h, t_max / double(m), units), m);
    row.max_entry_error = max_abs_diff(composed, exact);
    row.valid = composed.finite() && std::isfinite(row.max_entry_error);
    if (!rows.empty() && row.valid && rows.back().valid && rows.back().max_entry_error > 0.0 &&
        row.max_entry_error > 0.0) {
      row.observed_order = std::log(rows.back().max_entry_error / row.max_entry_error) /
                           std::log(double(m) / double(rows.back().m));
    }
    rows.push_back(row);
  }
  return rows;
}

inline Table convergence_table(const std::vector<ConvergenceRow>& rows) {
  Table t;
  t.columns = {"m", "max_entry_error", "observed_order", "status"};
  for (const auto& r : rows) {
    Row row{double(r.m)};
    row.push_back(r.valid ? Cell{r.max_entry_error} : Cell{});
    row.push_back(std::isnan(r.observed_order) ? Cell{} : Cell{r.observed_order});
    row.push_back(std::string(r.valid ? "ok" : "overflow"));
    t.rows.push_back(std::move(row));
  }
  return t;
}

}  // namespace chronon::runner
