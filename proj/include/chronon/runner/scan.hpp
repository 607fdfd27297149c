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

/// @file scan.hpp
/// Parameter scans.
///
/// A scan spec is JSON:
///
///     {
///       "quantity": "mode_report" | "epsilon" | "width_shift" | "trajectory",
///       "grid":  [ {"name": "energy", "start": 1e-3, "stop": 1e3, "count": 7,
///                   "spacing": "log"} ],
///       "fixed": { "tau_scale": 1, "convention": "paper" },
///       "cap":   1000000
///     }
///
/// Grid points are enumerated row-major (the last axis varies fastest) and
/// produce exactly one output row each, whatever the worker count. A failure
/// at a point leaves its result cells empty and names the error in `status`.

#include <atomic>
#include <cmath>
#include <limits>
#include <map>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include <json.hpp>

#include "chronon/kaon.hpp"
#include "chronon/runner/config.hpp"
#include "chronon/runner/observables.hpp"
#include "chronon/runner/table.hpp"

namespace chronon::runner {

enum class Quantity { ModeReport, Epsilon, WidthShift, Trajectory };
enum class Spacing { Linear, Log };

using ParamValue = std::variant<double, std::string>;

struct Axis {
  std::string name;
  double start = 0.0;
  double stop = 0.0;
  unsigned long count = 1;
  Spacing spacing = Spacing::Linear;

  double value(unsigned long i) const {
    if (count == 1) return start;
    if (i + 1 == count) return stop;
    const double f = double(i) / double(count - 1);
    if (spacing == Spacing::Log) return start * std::pow(stop / start, f);
    return start + (stop - start) * f;
  }
};

inline constexpr unsigned long long kDefaultGridCap = 1000000ULL;

struct ScanSpec {
  Quantity quantity = Quantity::ModeReport;
  std::vector<Axis> grid;
  std::map<std::string, ParamValue> fixed;
  unsigned long long cap = kDefaultGridCap;
};

inline const char* to_string(Quantity q) {
  switch (q) {
    case Quantity::ModeReport: return "mode_report";
    case Quantity::Epsilon: return "epsilon";
    case Quantity::WidthShift: return "width_shift";
    case Quantity::Trajectory: return "trajectory";
  }
  return "?";
}

struct ParamDef {
  std::string name;
  ParamValue fallback;
};

namespace detail {

inline const std::vector<ParamDef>& kaon_params(bool with_engine) {
  static const std::vector<ParamDef> with{{"mixing_E", 1.0}, {"gamma_S", 0.0},  {"gamma_L", 0.0},
                                          {"delta_re", 0.0}, {"delta_im", 0.0}, {"hbar", 1.0},
                                          {"chronon_energy", std::nan("")},    {"n", 1.0},
                                          {"tau_scale", 1.0}, {"engine", std::string("continuous")}};
  static const std::vector<ParamDef> without(with.begin(), with.end() - 1);
  return with_engine ? with : without;
}

}  // namespace detail

/// Parameter columns of a quantity, in output order, with their defaults.
/// chronon_energy = NaN means "same as mixing_E".
inline const std::vector<ParamDef>& parameters_of(Quantity q) {
  static const std::vector<ParamDef> modes{{"energy", 1.0}, {"diag", 0.0},  {"n", 1.0},
                                           {"tau_scale", 1.0}, {"hbar", 1.0},
                                           {"convention", std::string("paper")}};
  static const std::vector<ParamDef> traj{{"energy", 1.0},    {"diag", 0.0}, {"n", 1.0},
                                          {"tau_scale", 1.0}, {"hbar", 1.0},
                                          {"engine", std::string("discrete")},
                                          {"t_max", 1.0},     {"steps", 0.0},
                                          {"psi0", std::string("1,0")}};
  switch (q) {
    case Quantity::ModeReport: return modes;
    case Quantity::Epsilon: return detail::kaon_params(true);
    case Quantity::WidthShift: return detail::kaon_params(false);
    case Quantity::Trajectory: return traj;
  }
  return modes;
}

inline std::vector<std::string> result_columns(Quantity q) {
  std::vector<std::string> c;
  switch (q) {
    case Quantity::ModeReport:
      for (const char* m : {"m0_", "m1_"})
        for (const char* f : {"h", "h_eff_re", "h_eff_im", "h_first_order_re", "h_first_order_im",
                              "step_magnitude", "ratio_exact", "ratio_first_order", "efold_time"})
          c.push_back(std::string(m) + f);
      c.push_back("nu");
      break;
    case Quantity::Epsilon:
      c = {"eps_re", "eps_im", "eps_abs"};
      break;
    case Quantity::WidthShift:
      for (const char* m : {"m0_", "m1_"})
        for (const char* f : {"gamma_continuous", "gamma_effective", "step_magnitude"})
          c.push_back(std::string(m) + f);
      c.push_back("fast_mode");
      break;
    case Quantity::Trajectory:
      c = {"final_t", "final_norm2", "final_p1", "final_p2"};
      break;
  }
  c.push_back("status");
  return c;
}

inline Quantity parse_quantity(std::string_view s) {
  if (s == "mode_report") return Quantity::ModeReport;
  if (s == "epsilon") return Quantity::Epsilon;
  if (s == "width_shift") return Quantity::WidthShift;
  if (s == "trajectory" || s == "trajectory-observable") return Quantity::Trajectory;
  throw Error(ErrorCode::InvalidInput, "scan: unknown quantity '" + std::string(s) + "'");
}

inline bool is_string_param(const ParamDef& d) { return std::holds_alternative<std::string>(d.fallback); }

inline const ParamDef& find_param(Quantity q, const std::string& name) {
  for (const auto& d : parameters_of(q))
    if (d.name == name) return d;
  throw Error(ErrorCode::InvalidInput,
              "scan: quantity " + std::string(to_string(q)) + " has no parameter '" + name + "'");
}

inline unsigned long long grid_size(const ScanSpec& spec) {
  unsigned long long total = 1;
  for (const Axis& a : spec.grid) {
    if (a.count > spec.cap || total > spec.cap / a.count) return std::numeric_limits<unsigned long long>::max();
    total *= a.count;
  }
  return total;
}

/// Checks the spec invariants. Grid-cap violations raise RefusedTooLarge.
inline void validate(const ScanSpec& spec) {
  for (std::size_t i = 0; i < spec.grid.size(); ++i) {
    const Axis& a = spec.grid[i];
    const ParamDef& d = find_param(spec.quantity, a.name);
    if (is_string_param(d)) throw Error(ErrorCode::InvalidInput, "scan: axis '" + a.name + "' is not numeric");
    if (a.count < 1) throw Error(ErrorCode::InvalidInput, "scan: axis '" + a.name + "' needs count >= 1");
    if (!std::isfinite(a.start) || !std::isfinite(a.stop))
      throw Error(ErrorCode::InvalidInput, "scan: axis '" + a.name + "' has non-finite bounds");
    if (a.spacing == Spacing::Log && !(a.start > 0.0 && a.stop > 0.0))
      throw Error(ErrorCode::InvalidInput, "scan: log axis '" + a.name + "' needs positive bounds");
    for (std::size_t j = 0; j < i; ++j)
      if (spec.grid[j].name == a.name) throw Error(ErrorCode::InvalidInput, "scan: duplicate axis '" + a.name + "'");
  }
  for (const auto& [name, value] : spec.fixed) {
    const ParamDef& d = find_param(spec.quantity, name);
    if (is_string_param(d) != std::holds_alternative<std::string>(value))
      throw Error(ErrorCode::InvalidInput, "scan: fixed parameter '" + name + "' has the wrong type");
  }
  if (grid_size(spec) > spec.cap)
    throw Error(ErrorCode::RefusedTooLarge, "scan: grid exceeds the cap of " + std::to_string(spec.cap) + " points");
}

inline ScanSpec parse_scan_spec(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidInput, std::string("scan spec: ") + e.what());
  }
  ScanSpec spec;
  try {
    for (const auto& item : j.items()) {
      const auto& k = item.key();
      if (k != "quantity" && k != "grid" && k != "fixed" && k != "cap")
        throw Error(ErrorCode::InvalidInput, "scan spec: unknown key '" + k + "'");
    }
    spec.quantity = parse_quantity(j.at("quantity").get<std::string>());
    if (j.contains("grid")) {
      for (const auto& a : j.at("grid")) {
        Axis axis;
        axis.name = a.at("name").get<std::string>();
        axis.start = a.at("start").get<double>();
        axis.stop = a.contains("stop") ? a.at("stop").get<double>() : axis.start;
        const double count = a.contains("count") ? a.at("count").get<double>() : 1.0;
        if (!(count >= 1.0) || count != std::floor(count) || count > 1e18)
          throw Error(ErrorCode::InvalidInput, "scan spec: axis count must be a positive integer");
        axis.count = static_cast<unsigned long>(count);
        const std::string spacing = a.contains("spacing") ? a.at("spacing").get<std::string>() : "linear";
        if (spacing == "linear") axis.spacing = Spacing::Linear;
        else if (spacing == "log") axis.spacing = Spacing::Log;
        else throw Error(ErrorCode::InvalidInput, "scan spec: unknown spacing '" + spacing + "'");
        spec.grid.push_back(axis);
      }
    }
    if (j.contains("fixed")) {
      for (const auto& item : j.at("fixed").items()) {
        if (item.value().is_string()) spec.fixed[item.key()] = item.value().get<std::string>();
        else spec.fixed[item.key()] = item.value().get<double>();
      }
    }
    if (j.contains("cap")) spec.cap = j.at("cap").get<unsigned long long>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidInput, std::string("scan spec: ") + e.what());
  }
  validate(spec);
  return spec;
}

inline nlohmann::ordered_json to_json(const ScanSpec& spec) {
  nlohmann::ordered_json j;
  j["quantity"] = to_string(spec.quantity);
  j["grid"] = nlohmann::ordered_json::array();
  for (const Axis& a : spec.grid)
    j["grid"].push_back({{"name", a.name}, {"start", a.start}, {"stop", a.stop}, {"count", a.count},
                         {"spacing", a.spacing == Spacing::Log ? "log" : "linear"}});
  j["fixed"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : spec.fixed) {
    if (std::holds_alternative<double>(v)) j["fixed"][k] = std::get<double>(v);
    else j["fixed"][k] = std::get<std::string>(v);
  }
  j["cap"] = spec.cap;
  return j;
}

namespace detail {

using Point = std::map<std::string, ParamValue>;

inline Point point_at(const ScanSpec& spec, unsigned long long index) {
  Point p;
  for (const auto& d : parameters_of(spec.quantity)) p[d.name] = d.fallback;
  for (const auto& [k, v] : spec.fixed) p[k] = v;
  for (std::size_t a = spec.grid.size(); a-- > 0;) {
    const Axis& axis = spec.grid[a];
    p[axis.name] = axis.value(static_cast<unsigned long>(index % axis.count));
    index /= axis.count;
  }
  if (spec.quantity == Quantity::Epsilon || spec.quantity == Quantity::WidthShift) {
    if (std::isnan(std::get<double>(p["chronon_energy"]))) p["chronon_energy"] = p["mixing_E"];
  }
  return p;
}

inline double num(const Point& p, const char* k) { return std::get<double>(p.at(k)); }
inline const std::string& str(const Point& p, const char* k) { return std::get<std::string>(p.at(k)); }

inline unsigned integer_param(const Point& p, const char* k, unsigned minimum) {
  const double v = num(p, k);
  if (!(v >= minimum) || v != std::floor(v) || v > 4.0e9)
    throw Error(ErrorCode::InvalidInput, std::string(k) + " must be an integer >= " + std::to_string(minimum));
  return static_cast<unsigned>(v);
}

inline UnitSystem units_of(const Point& p) {
  UnitSystem u;
  u.hbar = num(p, "hbar");
  u.validate();
  return u;
}

inline KaonModel kaon_of(const Point& p) {
  KaonModel m;
  m.mixing_E = num(p, "mixing_E");
  m.gamma_S = num(p, "gamma_S");
  m.gamma_L = num(p, "gamma_L");
  m.delta = {num(p, "delta_re"), num(p, "delta_im")};
  m.units = units_of(p);
  m.validate();
  return m;
}

/// Result cells for one grid point; throws on whole-point failures.
inline Row evaluate(Quantity q, const Point& p, std::string& status) {
  Row out;
  switch (q) {
    case Quantity::ModeReport: {
      const UnitSystem units = units_of(p);
      const ChrononParams chronon{num(p, "energy"), integer_param(p, "n", 1), num(p, "tau_scale")};
      const auto spec = mode_report(symmetric_hamiltonian(num(p, "energy"), num(p, "diag")), chronon, units,
                                    parse_convention(str(p, "convention")));
      for (const ModeRecord& m : spec.modes) {
        out.insert(out.end(), {m.h_continuous, m.h_eff_exact.real(), m.h_eff_exact.imag(),
                               m.h_first_order.real(), m.h_first_order.imag(), m.step_magnitude});
        out.push_back(guarded([&] { return imag_real_ratio(m, EnergyKind::Exact); }, status));
        out.push_back(guarded([&] { return imag_real_ratio(m, EnergyKind::FirstOrder); }, status));
        out.push_back(m.efold_time);
      }
      if (spec.nu_nonhermitian) {
        out.push_back(*spec.nu_nonhermitian);
      } else {
        out.push_back(std::monostate{});
        if (!status.empty()) status += ';';
        status += to_string(spec.nu_status.value_or(ErrorCode::UndefinedMeasure));
      }
      break;
    }
    case Quantity::Epsilon: {
      const KaonModel m = kaon_of(p);
      const ChrononParams chronon{num(p, "chronon_energy"), integer_param(p, "n", 1), num(p, "tau_scale")};
      const Complex eps = epsilon_mixing(m, chronon, parse_engine(str(p, "engine")));
      out = {eps.real(), eps.imag(), std::abs(eps)};
      break;
    }
    case Quantity::WidthShift: {
      const KaonModel m = kaon_of(p);
      const ChrononParams chronon{num(p, "chronon_energy"), integer_param(p, "n", 1), num(p, "tau_scale")};
      const auto recs = width_shift(m, chronon);
      double fast = 0.0;
      for (const auto& r : recs) {
        out.insert(out.end(), {r.gamma_continuous, r.gamma_effective, r.step_magnitude});
        if (r.fast) fast = double(r.mode_index);
      }
      out.push_back(fast);
      break;
    }
    case Quantity::Trajectory: {
      const UnitSystem units = units_of(p);
      const ChrononParams chronon{num(p, "energy"), integer_param(p, "n", 1), num(p, "tau_scale")};
      chronon.validate();
      const Engine engine = parse_engine(str(p, "engine"));
      const double t_max = num(p, "t_max");
      unsigned long steps = integer_param(p, "steps", 0);
      if (steps == 0) {
        if (engine == Engine::Continuous) throw Error(ErrorCode::InvalidInput, "steps required for continuous engine");
        steps = static_cast<unsigned long>(std::llround(t_max / chronon.step(units)));
      }
      const TwoState psi0{parse_pair(str(p, "psi0")), 0.0};
      const auto traj =
          evolve(symmetric_hamiltonian(num(p, "energy"), num(p, "diag")), psi0, engine, t_max, steps, chronon, units);
      const Vec2& a = traj.states.back().amplitudes;
      out = {traj.times.back(), norm2(a), std::norm(a[0]), std::norm(a[1])};
      break;
    }
  }
  return out;
}

}  // namespace detail

/// Evaluates every grid point with `workers` threads; output rows are in
/// grid order regardless of scheduling.
inline Table run_scan(const ScanSpec& spec, unsigned workers = 1) {
  validate(spec);
  const unsigned long long total = grid_size(spec);
  const auto& params = parameters_of(spec.quantity);
  const auto results = result_columns(spec.quantity);

  Table t;
  for (const auto& d : params) t.columns.push_back(d.name);
  t.columns.insert(t.columns.end(), results.begin(), results.end());
  t.rows.resize(total);

  auto fill = [&](unsigned long long i) {
    const auto point = detail::point_at(spec, i);
    Row row;
    for (const auto& d : params) {
      const ParamValue& v = point.at(d.name);
      if (std::holds_alternative<double>(v)) row.emplace_back(std::get<double>(v));
      else row.emplace_back(std::get<std::string>(v));
    }
    std::string status;
    Row values;
    try {
      values = detail::evaluate(spec.quantity, point, status);
    } catch (const Error& e) {
      values.assign(results.size() - 1, std::monostate{});
      status = std::string(to_string(e.code()));
    } catch (const std::exception&) {
      values.assign(results.size() - 1, std::monostate{});
      status = "InternalError";
    }
    row.insert(row.end(), values.begin(), values.end());
    row.emplace_back(status_or_ok(status));
    t.rows[i] = std::move(row);
  };

  workers = std::max(1u, workers);
  if (workers == 1 || total < 2) {
    for (unsigned long long i = 0; i < total; ++i) fill(i);
    return t;
  }
  std::atomic<unsigned long long> next{0};
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (unsigned long long i = next++; i < total; i = next++) fill(i);
    });
  }
  for (auto& th : pool) th.join();
  return t;
}

}  // namespace chronon::runner
