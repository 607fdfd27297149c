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

/// @file config.hpp
/// Flat key-value configuration files and value parsers.
///
/// Format: UTF-8 text, one `key = value` per line, `#` starts a comment that
/// runs to the end of the line, blank lines ignored, duplicate keys rejected.
///
/// Kaon model keys (only mixing_E is required):
///
///     mixing_E        energy E (> 0)
///     gamma_S         short-lived width (default 0)
///     gamma_L         long-lived width (default 0, <= gamma_S)
///     delta_re        real part of the K1-K2 coupling (default 0)
///     delta_im        imaginary part of the coupling (default 0)
///     hbar            reduced action constant (default 1)
///     time_unit       label, e.g. s
///     energy_unit     label, e.g. hbar/s
///     chronon_energy  energy setting tau = tau_scale * hbar / chronon_energy (default mixing_E)
///     n               chronon multiplier (default 1)
///     tau_scale       (default 1)
///     t_max           trajectory length for the 2pi / 3pi observables
///     steps           grid intervals; derived from n*tau for the discrete engine when absent
///     psi0            K0 | K0bar | K1 | K2 or a flavor-basis pair "c0,c0bar" (default K0)

#include <cctype>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>

#include "chronon/kaon.hpp"

namespace chronon::runner {

using KeyValues = std::map<std::string, std::string>;

inline std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

inline KeyValues parse_key_values(std::string_view text) {
  KeyValues kv;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string body = trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos)
      throw Error(ErrorCode::InvalidInput, "config line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(std::string_view(body).substr(0, eq));
    const std::string value = trim(std::string_view(body).substr(eq + 1));
    if (key.empty()) throw Error(ErrorCode::InvalidInput, "config line " + std::to_string(lineno) + ": empty key");
    if (!kv.emplace(key, value).second)
      throw Error(ErrorCode::InvalidInput, "config: duplicate key '" + key + "'");
  }
  return kv;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline double parse_real(std::string_view s, std::string_view what) {
  const std::string t = trim(s);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(t, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != t.size())
    throw Error(ErrorCode::InvalidInput, std::string(what) + ": not a number '" + t + "'");
  return v;
}

inline unsigned long parse_count(std::string_view s, std::string_view what) {
  const double v = parse_real(s, what);
  if (!(v >= 0.0) || v != std::floor(v) || v > 4.0e18)
    throw Error(ErrorCode::InvalidInput, std::string(what) + ": expected a non-negative integer");
  return static_cast<unsigned long>(v);
}

/// Complex literal: 1, -2.5, 3i, -i, 1+2i, 0.5-1e-3i (j accepted for i).
inline Complex parse_complex(std::string_view s) {
  std::string t;
  for (char c : s)
    if (!std::isspace(static_cast<unsigned char>(c))) t += c;
  if (t.empty()) throw Error(ErrorCode::InvalidInput, "empty complex literal");
  if (t.back() != 'i' && t.back() != 'j') return {parse_real(t, "complex"), 0.0};
  t.pop_back();
  std::size_t split = std::string::npos;
  for (std::size_t k = t.size(); k-- > 1;) {
    if ((t[k] == '+' || t[k] == '-') && t[k - 1] != 'e' && t[k - 1] != 'E') {
      split = k;
      break;
    }
  }
  const std::string re = split == std::string::npos ? "" : t.substr(0, split);
  std::string im = split == std::string::npos ? t : t.substr(split);
  if (im.empty() || im == "+") im = "1";
  else if (im == "-") im = "-1";
  return {re.empty() ? 0.0 : parse_real(re, "complex"), parse_real(im, "complex")};
}

/// "c0,c1" pair of complex literals.
inline Vec2 parse_pair(std::string_view s) {
  const auto comma = s.find(',');
  if (comma == std::string_view::npos || s.find(',', comma + 1) != std::string_view::npos)
    throw Error(ErrorCode::InvalidInput, "expected two comma-separated amplitudes");
  return {parse_complex(s.substr(0, comma)), parse_complex(s.substr(comma + 1))};
}

struct KaonRunConfig {
  KaonModel model;
  ChrononParams chronon;
  double t_max = 0.0;
  unsigned long steps = 0;  // 0: derive from the chronon grid
  Vec2 psi0_flavor{};
};

inline KaonRunConfig kaon_config_from(const KeyValues& kv) {
  static const char* known[] = {"mixing_E", "gamma_S", "gamma_L", "delta_re",  "delta_im",
                                "hbar",     "time_unit", "energy_unit", "chronon_energy", "n",
                                "tau_scale", "t_max",  "steps",   "psi0"};
  for (const auto& [key, value] : kv) {
    bool ok = false;
    for (const char* k : known) ok = ok || key == k;
    if (!ok) throw Error(ErrorCode::InvalidInput, "kaon config: unknown key '" + key + "'");
  }
  auto get = [&kv](const char* key, double fallback) {
    auto it = kv.find(key);
    return it == kv.end() ? fallback : parse_real(it->second, key);
  };
  if (!kv.count("mixing_E")) throw Error(ErrorCode::InvalidInput, "kaon config: mixing_E is required");

  KaonRunConfig c;
  c.model.mixing_E = get("mixing_E", 0.0);
  c.model.gamma_S = get("gamma_S", 0.0);
  c.model.gamma_L = get("gamma_L", 0.0);
  c.model.delta = {get("delta_re", 0.0), get("delta_im", 0.0)};
  c.model.units.hbar = get("hbar", 1.0);
  if (auto it = kv.find("time_unit"); it != kv.end()) c.model.units.time_unit_label = it->second;
  if (auto it = kv.find("energy_unit"); it != kv.end()) c.model.units.energy_unit_label = it->second;
  c.chronon.energy_E = get("chronon_energy", c.model.mixing_E);
  c.chronon.n = static_cast<unsigned>(kv.count("n") ? parse_count(kv.at("n"), "n") : 1);
  c.chronon.tau_scale = get("tau_scale", 1.0);
  c.t_max = get("t_max", 0.0);
  c.steps = kv.count("steps") ? parse_count(kv.at("steps"), "steps") : 0;
  const std::string psi = kv.count("psi0") ? kv.at("psi0") : "K0";
  if (psi == "K0" || psi == "K0bar" || psi == "K1" || psi == "K2")
    c.psi0_flavor = kaon_state(psi.c_str(), KaonBasis::Flavor);
  else
    c.psi0_flavor = parse_pair(psi);
  c.model.validate();
  c.chronon.validate();
  return c;
}

inline KaonRunConfig load_kaon_config(const std::string& path) {
  return kaon_config_from(parse_key_values(read_file(path)));
}

}  // namespace chronon::runner
