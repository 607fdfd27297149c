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

// chronon-lab: batch driver for the chronon two-state laboratory.
//
// Exit codes: 0 ok, 2 invalid arguments or spec, 3 numeric-domain error,
// 4 I/O error.

#include <cmath>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "chronon/chronon.hpp"
#include "chronon/runner.hpp"

namespace {

using namespace chronon;
using namespace chronon::runner;

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitIo = 4;

struct Emission {
  std::string format = "csv";
  std::string out;
};

void add_emission(CLI::App* cmd, Emission& e) {
  cmd->add_option("--format", e.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--out", e.out, "Output file (stdout when omitted)");
}

void finish(const Table& t, const Emission& e, const std::string& command, nlohmann::ordered_json params) {
  RunManifest manifest;
  manifest.timestamp = utc_timestamp();
  manifest.command = command;
  manifest.parameters = std::move(params);
  emit(t, parse_format(e.format), e.out, &manifest);
  if (!e.out.empty()) write_manifest(manifest, e.out);
}

int exit_code_for(ErrorCode code) {
  if (code == ErrorCode::IoError) return kExitIo;
  if (is_numeric_domain(code)) return kExitNumeric;
  return kExitInvalid;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"chronon-lab: chronon-discretized two-state evolution"};
  app.require_subcommand(1);

  // modes
  struct {
    double energy = 1.0, tau_scale = 1.0, hbar = 1.0;
    unsigned n = 1;
    std::string convention = "paper";
    Emission emission;
  } modes;
  auto* modes_cmd = app.add_subcommand("modes", "Effective spectrum of the chronon map for H = E sigma_x");
  modes_cmd->add_option("--energy", modes.energy, "Energy E")->required();
  modes_cmd->add_option("--n", modes.n, "Chronon multiplier n");
  modes_cmd->add_option("--tau-scale", modes.tau_scale, "tau = tau_scale * hbar / E");
  modes_cmd->add_option("--hbar", modes.hbar, "Reduced action constant");
  modes_cmd->add_option("--convention", modes.convention)->check(CLI::IsMember({"paper", "standard"}));
  add_emission(modes_cmd, modes.emission);

  // evolve
  struct {
    std::string engine;
    double energy = 1.0, tau_scale = 1.0, hbar = 1.0, t_max = 1.0;
    unsigned n = 1;
    unsigned long steps = 0;
    std::string psi0 = "1,0";
    Emission emission;
  } ev;
  auto* evolve_cmd = app.add_subcommand("evolve", "Trajectory of H = E sigma_x");
  evolve_cmd->add_option("--engine", ev.engine)->required()->check(CLI::IsMember({"continuous", "discrete"}));
  evolve_cmd->add_option("--energy", ev.energy, "Energy E");
  evolve_cmd->add_option("--n", ev.n);
  evolve_cmd->add_option("--tau-scale", ev.tau_scale);
  evolve_cmd->add_option("--hbar", ev.hbar);
  evolve_cmd->add_option("--t-max", ev.t_max);
  evolve_cmd->add_option("--steps", ev.steps, "Grid intervals (derived from n*tau for the discrete engine)");
  evolve_cmd->add_option("--psi0", ev.psi0, "Initial amplitudes c1,c2 (e.g. 1,0 or 0.7071,0.7071i)");
  add_emission(evolve_cmd, ev.emission);

  // kaon
  struct {
    std::string config, observable, engine = "continuous";
    Emission emission;
  } kaon;
  auto* kaon_cmd = app.add_subcommand("kaon", "Neutral-kaon observables");
  kaon_cmd->add_option("--config", kaon.config, "Key-value model file")->required();
  kaon_cmd->add_option("--observable", kaon.observable)
      ->required()
      ->check(CLI::IsMember({"2pi", "3pi", "epsilon", "width-shift"}));
  kaon_cmd->add_option("--engine", kaon.engine)->check(CLI::IsMember({"continuous", "discrete"}));
  add_emission(kaon_cmd, kaon.emission);

  // scan
  struct {
    std::string spec;
    unsigned workers = 1;
    Emission emission;
  } scan;
  auto* scan_cmd = app.add_subcommand("scan", "Parameter scan from a JSON spec");
  scan_cmd->add_option("--spec", scan.spec, "ScanSpec JSON file")->required();
  scan_cmd->add_option("--workers", scan.workers, "Worker threads");
  add_emission(scan_cmd, scan.emission);

  // converge
  struct {
    double energy = 1.0, t_max = 1.0;
    std::vector<unsigned long long> m_list;
    Emission emission;
  } conv;
  auto* conv_cmd = app.add_subcommand("converge", "Convergence of the chronon map to exp(-iHt)");
  conv_cmd->add_option("--energy", conv.energy);
  conv_cmd->add_option("--t-max", conv.t_max);
  conv_cmd->add_option("--m-list", conv.m_list, "Step counts, e.g. 16,32,64")->required()->delimiter(',');
  add_emission(conv_cmd, conv.emission);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitInvalid;
  }

  try {
    if (*modes_cmd) {
      const UnitSystem units{modes.hbar};
      const ChrononParams p{modes.energy, modes.n, modes.tau_scale};
      const auto spec = mode_report(symmetric_hamiltonian(modes.energy), p, units, parse_convention(modes.convention));
      finish(modes_table(spec), modes.emission, "modes",
             {{"energy", modes.energy}, {"n", modes.n}, {"tau_scale", modes.tau_scale}, {"hbar", modes.hbar},
              {"convention", modes.convention}, {"format", modes.emission.format}});
    } else if (*evolve_cmd) {
      const UnitSystem units{ev.hbar};
      const ChrononParams p{ev.energy, ev.n, ev.tau_scale};
      p.validate();
      const Engine engine = parse_engine(ev.engine);
      unsigned long steps = ev.steps;
      if (steps == 0) {
        if (engine == Engine::Continuous) throw Error(ErrorCode::InvalidInput, "--steps is required for the continuous engine");
        steps = static_cast<unsigned long>(std::llround(ev.t_max / p.step(units)));
      }
      const auto traj = evolve(symmetric_hamiltonian(ev.energy), TwoState{parse_pair(ev.psi0), 0.0}, engine, ev.t_max,
                               steps, p, units);
      finish(trajectory_table(traj), ev.emission, "evolve",
             {{"engine", ev.engine}, {"energy", ev.energy}, {"n", ev.n}, {"tau_scale", ev.tau_scale},
              {"hbar", ev.hbar}, {"t_max", ev.t_max}, {"steps", steps}, {"psi0", ev.psi0},
              {"format", ev.emission.format}});
    } else if (*kaon_cmd) {
      const std::string config_text = read_file(kaon.config);
      const KaonRunConfig cfg = kaon_config_from(parse_key_values(config_text));
      const Engine engine = parse_engine(kaon.engine);
      Table table;
      if (kaon.observable == "epsilon") {
        table = epsilon_table(epsilon_mixing(cfg.model, cfg.chronon, engine), engine);
      } else if (kaon.observable == "width-shift") {
        table = width_shift_table(width_shift(cfg.model, cfg.chronon));
      } else {
        const UnitSystem& units = cfg.model.units;
        unsigned long steps = cfg.steps;
        if (steps == 0) {
          if (engine == Engine::Continuous) throw Error(ErrorCode::InvalidInput, "config: steps is required for the continuous engine");
          steps = static_cast<unsigned long>(std::llround(cfg.t_max / cfg.chronon.step(units)));
        }
        const Operator2 h = kaon_hamiltonian(cfg.model, KaonBasis::CP);
        const auto traj = evolve(h, TwoState{to_cp(cfg.psi0_flavor), 0.0}, engine, cfg.t_max, steps, cfg.chronon,
                                 units, /*allow_nonhermitian=*/true);
        table = kaon.observable == "2pi" ? series_table(two_pion_intensity(traj, cfg.model), "rate_2pi")
                                         : series_table(three_pion_intensity(traj, cfg.model), "rate_3pi");
      }
      finish(table, kaon.emission, "kaon",
             {{"config", kaon.config}, {"config_sha256", sha256_hex(config_text)}, {"observable", kaon.observable},
              {"engine", kaon.engine}, {"format", kaon.emission.format}});
    } else if (*scan_cmd) {
      const ScanSpec spec = parse_scan_spec(read_file(scan.spec));
      const Table table = run_scan(spec, scan.workers);
      finish(table, scan.emission, "scan",
             {{"spec", to_json(spec)}, {"workers", scan.workers}, {"format", scan.emission.format}});
    } else if (*conv_cmd) {
      const auto rows = convergence_study(conv.energy, conv.t_max, conv.m_list);
      finish(convergence_table(rows), conv.emission, "converge",
             {{"energy", conv.energy}, {"t_max", conv.t_max}, {"m_list", conv.m_list},
              {"format", conv.emission.format}});
    }
  } catch (const Error& e) {
    std::cerr << "chronon-lab: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "chronon-lab: " << e.what() << "\n";
    return kExitInvalid;
  }
  return kExitOk;
}
