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

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <numbers>
#include <random>

#include "chronon/runner.hpp"

using namespace chronon;
using namespace chronon::runner;

namespace {

template <class F>
ErrorCode error_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorCode::InvalidInput;
}

double num(const Table& t, std::size_t row, std::string_view col) {
  return std::get<double>(t.rows.at(row).at(t.column(col)));
}

std::string text(const Table& t, std::size_t row, std::string_view col) {
  return std::get<std::string>(t.rows.at(row).at(t.column(col)));
}

std::filesystem::path scratch_dir() {
  auto dir = std::filesystem::temp_directory_path() / "chronon_runner_test";
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST(FormatDouble, ShortestRoundTrip) {
  EXPECT_EQ(format_double(0.1), "0.1");
  EXPECT_EQ(format_double(1e-10), "1e-10");
  EXPECT_EQ(format_double(2.0), "2");
  EXPECT_EQ(format_double(HUGE_VAL), "inf");
  EXPECT_EQ(format_double(-HUGE_VAL), "-inf");
  std::mt19937_64 rng(73);
  std::uniform_real_distribution<double> exponent(-300, 300), mantissa(-1, 1);
  for (int trial = 0; trial < 10000; ++trial) {
    const double v = mantissa(rng) * std::pow(10.0, exponent(rng));
    EXPECT_EQ(*parse_double(format_double(v)), v);
  }
}

TEST(Csv, QuotingAndLineEndings) {
  Table t;
  t.columns = {"a", "b,c", "d"};
  t.rows.push_back(Row{1.5, std::string("say \"hi\""), std::monostate{}});
  t.rows.push_back(Row{-HUGE_VAL, std::string("two\nlines"), std::string("ok")});
  const std::string csv = to_csv(t);
  EXPECT_EQ(csv, "a,\"b,c\",d\n1.5,\"say \"\"hi\"\"\",\n-inf,\"two\nlines\",ok\n");
  EXPECT_EQ(csv.find('\r'), std::string::npos);

  const Table back = parse_csv(csv);
  EXPECT_EQ(back.columns, t.columns);
  EXPECT_EQ(back.rows, t.rows);
}

TEST(Csv, EmptyTableIsHeaderOnly) {
  Table t;
  t.columns = {"x", "y"};
  EXPECT_EQ(to_csv(t), "x,y\n");
  EXPECT_TRUE(parse_csv("x,y\n").rows.empty());
  EXPECT_EQ(to_json(t), "[]\n");
}

TEST(Csv, RoundTripProperty) {
  std::mt19937_64 rng(79);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  std::uniform_int_distribution<int> kind(0, 9);
  for (int trial = 0; trial < 50; ++trial) {
    Table t;
    t.columns = {"p", "q", "r", "status"};
    for (int r = 0; r < 40; ++r) {
      Row row;
      for (int c = 0; c < 3; ++c) {
        const int k = kind(rng);
        if (k == 0) row.emplace_back(std::monostate{});
        else if (k == 1) row.emplace_back(k % 2 ? HUGE_VAL : -HUGE_VAL);
        else row.emplace_back(u(rng) * std::pow(10.0, kind(rng) - 5));
      }
      row.emplace_back(std::string(kind(rng) ? "ok" : "BranchCut"));
      t.rows.push_back(std::move(row));
    }
    const Table back = parse_csv(to_csv(t));
    ASSERT_EQ(back.rows, t.rows);
    // The JSON form parses back to the same cells.
    ASSERT_EQ(parse_json_table(to_json(t)).rows, t.rows);
  }
}

TEST(Csv, RejectsMalformedInput) {
  EXPECT_EQ(error_of([] { parse_csv("a,b\n1\n"); }), ErrorCode::InvalidInput);
  EXPECT_EQ(error_of([] { parse_csv("a\n\"open\n"); }), ErrorCode::InvalidInput);
}

TEST(Digest, KnownVectorAndDeterminism) {
  EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  EXPECT_EQ(sha256_hex(""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}

TEST(Config, KeyValueParsing) {
  const auto kv = parse_key_values("# header\nmixing_E = 2.5   # trailing\n\n  gamma_S=0.1\npsi0 = K0bar\n");
  EXPECT_EQ(kv.size(), 3u);
  EXPECT_EQ(kv.at("mixing_E"), "2.5");
  EXPECT_EQ(kv.at("gamma_S"), "0.1");
  EXPECT_EQ(error_of([] { parse_key_values("a = 1\na = 2\n"); }), ErrorCode::InvalidInput);
  EXPECT_EQ(error_of([] { parse_key_values("just text\n"); }), ErrorCode::InvalidInput);
  EXPECT_EQ(error_of([] { parse_key_values(" = 3\n"); }), ErrorCode::InvalidInput);
}

TEST(Config, KaonModelFromKeys) {
  const auto cfg = kaon_config_from(parse_key_values(
      "mixing_E = 1e10\ngamma_S = 1.1e10\ngamma_L = 2e7\ndelta_im = 1e7\ntime_unit = s\nt_max = 1e-9\n"));
  EXPECT_EQ(cfg.model.mixing_E, 1e10);
  EXPECT_EQ(cfg.model.gamma_S, 1.1e10);
  EXPECT_EQ(cfg.model.delta, Complex(0.0, 1e7));
  EXPECT_EQ(cfg.chronon.energy_E, 1e10);
  EXPECT_EQ(cfg.chronon.tau(cfg.model.units), 1e-10);
  EXPECT_EQ(cfg.model.units.time_unit_label, "s");
  EXPECT_NEAR(std::abs(cfg.psi0_flavor[0] - 1.0), 0.0, 1e-15);

  EXPECT_EQ(error_of([] { kaon_config_from(parse_key_values("gamma_S = 1\n")); }), ErrorCode::InvalidInput);
  EXPECT_EQ(error_of([] { kaon_config_from(parse_key_values("mixing_E = 1\nfoo = 2\n")); }),
            ErrorCode::InvalidInput);
  EXPECT_EQ(error_of([] { kaon_config_from(parse_key_values("mixing_E = 1\ngamma_L = 2\n")); }),
            ErrorCode::InvalidInput);
  EXPECT_EQ(error_of([] { kaon_config_from(parse_key_values("mixing_E = abc\n")); }), ErrorCode::InvalidInput);
}

TEST(Config, ShippedExampleLoads) {
  const auto cfg = load_kaon_config(std::string(CHRONON_GOLDEN_DIR) + "/../../configs/kaon_example.conf");
  EXPECT_EQ(cfg.chronon.tau(cfg.model.units), 1e-10);
  EXPECT_GT(cfg.model.gamma_S, cfg.model.gamma_L);
}

TEST(Config, ComplexLiterals) {
  EXPECT_EQ(parse_complex("1"), Complex(1.0, 0.0));
  EXPECT_EQ(parse_complex("-2.5"), Complex(-2.5, 0.0));
  EXPECT_EQ(parse_complex("3i"), Complex(0.0, 3.0));
  EXPECT_EQ(parse_complex("-i"), Complex(0.0, -1.0));
  EXPECT_EQ(parse_complex("1+2i"), Complex(1.0, 2.0));
  EXPECT_EQ(parse_complex("0.5 - 1e-3i"), Complex(0.5, -1e-3));
  EXPECT_EQ(parse_complex("1e-3-i"), Complex(1e-3, -1.0));
  const Vec2 v = parse_pair("0.6,0.8i");
  EXPECT_EQ(v[1], Complex(0.0, 0.8));
  EXPECT_EQ(error_of([] { parse_pair("1"); }), ErrorCode::InvalidInput);
  EXPECT_EQ(error_of([] { parse_complex("x"); }), ErrorCode::InvalidInput);
}

TEST(Convergence, FirstOrderRows) {
  std::vector<unsigned long long> ms;
  for (int k = 4; k <= 12; ++k) ms.push_back(1ULL << k);
  const auto rows = convergence_study(1.0, 1.0, ms);
  ASSERT_EQ(rows.size(), ms.size());
  EXPECT_TRUE(std::isnan(rows[0].observed_order));
  for (std::size_t i = 1; i < rows.size(); ++i) {
    EXPECT_GE(rows[i].observed_order, 0.8);
    EXPECT_LE(rows[i].observed_order, 1.2);
    EXPECT_NEAR(rows[i].observed_order, std::log2(rows[i - 1].max_entry_error / rows[i].max_entry_error), 1e-12);
  }
}

TEST(Convergence, VeryFineGrid) {
  const auto rows = convergence_study(1.0, 1.0, {1ULL << 20});
  EXPECT_LE(rows[0].max_entry_error, 1e-5);
}

TEST(Convergence, ZeroDuration) {
  const auto rows = convergence_study(1.0, 0.0, {16, 32, 64});
  for (const auto& r : rows) {
    EXPECT_EQ(r.max_entry_error, 0.0);
    EXPECT_TRUE(r.valid);
  }
  const Table t = convergence_table(rows);
  EXPECT_EQ(text(t, 2, "status"), "ok");
  EXPECT_TRUE(std::holds_alternative<std::monostate>(t.rows[1][t.column("observed_order")]));
}

TEST(Convergence, OverflowIsFlaggedNotFatal) {
  const auto rows = convergence_study(1e200, 1.0, {2, 4});
  EXPECT_FALSE(rows[0].valid);
  EXPECT_EQ(text(convergence_table(rows), 0, "status"), "overflow");
}

TEST(Convergence, ValidatesList) {
  EXPECT_EQ(error_of([] { convergence_study(1.0, 1.0, {32, 16}); }), ErrorCode::InvalidInput);
  EXPECT_EQ(error_of([] { convergence_study(1.0, 1.0, {1, 2}); }), ErrorCode::InvalidInput);
}

TEST(Scan, RowCountAndOrder) {
  ScanSpec spec = parse_scan_spec(R"({
    "quantity": "mode_report",
    "grid": [{"name": "energy", "start": 1, "stop": 10, "count": 10},
             {"name": "tau_scale", "start": 0.1, "stop": 1, "count": 10}]
  })");
  const Table t = run_scan(spec);
  ASSERT_EQ(t.rows.size(), 100u);
  EXPECT_EQ(num(t, 0, "energy"), 1.0);
  EXPECT_EQ(num(t, 0, "tau_scale"), 0.1);
  EXPECT_EQ(num(t, 1, "tau_scale"), 0.2);  // last axis fastest
  EXPECT_EQ(num(t, 10, "energy"), 2.0);
  EXPECT_EQ(num(t, 99, "energy"), 10.0);
  EXPECT_EQ(num(t, 99, "tau_scale"), 1.0);
  for (std::size_t r = 0; r < t.rows.size(); ++r) EXPECT_EQ(text(t, r, "status"), "ok");
}

TEST(Scan, RatioIsScaleInvariant) {
  const Table t = run_scan(parse_scan_spec(R"({
    "quantity": "mode_report",
    "grid": [{"name": "energy", "start": 1e-3, "stop": 1e3, "count": 13, "spacing": "log"}],
    "fixed": {"tau_scale": 1}
  })"));
  ASSERT_EQ(t.rows.size(), 13u);
  EXPECT_DOUBLE_EQ(num(t, 12, "energy"), 1e3);
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    EXPECT_NEAR(num(t, r, "m0_ratio_exact"), 0.441271, 1e-6);
    EXPECT_NEAR(num(t, r, "m1_ratio_exact"), 2 * std::log(2.0) / std::numbers::pi, 1e-9);
  }
}

TEST(Scan, EpsilonNullScan) {
  const Table t = run_scan(parse_scan_spec(R"({
    "quantity": "epsilon",
    "grid": [{"name": "delta_re", "start": 0, "count": 1},
             {"name": "tau_scale", "start": 0.05, "stop": 1, "count": 5}],
    "fixed": {"gamma_S": 0.2, "gamma_L": 0.001, "engine": "discrete"}
  })"));
  for (std::size_t r = 0; r < t.rows.size(); ++r) EXPECT_EQ(num(t, r, "eps_abs"), 0.0);
}

TEST(Scan, ErrorsBecomeRows) {
  const Table t = run_scan(parse_scan_spec(R"({
    "quantity": "mode_report",
    "grid": [{"name": "energy", "start": 0, "stop": 1, "count": 2}]
  })"));
  ASSERT_EQ(t.rows.size(), 2u);
  EXPECT_EQ(text(t, 0, "status"), "InvalidInput");
  EXPECT_TRUE(std::holds_alternative<std::monostate>(t.rows[0][t.column("nu")]));
  EXPECT_EQ(text(t, 1, "status"), "ok");

  const Table traj = run_scan(parse_scan_spec(R"({
    "quantity": "trajectory",
    "grid": [{"name": "t_max", "start": 2, "stop": 2.5, "count": 2}],
    "fixed": {"engine": "discrete", "steps": 2}
  })"));
  EXPECT_EQ(text(traj, 0, "status"), "ok");
  EXPECT_EQ(num(traj, 0, "final_norm2"), 4.0);
  EXPECT_EQ(text(traj, 1, "status"), "GridMismatch");
}

TEST(Scan, CapRefusesBeforeComputing) {
  EXPECT_EQ(error_of([] {
              parse_scan_spec(R"({"quantity": "mode_report", "cap": 50,
                "grid": [{"name": "energy", "start": 1, "stop": 2, "count": 10},
                         {"name": "n", "start": 1, "stop": 6, "count": 6}]})");
            }),
            ErrorCode::RefusedTooLarge);
  EXPECT_EQ(error_of([] {
              parse_scan_spec(R"({"quantity": "mode_report",
                "grid": [{"name": "energy", "start": 1, "stop": 2, "count": 1000},
                         {"name": "tau_scale", "start": 1, "stop": 2, "count": 1001}]})");
            }),
            ErrorCode::RefusedTooLarge);
}

TEST(Scan, SpecValidation) {
  auto bad = [](const char* json) { return error_of([&] { parse_scan_spec(json); }); };
  EXPECT_EQ(bad(R"({"quantity": "nope"})"), ErrorCode::InvalidInput);
  EXPECT_EQ(bad(R"({"quantity": "epsilon", "grid": [{"name": "energy", "start": 1}]})"), ErrorCode::InvalidInput);
  EXPECT_EQ(bad(R"({"quantity": "epsilon", "grid": [{"name": "engine", "start": 1}]})"), ErrorCode::InvalidInput);
  EXPECT_EQ(bad(R"({"quantity": "mode_report", "grid": [{"name": "energy", "start": 1},
                                                         {"name": "energy", "start": 2}]})"),
            ErrorCode::InvalidInput);
  EXPECT_EQ(bad(R"({"quantity": "mode_report", "grid": [{"name": "energy", "start": 0, "stop": 1,
                                                         "count": 3, "spacing": "log"}]})"),
            ErrorCode::InvalidInput);
  EXPECT_EQ(bad(R"({"quantity": "mode_report", "grid": [{"name": "energy", "start": 1, "count": 0}]})"),
            ErrorCode::InvalidInput);
  EXPECT_EQ(bad(R"({"quantity": "mode_report", "fixed": {"convention": 3}})"), ErrorCode::InvalidInput);
  EXPECT_EQ(bad(R"({"quantity": "mode_report", "extra": 1})"), ErrorCode::InvalidInput);
  EXPECT_EQ(bad("not json"), ErrorCode::InvalidInput);
}

TEST(Scan, ParallelMatchesSerialByteForByte) {
  const ScanSpec spec = parse_scan_spec(R"({
    "quantity": "width_shift",
    "grid": [{"name": "gamma_S", "start": 0.01, "stop": 1, "count": 17, "spacing": "log"},
             {"name": "tau_scale", "start": 1e-4, "stop": 1, "count": 23, "spacing": "log"}],
    "fixed": {"delta_re": 0.003}
  })");
  const std::string serial = to_csv(run_scan(spec, 1));
  for (unsigned workers : {2u, 3u, 8u}) {
    EXPECT_EQ(to_csv(run_scan(spec, workers)), serial) << workers;
  }
  EXPECT_EQ(sha256_hex(serial), sha256_hex(to_csv(run_scan(spec, 1))));
}

TEST(Emit, WritesFileAndManifest) {
  const auto dir = scratch_dir();
  const std::string out = (dir / "rows.csv").string();
  const Table t = convergence_table(convergence_study(1.0, 1.0, {16, 32}));

  RunManifest manifest;
  manifest.timestamp = utc_timestamp();
  manifest.command = "converge";
  const std::string digest = emit(t, Format::Csv, out, &manifest);
  write_manifest(manifest, out);

  EXPECT_EQ(read_file(out), to_csv(t));
  EXPECT_EQ(digest, sha256_hex(read_file(out)));
  const auto j = nlohmann::json::parse(read_file(out + ".manifest.json"));
  EXPECT_EQ(j.at("schema_version"), kManifestSchemaVersion);
  EXPECT_EQ(j.at("outputs").at(0).at("sha256"), digest);
  EXPECT_EQ(j.at("timestamp").get<std::string>().size(), 20u);
  EXPECT_EQ(j.at("timestamp").get<std::string>().back(), 'Z');

  // Same table, same bytes.
  EXPECT_EQ(emit(t, Format::Csv, out), digest);
}

TEST(Emit, UnwritableDestination) {
  Table t;
  t.columns = {"x"};
  EXPECT_EQ(error_of([&] { emit(t, Format::Csv, "/nonexistent-dir/x.csv"); }), ErrorCode::IoError);
}

TEST(Emit, JsonAndCsvCarryTheSameValues) {
  const ScanSpec spec = parse_scan_spec(R"({
    "quantity": "mode_report",
    "grid": [{"name": "energy", "start": 0, "stop": 2, "count": 5}]
  })");
  const Table t = run_scan(spec);
  const Table from_csv = parse_csv(to_csv(t));
  const Table from_json = parse_json_table(to_json(t));
  EXPECT_EQ(from_csv.columns, from_json.columns);
  EXPECT_EQ(from_csv.rows, from_json.rows);
  EXPECT_EQ(from_csv.rows, t.rows);
}

TEST(Observables, ModesTable) {
  const auto s = mode_report(sigma_x(), ChrononParams{}, UnitSystem{});
  const Table t = modes_table(s);
  ASSERT_EQ(t.rows.size(), 2u);
  EXPECT_EQ(num(t, 1, "h"), 1.0);
  EXPECT_EQ(num(t, 1, "ratio_first_order"), 1.0);
  EXPECT_EQ(text(t, 1, "efold_direction"), "growth");
  EXPECT_EQ(text(t, 1, "status"), "ok");

  const Table zero = modes_table(mode_report(Operator2::zero(), ChrononParams{}, UnitSystem{}));
  EXPECT_EQ(text(zero, 0, "status"), "UndefinedRatio;UndefinedRatio;UndefinedMeasure");
  EXPECT_EQ(num(zero, 0, "efold_time"), HUGE_VAL);
}

TEST(Golden, RatioScan) {
  const std::string dir = CHRONON_GOLDEN_DIR;
  EXPECT_EQ(to_csv(run_scan(parse_scan_spec(read_file(dir + "/ratio_scan.json")), 3)),
            read_file(dir + "/ratio_scan.csv"));
}

TEST(Golden, Convergence) {
  std::vector<unsigned long long> ms;
  for (int k = 4; k <= 12; ++k) ms.push_back(1ULL << k);
  EXPECT_EQ(to_csv(convergence_table(convergence_study(1.0, 1.0, ms))),
            read_file(std::string(CHRONON_GOLDEN_DIR) + "/convergence.csv"));
}

TEST(Golden, WidthShift) {
  const std::string dir = CHRONON_GOLDEN_DIR;
  const auto cfg = load_kaon_config(dir + "/width_shift_oracle.conf");
  EXPECT_EQ(to_csv(width_shift_table(width_shift(cfg.model, cfg.chronon))), read_file(dir + "/width_shift.csv"));
}
