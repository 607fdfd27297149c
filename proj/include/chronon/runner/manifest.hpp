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

/// @file manifest.hpp
/// Output emission and run manifests.
///
/// Every file written through emit() is recorded with its SHA-256 digest; the
/// manifest lands next to it as <out>.manifest.json.

#include <chrono>
#include <ctime>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "chronon/runner/digest.hpp"
#include "chronon/runner/table.hpp"

#ifndef CHRONON_LAB_VERSION
#define CHRONON_LAB_VERSION "0.1.0"
#endif

namespace chronon::runner {

inline constexpr int kManifestSchemaVersion = 1;

struct OutputRecord {
  std::string path;
  std::string format;
  std::string sha256;
  std::size_t bytes = 0;
};

struct RunManifest {
  int schema_version = kManifestSchemaVersion;
  std::string timestamp;
  std::string command;
  nlohmann::ordered_json parameters = nlohmann::ordered_json::object();
  std::string artifact_version = CHRONON_LAB_VERSION;
  std::vector<OutputRecord> outputs;

  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json j;
    j["schema_version"] = schema_version;
    j["timestamp"] = timestamp;
    j["artifact_version"] = artifact_version;
    j["command"] = command;
    j["parameters"] = parameters;
    j["outputs"] = nlohmann::ordered_json::array();
    for (const auto& o : outputs)
      j["outputs"].push_back({{"path", o.path}, {"format", o.format}, {"sha256", o.sha256}, {"bytes", o.bytes}});
    return j;
  }
};

/// Current time as UTC ISO-8601, second resolution.
inline std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

inline void write_file(const std::string& path, std::string_view bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot write '" + path + "'");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  out.flush();
  if (!out) throw Error(ErrorCode::IoError, "write failed for '" + path + "'");
}

/// Serializes `t`, writes it to `destination` (stdout when empty) and
/// returns the hex SHA-256 of the emitted bytes.
inline std::string emit(const Table& t, Format format, const std::string& destination,
                        RunManifest* manifest = nullptr) {
  const std::string bytes = serialize(t, format);
  const std::string digest = sha256_hex(bytes);
  if (destination.empty()) {
    std::cout << bytes;
    std::cout.flush();
    if (!std::cout) throw Error(ErrorCode::IoError, "write to stdout failed");
  } else {
    write_file(destination, bytes);
  }
  if (manifest)
    manifest->outputs.push_back({destination.empty() ? "-" : destination, format == Format::Csv ? "csv" : "json",
                                 digest, bytes.size()});
  return digest;
}

inline std::string manifest_path(const std::string& out) { return out + ".manifest.json"; }

inline void write_manifest(const RunManifest& m, const std::string& out) {
  write_file(manifest_path(out), m.to_json().dump(2) + "\n");
}

}  // namespace chronon::runner
