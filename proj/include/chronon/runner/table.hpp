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

/// @file table.hpp
/// Row tables and their CSV / JSON serialization.
///
/// Doubles are written in shortest round-trip form; +-inf as "inf"/"-inf".
/// Empty cells mark values that could not be computed.

#include <charconv>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <system_error>
#include <variant>
#include <vector>

#include <json.hpp>

#include "chronon/common.hpp"

namespace chronon::runner {

using Cell = std::variant<std::monostate, double, std::string>;
using Row = std::vector<Cell>;

struct Table {
  std::vector<std::string> columns;
  std::vector<Row> rows;

  std::size_t column(std::string_view name) const {
    for (std::size_t i = 0; i < columns.size(); ++i)
      if (columns[i] == name) return i;
    throw Error(ErrorCode::InvalidInput, "no column '" + std::string(name) + "'");
  }
};

enum class Format { Csv, Json };

inline Format parse_format(std::string_view s) {
  if (s == "csv") return Format::Csv;
  if (s == "json") return Format::Json;
  throw Error(ErrorCode::InvalidInput, "unknown format '" + std::string(s) + "'");
}

inline std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

inline std::optional<double> parse_double(std::string_view s) {
  if (s == "inf") return HUGE_VAL;
  if (s == "-inf") return -HUGE_VAL;
  if (s == "nan") return std::nan("");
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

namespace detail {

inline bool needs_quotes(std::string_view s) { return s.find_first_of(",\"\r\n") != std::string_view::npos; }

inline void append_csv_field(std::string& out, std::string_view s) {
  if (!needs_quotes(s)) {
    out += s;
    return;
  }
  out += '"';
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
}

inline std::string cell_text(const Cell& c) {
  if (std::holds_alternative<double>(c)) return format_double(std::get<double>(c));
  if (std::holds_alternative<std::string>(c)) return std::get<std::string>(c);
  return {};
}

}  // namespace detail

/// RFC-4180 CSV with a header row and LF line endings.
inline std::string to_csv(const Table& t) {
  std::string out;
  auto line = [&out](const auto& fields, auto&& text) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i) out += ',';
      detail::append_csv_field(out, text(fields[i]));
    }
    out += '\n';
  };
  line(t.columns, [](const std::string& s) { return s; });
  for (const Row& r : t.rows) line(r, [](const Cell& c) { return detail::cell_text(c); });
  return out;
}

/// Inverse of to_csv. Unquoted fields that parse as numbers become doubles,
/// empty fields become empty cells.
inline Table parse_csv(std::string_view text) {
  std::vector<std::vector<std::pair<std::string, bool>>> records;
  std::vector<std::pair<std::string, bool>> record;
  std::string field;
  bool quoted = false;
  bool in_quotes = false;
  bool any = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    any = true;
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        field += c;
      }
      continue;
    }
    if (c == '"') {
      in_quotes = true;
      quoted = true;
    } else if (c == ',') {
      record.emplace_back(std::move(field), quoted);
      field.clear();
      quoted = false;
    } else if (c == '\n' || c == '\r') {
      if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
      record.emplace_back(std::move(field), quoted);
      records.push_back(std::move(record));
      record.clear();
      field.clear();
      quoted = false;
      any = false;
    } else {
      field += c;
    }
  }
  if (in_quotes) throw Error(ErrorCode::InvalidInput, "csv: unterminated quoted field");
  if (any) {
    record.emplace_back(std::move(field), quoted);
    records.push_back(std::move(record));
  }

  Table t;
  if (records.empty()) return t;
  for (auto& [name, q] : records.front()) t.columns.push_back(name);
  for (std::size_t r = 1; r < records.size(); ++r) {
    if (records[r].size() != t.columns.size())
      throw Error(ErrorCode::InvalidInput, "csv: ragged row " + std::to_string(r));
    Row row;
    for (auto& [text_field, q] : records[r]) {
      if (q) {
        row.emplace_back(text_field);
      } else if (text_field.empty()) {
        row.emplace_back(std::monostate{});
      } else if (auto v = parse_double(text_field)) {
        row.emplace_back(*v);
      } else {
        row.emplace_back(text_field);
      }
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

/// Array of objects, keys in column order.
inline std::string to_json(const Table& t) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const Row& r : t.rows) {
    nlohmann::ordered_json obj = nlohmann::ordered_json::object();
    for (std::size_t i = 0; i < t.columns.size(); ++i) {
      const Cell& c = r[i];
      if (std::holds_alternative<double>(c)) {
        const double v = std::get<double>(c);
        if (std::isfinite(v)) obj[t.columns[i]] = v;
        else obj[t.columns[i]] = format_double(v);
      } else if (std::holds_alternative<std::string>(c)) {
        obj[t.columns[i]] = std::get<std::string>(c);
      } else {
        obj[t.columns[i]] = nullptr;
      }
    }
    arr.push_back(std::move(obj));
  }
  return arr.dump(2) + "\n";
}

/// Inverse of to_json. Column order comes from the first object; an empty
/// array yields an empty table.
inline Table parse_json_table(std::string_view text) {
  const auto arr = nlohmann::ordered_json::parse(text);
  if (!arr.is_array()) throw Error(ErrorCode::InvalidInput, "json table: expected an array");
  Table t;
  for (const auto& obj : arr) {
    if (t.columns.empty())
      for (const auto& item : obj.items()) t.columns.push_back(item.key());
    Row row;
    for (const auto& name : t.columns) {
      const auto& v = obj.at(name);
      if (v.is_null()) {
        row.emplace_back(std::monostate{});
      } else if (v.is_number()) {
        row.emplace_back(v.get<double>());
      } else {
        const auto s = v.get<std::string>();
        if (s == "inf" || s == "-inf" || s == "nan") row.emplace_back(*parse_double(s));
        else row.emplace_back(s);
      }
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

inline std::string serialize(const Table& t, Format f) { return f == Format::Csv ? to_csv(t) : to_json(t); }

}  // namespace chronon::runner
