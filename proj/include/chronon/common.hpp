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

#include <complex>
#include <stdexcept>
#include <string>
#include <string_view>

namespace chronon {

using Complex = std::complex<double>;

inline constexpr Complex kI{0.0, 1.0};

/// Build-wide default tolerance for predicates and degeneracy tests.
inline constexpr double kDefaultTol = 1e-10;

enum class ErrorCode {
  InvalidInput,
  SingularMap,
  BranchCut,
  UndefinedMeasure,
  UndefinedRatio,
  GridMismatch,
  DegenerateModes,
  RefusedTooLarge,
  IoError,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidInput: return "InvalidInput";
    case ErrorCode::SingularMap: return "SingularMap";
    case ErrorCode::BranchCut: return "BranchCut";
    case ErrorCode::UndefinedMeasure: return "UndefinedMeasure";
    case ErrorCode::UndefinedRatio: return "UndefinedRatio";
    case ErrorCode::GridMismatch: return "GridMismatch";
    case ErrorCode::DegenerateModes: return "DegenerateModes";
    case ErrorCode::RefusedTooLarge: return "RefusedTooLarge";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

/// True for failures of the numeric domain (cuts, singular maps, undefined
/// measures) as opposed to malformed input.
constexpr bool is_numeric_domain(ErrorCode code) {
  switch (code) {
    case ErrorCode::SingularMap:
    case ErrorCode::BranchCut:
    case ErrorCode::UndefinedMeasure:
    case ErrorCode::UndefinedRatio:
    case ErrorCode::DegenerateModes:
      return true;
    default:
      return false;
  }
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline bool is_finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

/// log(1 + z) without losing the real part when |z| is small.
inline Complex log1p(Complex z) {
  const double x = z.real();
  const double y = z.imag();
  const double re = 0.5 * std::log1p(2.0 * x + x * x + y * y);
  const double im = std::atan2(y, 1.0 + x);
  return {re, im};
}

}  // namespace chronon
