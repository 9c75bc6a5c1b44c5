// Copyright 2026 The monocover Authors
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

#ifndef MONOCOVER_COMMON_HPP_
#define MONOCOVER_COMMON_HPP_

#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace monocover {

// Absolute tolerance for every numeric test of a strict inequality.
inline constexpr double kEps = 1e-9;

// Sentinel for a raise that costs nothing beyond some point (x'_j = infinity).
inline constexpr double kUnbounded = std::numeric_limits<double>::infinity();

using Point = std::vector<double>;

inline bool is_unbounded(double v) { return std::isinf(v) && v > 0; }

// Floor that treats values within kEps below an integer as that integer.
inline double floor_eps(double v) { return std::floor(v + kEps); }

// Component-wise maximum / minimum of equal-length vectors.
Point join(const Point& a, const Point& b);
Point meet(const Point& a, const Point& b);

enum class ErrorCode {
  kInvalidArgument,
  kDimensionMismatch,
  kDomain,
  kPrecondition,
  kInfeasible,
  kUnbounded,
  kUnsupported,
  kStepLimit,
  kOracleUnavailable,
  kParse,
};

const char* error_code_name(ErrorCode code);

// Every failure raised by the library carries a machine-readable code.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

class InfeasibleError : public Error {
 public:
  explicit InfeasibleError(const std::string& what, std::ptrdiff_t constraint = -1)
      : Error(ErrorCode::kInfeasible, what), constraint_(constraint) {}
  // Index of the offending constraint, or -1 when not attributable.
  std::ptrdiff_t constraint() const { return constraint_; }

 private:
  std::ptrdiff_t constraint_;
};

class OracleUnavailableError : public Error {
 public:
  explicit OracleUnavailableError(const std::string& what)
      : Error(ErrorCode::kOracleUnavailable, what) {}
};

[[noreturn]] void fail(ErrorCode code, const std::string& what);

}  // namespace monocover

#endif  // MONOCOVER_COMMON_HPP_
