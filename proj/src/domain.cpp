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

#include "monocover/domain.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace monocover {

Point join(const Point& a, const Point& b) {
  Point out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = std::max(a[i], b[i]);
  return out;
}

Point meet(const Point& a, const Point& b) {
  Point out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = std::min(a[i], b[i]);
  return out;
}

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "invalid_argument";
    case ErrorCode::kDimensionMismatch: return "dimension_mismatch";
    case ErrorCode::kDomain: return "domain";
    case ErrorCode::kPrecondition: return "precondition";
    case ErrorCode::kInfeasible: return "infeasible";
    case ErrorCode::kUnbounded: return "unbounded";
    case ErrorCode::kUnsupported: return "unsupported";
    case ErrorCode::kStepLimit: return "step_limit";
    case ErrorCode::kOracleUnavailable: return "oracle_unavailable";
    case ErrorCode::kParse: return "parse";
  }
  return "unknown";
}

void fail(ErrorCode code, const std::string& what) {
  if (code == ErrorCode::kInfeasible) throw InfeasibleError(what);
  if (code == ErrorCode::kOracleUnavailable) throw OracleUnavailableError(what);
  throw Error(code, what);
}

Domain Domain::finite_set(std::vector<double> values) {
  if (values.empty()) fail(ErrorCode::kInvalidArgument, "finite-set domain is empty");
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!(values[i] >= 0.0) || std::isinf(values[i])) {
      fail(ErrorCode::kInvalidArgument, "finite-set domain values must be finite and >= 0");
    }
    if (i > 0 && !(values[i] > values[i - 1])) {
      fail(ErrorCode::kInvalidArgument, "finite-set domain values must be strictly ascending");
    }
  }
  Domain d(Kind::kFiniteSet);
  d.values_ = std::move(values);
  return d;
}

Domain Domain::grid(double start, double step, double stop) {
  if (!(start >= 0.0) || std::isinf(start) || !(step > 0.0) || std::isinf(step) ||
      !(stop >= start)) {
    fail(ErrorCode::kInvalidArgument, "grid domain needs 0 <= start <= stop and step > 0");
  }
  Domain d(Kind::kGrid);
  d.start_ = start;
  d.step_ = step;
  d.stop_ = std::isinf(stop) ? stop : start + std::floor((stop - start) / step + kEps) * step;
  return d;
}

bool Domain::bounded() const {
  return kind_ == Kind::kFiniteSet || (kind_ == Kind::kGrid && !std::isinf(stop_));
}

double Domain::min_value() const {
  switch (kind_) {
    case Kind::kReals:
    case Kind::kIntegers: return 0.0;
    case Kind::kFiniteSet: return values_.front();
    case Kind::kGrid: return start_;
  }
  return 0.0;
}

double Domain::max_value() const {
  switch (kind_) {
    case Kind::kReals:
    case Kind::kIntegers: return kUnbounded;
    case Kind::kFiniteSet: return values_.back();
    case Kind::kGrid: return stop_;
  }
  return kUnbounded;
}

std::optional<double> Domain::round_down(double v) const {
  switch (kind_) {
    case Kind::kReals:
      if (v < 0.0) return std::nullopt;
      return v;
    case Kind::kIntegers:
      if (v < -kEps) return std::nullopt;
      return std::max(0.0, floor_eps(v));
    case Kind::kFiniteSet: {
      auto it = std::upper_bound(values_.begin(), values_.end(), v + kEps);
      if (it == values_.begin()) return std::nullopt;
      return *(it - 1);
    }
    case Kind::kGrid: {
      if (v < start_ - kEps) return std::nullopt;
      double k = std::floor((v - start_) / step_ + kEps);
      return std::min(start_ + k * step_, stop_);
    }
  }
  return std::nullopt;
}

std::optional<double> Domain::next_above(double v) const {
  switch (kind_) {
    case Kind::kReals: return std::nullopt;
    case Kind::kIntegers: return std::max(0.0, floor_eps(v) + 1.0);
    case Kind::kFiniteSet: {
      auto it = std::upper_bound(values_.begin(), values_.end(), v + kEps);
      if (it == values_.end()) return std::nullopt;
      return *it;
    }
    case Kind::kGrid: {
      if (v < start_ - kEps) return start_;
      double k = std::floor((v - start_) / step_ + kEps) + 1.0;
      double z = start_ + k * step_;
      if (z > stop_ + kEps) return std::nullopt;
      return z;
    }
  }
  return std::nullopt;
}

std::optional<double> Domain::round_up(double v) const {
  if (kind_ == Kind::kReals) return std::max(v, 0.0);
  if (auto down = round_down(v); down && *down >= v - kEps) return *down;
  return next_above(v);
}

bool Domain::contains(double v) const {
  auto down = round_down(v);
  return down.has_value() && *down == v;
}

std::vector<double> Domain::points_in(double lo, double hi, std::size_t limit) const {
  std::vector<double> out;
  if (kind_ == Kind::kReals) return out;
  std::optional<double> z = next_above(lo);
  while (z && *z <= hi + kEps && out.size() < limit) {
    out.push_back(*z);
    z = next_above(*z);
  }
  return out;
}

std::vector<double> Domain::points() const {
  if (!bounded()) fail(ErrorCode::kUnsupported, "domain has infinitely many points");
  std::vector<double> out{min_value()};
  auto rest = points_in(min_value(), max_value());
  out.insert(out.end(), rest.begin(), rest.end());
  return out;
}

bool Domain::operator==(const Domain& other) const {
  return kind_ == other.kind_ && values_ == other.values_ && start_ == other.start_ &&
         step_ == other.step_ && stop_ == other.stop_;
}

Point mu_round(std::span<const Domain> domains, std::span<const double> x) {
  if (domains.size() != x.size()) {
    fail(ErrorCode::kDimensionMismatch, "mu_round: " + std::to_string(domains.size()) +
                                            " domains for a vector of length " +
                                            std::to_string(x.size()));
  }
  Point out(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) {
    auto z = domains[j].round_down(x[j]);
    if (!z) {
      fail(ErrorCode::kDomain,
           "mu_round: no domain element <= x[" + std::to_string(j) + "] = " + std::to_string(x[j]));
    }
    out[j] = *z;
  }
  return out;
}

}  // namespace monocover
