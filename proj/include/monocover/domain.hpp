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

#ifndef MONOCOVER_DOMAIN_HPP_
#define MONOCOVER_DOMAIN_HPP_

#include <optional>
#include <span>
#include <vector>

#include "monocover/common.hpp"

namespace monocover {

// The closed set U_j a variable may take. Every kind is a closed subset of
// the non-negative reals.
class Domain {
 public:
  enum class Kind { kReals, kIntegers, kFiniteSet, kGrid };

  static Domain reals() { return Domain(Kind::kReals); }
  static Domain integers() { return Domain(Kind::kIntegers); }
  // Values must be strictly ascending and non-negative.
  static Domain finite_set(std::vector<double> values);
  // {start, start + step, ...} up to and including `stop` (may be infinite).
  static Domain grid(double start, double step, double stop = kUnbounded);
  static Domain binary() { return finite_set({0.0, 1.0}); }

  Kind kind() const { return kind_; }
  bool unrestricted() const { return kind_ == Kind::kReals; }
  bool discrete() const { return kind_ != Kind::kReals; }
  // True when the domain has finitely many points.
  bool bounded() const;

  double min_value() const;
  // Largest point; +inf for unbounded domains.
  double max_value() const;

  // max{z in U : z <= v}, with kEps slack so that values a hair below a
  // domain point round to it.
  std::optional<double> round_down(double v) const;
  // min{z in U : z > v}; nullopt when none exists or the domain is the reals.
  std::optional<double> next_above(double v) const;
  // min{z in U : z >= v}.
  std::optional<double> round_up(double v) const;
  bool contains(double v) const;

  // Domain points in (lo, hi], ascending, at most `limit` of them. Empty for
  // the reals.
  std::vector<double> points_in(double lo, double hi,
                                std::size_t limit = static_cast<std::size_t>(-1)) const;
  // All points of a bounded domain.
  std::vector<double> points() const;

  const std::vector<double>& values() const { return values_; }
  double grid_start() const { return start_; }
  double grid_step() const { return step_; }
  double grid_stop() const { return stop_; }

  bool operator==(const Domain& other) const;

 private:
  explicit Domain(Kind kind) : kind_(kind) {}

  Kind kind_;
  std::vector<double> values_;
  double start_ = 0.0;
  double step_ = 1.0;
  double stop_ = kUnbounded;
};

// mu(x): rounds each coordinate down into its domain. Throws a kDomain error
// naming the variable when no domain point lies at or below x_j.
Point mu_round(std::span<const Domain> domains, std::span<const double> x);

}  // namespace monocover

#endif  // MONOCOVER_DOMAIN_HPP_
