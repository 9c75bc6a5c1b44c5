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

#ifndef MONOCOVER_COST_HPP_
#define MONOCOVER_COST_HPP_

#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "monocover/common.hpp"
#include "monocover/domain.hpp"

namespace monocover {

enum class CostKind { kLinear, kSeparable, kFacilityLocation, kGenericSubmodular };

// A non-negative, non-decreasing, submodular objective. Implementations are
// immutable; all queries are const and thread-safe.
class CostFunction {
 public:
  virtual ~CostFunction() = default;

  virtual CostKind kind() const = 0;
  virtual std::size_t dimension() const = 0;
  virtual double evaluate(std::span<const double> x) const = 0;

  // c(x with x_j raised to v) - c(x), for v >= x_j.
  virtual double raise_cost(std::span<const double> x, std::size_t j, double v) const;

  // The largest v >= x_j such that raising x_j alone to v increases the cost
  // by at most `budget`. Returns kUnbounded when every raise fits.
  virtual double raise_limit(std::span<const double> x, std::size_t j, double budget) const = 0;

  // Values above x_j where the marginal rate of x_j changes. Between two
  // consecutive knots raise_limit is affine in the budget.
  virtual std::vector<double> raise_knots(std::span<const double> x, std::size_t j) const;
};

// A piecewise-linear non-decreasing curve. Constant below the first knot,
// linear between knots and continued with `tail_slope` past the last one.
struct PiecewiseLinear {
  std::vector<double> knots;   // ascending
  std::vector<double> values;  // non-decreasing, same length as knots
  double tail_slope = 0.0;

  double operator()(double t) const;
  // sup{t' >= t : value(t') <= value(t) + budget}.
  double raise_limit(double t, double budget) const;

  bool operator==(const PiecewiseLinear&) const = default;
};

class LinearCost final : public CostFunction {
 public:
  explicit LinearCost(std::vector<double> c);
  CostKind kind() const override { return CostKind::kLinear; }
  std::size_t dimension() const override { return c_.size(); }
  double evaluate(std::span<const double> x) const override;
  double raise_cost(std::span<const double> x, std::size_t j, double v) const override;
  double raise_limit(std::span<const double> x, std::size_t j, double budget) const override;
  const std::vector<double>& coefficients() const { return c_; }

 private:
  std::vector<double> c_;
};

class SeparableCost final : public CostFunction {
 public:
  explicit SeparableCost(std::vector<PiecewiseLinear> curves);
  CostKind kind() const override { return CostKind::kSeparable; }
  std::size_t dimension() const override { return curves_.size(); }
  double evaluate(std::span<const double> x) const override;
  double raise_cost(std::span<const double> x, std::size_t j, double v) const override;
  double raise_limit(std::span<const double> x, std::size_t j, double budget) const override;
  std::vector<double> raise_knots(std::span<const double> x, std::size_t j) const override;
  const std::vector<PiecewiseLinear>& curves() const { return curves_; }

 private:
  std::vector<PiecewiseLinear> curves_;
};

// One variable per (customer, facility) pair:
//   c(x) = sum_j f_j max_{i} x_ij + sum_ij d_ij x_ij.
struct FacilityPair {
  std::size_t customer = 0;
  std::size_t facility = 0;
  double assign_cost = 0.0;
  bool operator==(const FacilityPair&) const = default;
};

class FacilityCost final : public CostFunction {
 public:
  FacilityCost(std::vector<double> opening, std::vector<FacilityPair> pairs);
  CostKind kind() const override { return CostKind::kFacilityLocation; }
  std::size_t dimension() const override { return pairs_.size(); }
  double evaluate(std::span<const double> x) const override;
  double raise_cost(std::span<const double> x, std::size_t k, double v) const override;
  double raise_limit(std::span<const double> x, std::size_t k, double budget) const override;
  std::vector<double> raise_knots(std::span<const double> x, std::size_t k) const override;

  const std::vector<double>& opening() const { return f_; }
  const std::vector<FacilityPair>& pairs() const { return pairs_; }
  // max over the variables sharing facility `j`.
  double facility_level(std::span<const double> x, std::size_t j) const;

 private:
  std::vector<double> f_;
  std::vector<FacilityPair> pairs_;
  std::vector<std::vector<std::size_t>> by_facility_;
};

// Caller-supplied submodular cost. The raise-limit query is part of the
// contract; it is not derived numerically from the evaluator.
class GenericCost final : public CostFunction {
 public:
  using Evaluate = std::function<double(std::span<const double>)>;
  using RaiseLimit = std::function<double(std::span<const double>, std::size_t, double)>;

  GenericCost(std::size_t n, Evaluate evaluate, RaiseLimit raise_limit);
  CostKind kind() const override { return CostKind::kGenericSubmodular; }
  std::size_t dimension() const override { return n_; }
  double evaluate(std::span<const double> x) const override { return evaluate_(x); }
  double raise_limit(std::span<const double> x, std::size_t j, double budget) const override {
    return raise_limit_(x, j, budget);
  }

 private:
  std::size_t n_;
  Evaluate evaluate_;
  RaiseLimit raise_limit_;
};

// Shared handle to an immutable cost function.
class CostModel {
 public:
  CostModel() = default;
  explicit CostModel(std::shared_ptr<const CostFunction> fn) : fn_(std::move(fn)) {}

  static CostModel linear(std::vector<double> c);
  static CostModel separable(std::vector<PiecewiseLinear> curves);
  static CostModel facility(std::vector<double> opening, std::vector<FacilityPair> pairs);
  static CostModel generic(std::size_t n, GenericCost::Evaluate evaluate,
                           GenericCost::RaiseLimit raise_limit);

  const CostFunction& fn() const { return *fn_; }
  const CostFunction* operator->() const { return fn_.get(); }
  CostKind kind() const { return fn_->kind(); }
  std::size_t dimension() const { return fn_->dimension(); }
  double operator()(std::span<const double> x) const { return fn_->evaluate(x); }

  // Coefficients when the model is linear, nullptr otherwise.
  const std::vector<double>* linear_coefficients() const;

 private:
  std::shared_ptr<const CostFunction> fn_;
};

// Validated c(x): throws on length mismatch or on NaN / negative entries.
double evaluate_cost(const CostModel& cost, std::span<const double> x);

// Extends a cost given on domain points to all non-negative reals by the
// expected value of randomized rounding between the neighbouring points.
// `point_values[j][k]` is the cost of variable j at domains[j].points()[k].
CostModel extend_cost_to_reals(const std::vector<std::vector<double>>& point_values,
                               std::span<const Domain> domains);
// Same, sampling a separable (or linear) restricted cost at the domain points.
CostModel extend_cost_to_reals(const CostModel& restricted, std::span<const Domain> domains);

}  // namespace monocover

#endif  // MONOCOVER_COST_HPP_
