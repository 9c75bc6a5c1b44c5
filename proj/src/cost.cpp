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

#include "monocover/cost.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace monocover {

double CostFunction::raise_cost(std::span<const double> x, std::size_t j, double v) const {
  Point y(x.begin(), x.end());
  double before = evaluate(y);
  y[j] = std::max(y[j], v);
  return evaluate(y) - before;
}

std::vector<double> CostFunction::raise_knots(std::span<const double>, std::size_t) const {
  return {};
}

double PiecewiseLinear::operator()(double t) const {
  if (t <= knots.front()) return values.front();
  if (t >= knots.back()) return values.back() + tail_slope * (t - knots.back());
  auto it = std::upper_bound(knots.begin(), knots.end(), t);
  std::size_t k = static_cast<std::size_t>(it - knots.begin());
  double w = (t - knots[k - 1]) / (knots[k] - knots[k - 1]);
  return values[k - 1] + w * (values[k] - values[k - 1]);
}

double PiecewiseLinear::raise_limit(double t, double budget) const {
  double target = (*this)(t) + std::max(budget, 0.0);
  auto first = std::upper_bound(knots.begin(), knots.end(), t);
  for (auto it = first; it != knots.end(); ++it) {
    std::size_t k = static_cast<std::size_t>(it - knots.begin());
    if (values[k] > target) {
      // k >= 1 here: below the first knot the curve equals values[0] <= target.
      double slope = (values[k] - values[k - 1]) / (knots[k] - knots[k - 1]);
      return std::max(t, knots[k - 1] + (target - values[k - 1]) / slope);
    }
  }
  if (tail_slope <= 0.0) return kUnbounded;
  return std::max(t, knots.back() + (target - values.back()) / tail_slope);
}

LinearCost::LinearCost(std::vector<double> c) : c_(std::move(c)) {
  for (double v : c_) {
    if (!(v >= 0.0) || std::isinf(v)) {
      fail(ErrorCode::kInvalidArgument, "linear cost coefficients must be finite and >= 0");
    }
  }
}

double LinearCost::evaluate(std::span<const double> x) const {
  double total = 0.0;
  for (std::size_t j = 0; j < c_.size(); ++j) {
    if (c_[j] != 0.0) total += c_[j] * x[j];
  }
  return total;
}

double LinearCost::raise_cost(std::span<const double> x, std::size_t j, double v) const {
  if (c_[j] == 0.0 || v <= x[j]) return 0.0;
  return c_[j] * (v - x[j]);
}

double LinearCost::raise_limit(std::span<const double> x, std::size_t j, double budget) const {
  if (c_[j] == 0.0) return kUnbounded;
  return x[j] + std::max(budget, 0.0) / c_[j];
}

SeparableCost::SeparableCost(std::vector<PiecewiseLinear> curves) : curves_(std::move(curves)) {
  for (const auto& curve : curves_) {
    if (curve.knots.empty() || curve.knots.size() != curve.values.size()) {
      fail(ErrorCode::kInvalidArgument, "piecewise-linear curve needs matching, non-empty knots");
    }
    if (curve.values.front() < 0.0 || curve.tail_slope < 0.0) {
      fail(ErrorCode::kInvalidArgument, "piecewise-linear curve must be non-negative");
    }
    for (std::size_t k = 1; k < curve.knots.size(); ++k) {
      if (!(curve.knots[k] > curve.knots[k - 1]) || curve.values[k] < curve.values[k - 1]) {
        fail(ErrorCode::kInvalidArgument,
             "piecewise-linear curve needs ascending knots and non-decreasing values");
      }
    }
  }
}

double SeparableCost::evaluate(std::span<const double> x) const {
  double total = 0.0;
  for (std::size_t j = 0; j < curves_.size(); ++j) total += curves_[j](x[j]);
  return total;
}

double SeparableCost::raise_cost(std::span<const double> x, std::size_t j, double v) const {
  if (v <= x[j]) return 0.0;
  return curves_[j](v) - curves_[j](x[j]);
}

double SeparableCost::raise_limit(std::span<const double> x, std::size_t j, double budget) const {
  return curves_[j].raise_limit(x[j], budget);
}

std::vector<double> SeparableCost::raise_knots(std::span<const double> x, std::size_t j) const {
  const auto& knots = curves_[j].knots;
  return {std::upper_bound(knots.begin(), knots.end(), x[j]), knots.end()};
}

FacilityCost::FacilityCost(std::vector<double> opening, std::vector<FacilityPair> pairs)
    : f_(std::move(opening)), pairs_(std::move(pairs)), by_facility_(f_.size()) {
  for (double v : f_) {
    if (!(v >= 0.0) || std::isinf(v)) fail(ErrorCode::kInvalidArgument, "opening costs must be >= 0");
  }
  for (std::size_t k = 0; k < pairs_.size(); ++k) {
    const auto& p = pairs_[k];
    if (p.facility >= f_.size()) fail(ErrorCode::kInvalidArgument, "pair references unknown facility");
    if (!(p.assign_cost >= 0.0) || std::isinf(p.assign_cost)) {
      fail(ErrorCode::kInvalidArgument, "assignment costs must be >= 0");
    }
    by_facility_[p.facility].push_back(k);
  }
}

double FacilityCost::facility_level(std::span<const double> x, std::size_t j) const {
  double level = 0.0;
  for (std::size_t k : by_facility_[j]) level = std::max(level, x[k]);
  return level;
}

double FacilityCost::evaluate(std::span<const double> x) const {
  double total = 0.0;
  for (std::size_t j = 0; j < f_.size(); ++j) {
    if (f_[j] != 0.0) total += f_[j] * facility_level(x, j);
  }
  for (std::size_t k = 0; k < pairs_.size(); ++k) {
    if (pairs_[k].assign_cost != 0.0) total += pairs_[k].assign_cost * x[k];
  }
  return total;
}

double FacilityCost::raise_cost(std::span<const double> x, std::size_t k, double v) const {
  if (v <= x[k]) return 0.0;
  const auto& p = pairs_[k];
  double level = facility_level(x, p.facility);
  double open = f_[p.facility] == 0.0 ? 0.0 : f_[p.facility] * (std::max(level, v) - level);
  double assign = p.assign_cost == 0.0 ? 0.0 : p.assign_cost * (v - x[k]);
  return assign + open;
}

double FacilityCost::raise_limit(std::span<const double> x, std::size_t k, double budget) const {
  budget = std::max(budget, 0.0);
  const auto& p = pairs_[k];
  double d = p.assign_cost;
  double f = f_[p.facility];
  if (d == 0.0 && f == 0.0) return kUnbounded;
  double level = facility_level(x, p.facility);
  double headroom = level - x[k];
  if (d > 0.0 && d * headroom >= budget) return x[k] + budget / d;
  return level + (budget - d * headroom) / (d + f);
}

std::vector<double> FacilityCost::raise_knots(std::span<const double> x, std::size_t k) const {
  double level = facility_level(x, pairs_[k].facility);
  if (x[k] < level) return {level};
  return {};
}

GenericCost::GenericCost(std::size_t n, Evaluate evaluate, RaiseLimit raise_limit)
    : n_(n), evaluate_(std::move(evaluate)), raise_limit_(std::move(raise_limit)) {
  if (!evaluate_ || !raise_limit_) {
    fail(ErrorCode::kInvalidArgument, "generic cost needs both evaluate and raise-limit callbacks");
  }
}

CostModel CostModel::linear(std::vector<double> c) {
  return CostModel(std::make_shared<LinearCost>(std::move(c)));
}

CostModel CostModel::separable(std::vector<PiecewiseLinear> curves) {
  return CostModel(std::make_shared<SeparableCost>(std::move(curves)));
}

CostModel CostModel::facility(std::vector<double> opening, std::vector<FacilityPair> pairs) {
  return CostModel(std::make_shared<FacilityCost>(std::move(opening), std::move(pairs)));
}

CostModel CostModel::generic(std::size_t n, GenericCost::Evaluate evaluate,
                             GenericCost::RaiseLimit raise_limit) {
  return CostModel(std::make_shared<GenericCost>(n, std::move(evaluate), std::move(raise_limit)));
}

const std::vector<double>* CostModel::linear_coefficients() const {
  if (auto* lin = dynamic_cast<const LinearCost*>(fn_.get())) return &lin->coefficients();
  return nullptr;
}

double evaluate_cost(const CostModel& cost, std::span<const double> x) {
  if (x.size() != cost.dimension()) {
    fail(ErrorCode::kDimensionMismatch, "evaluate_cost: vector has length " +
                                            std::to_string(x.size()) + ", cost expects " +
                                            std::to_string(cost.dimension()));
  }
  for (std::size_t j = 0; j < x.size(); ++j) {
    if (std::isnan(x[j]) || x[j] < 0.0) {
      fail(ErrorCode::kDomain, "evaluate_cost: x[" + std::to_string(j) + "] is negative or NaN");
    }
  }
  return cost(x);
}

CostModel extend_cost_to_reals(const std::vector<std::vector<double>>& point_values,
                               std::span<const Domain> domains) {
  if (point_values.size() != domains.size()) {
    fail(ErrorCode::kDimensionMismatch, "extend_cost_to_reals: one value list per domain expected");
  }
  std::vector<PiecewiseLinear> curves;
  curves.reserve(domains.size());
  for (std::size_t j = 0; j < domains.size(); ++j) {
    if (!domains[j].bounded()) {
      fail(ErrorCode::kUnsupported,
           "extend_cost_to_reals: domain of variable " + std::to_string(j) + " is not finite");
    }
    PiecewiseLinear curve;
    curve.knots = domains[j].points();
    curve.values = point_values[j];
    if (curve.values.size() != curve.knots.size()) {
      fail(ErrorCode::kDimensionMismatch,
           "extend_cost_to_reals: variable " + std::to_string(j) + " needs one value per point");
    }
    curves.push_back(std::move(curve));
  }
  return CostModel::separable(std::move(curves));
}

CostModel extend_cost_to_reals(const CostModel& restricted, std::span<const Domain> domains) {
  std::vector<std::vector<double>> values(domains.size());
  for (std::size_t j = 0; j < domains.size(); ++j) {
    if (!domains[j].bounded()) {
      fail(ErrorCode::kUnsupported,
           "extend_cost_to_reals: domain of variable " + std::to_string(j) + " is not finite");
    }
    for (double z : domains[j].points()) {
      if (auto* c = restricted.linear_coefficients()) {
        values[j].push_back((*c)[j] * z);
      } else if (auto* sep = dynamic_cast<const SeparableCost*>(&restricted.fn())) {
        values[j].push_back(sep->curves()[j](z));
      } else {
        fail(ErrorCode::kUnsupported, "extend_cost_to_reals: restricted cost is not separable");
      }
    }
  }
  return extend_cost_to_reals(values, domains);
}

}  // namespace monocover
