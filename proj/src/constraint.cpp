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

#include "monocover/constraint.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

namespace monocover {

const char* constraint_kind_name(ConstraintKind kind) {
  switch (kind) {
    case ConstraintKind::kFloorSum: return "floor_sum";
    case ConstraintKind::kCmipRow: return "cmip";
    case ConstraintKind::kCachability: return "cachability";
    case ConstraintKind::kGeneric: return "generic";
  }
  return "unknown";
}

Constraint::Constraint(std::string id, std::vector<std::size_t> deps)
    : id_(std::move(id)), deps_(std::move(deps)) {
  std::unordered_set<std::size_t> seen;
  for (std::size_t j : deps_) {
    if (!seen.insert(j).second) {
      fail(ErrorCode::kInvalidArgument,
           "constraint '" + id_ + "' lists variable " + std::to_string(j) + " twice");
    }
  }
}

std::vector<double> Constraint::breakpoints(std::span<const double>, std::size_t) const {
  return {};
}

std::optional<double> Constraint::shortfall(std::span<const double>) const { return std::nullopt; }

double Constraint::raise_cap(std::span<const double> x, std::size_t j) const {
  if (satisfied(x)) return x[j];
  Point y(x.begin(), x.end());
  double v = std::max(1.0, 2.0 * x[j]);
  for (int i = 0; i < 64; ++i, v *= 2.0) {
    y[j] = v;
    if (satisfied(y)) return v;
  }
  return kUnbounded;
}

namespace {

double term_count(const FloorTerm& t, double v) {
  return std::min(t.cap, floor_eps(v / t.step));
}

}  // namespace

FloorSumConstraint::FloorSumConstraint(std::string id, std::vector<FloorTerm> terms, double rhs)
    : Constraint(std::move(id),
                 [&] {
                   std::vector<std::size_t> deps;
                   for (const auto& t : terms) deps.push_back(t.var);
                   return deps;
                 }()),
      terms_(std::move(terms)),
      rhs_(rhs) {
  if (!std::isfinite(rhs_)) fail(ErrorCode::kInvalidArgument, "floor-sum rhs must be finite");
  for (const auto& t : terms_) {
    if (!(t.coeff > 0.0) || !std::isfinite(t.coeff) || !(t.step > 0.0) ||
        !std::isfinite(t.step) || !(t.cap > 0.0)) {
      fail(ErrorCode::kInvalidArgument,
           "floor-sum '" + this->id() + "': terms need coeff > 0, step > 0, cap > 0");
    }
  }
}

const FloorTerm* FloorSumConstraint::term_for(std::size_t j) const {
  for (const auto& t : terms_) {
    if (t.var == j) return &t;
  }
  return nullptr;
}

double FloorSumConstraint::lhs(std::span<const double> x) const {
  double total = 0.0;
  for (const auto& t : terms_) total += t.coeff * term_count(t, x[t.var]);
  return total;
}

bool FloorSumConstraint::satisfied(std::span<const double> x) const {
  return lhs(x) >= rhs_ - kEps;
}

std::optional<double> FloorSumConstraint::shortfall(std::span<const double> x) const {
  return rhs_ - lhs(x);
}

double FloorSumConstraint::count_to_satisfy(std::span<const double> x, const FloorTerm& t) const {
  double current = term_count(t, x[t.var]);
  double gap = rhs_ - lhs(x);
  if (gap <= kEps) return current;
  return std::min(t.cap, current + std::ceil(gap / t.coeff - kEps));
}

std::vector<double> FloorSumConstraint::breakpoints(std::span<const double> x,
                                                    std::size_t j) const {
  std::vector<double> out;
  const FloorTerm* t = term_for(j);
  if (t == nullptr) return out;
  double target = count_to_satisfy(x, *t);
  for (double k = term_count(*t, x[j]) + 1.0; k <= target && out.size() < kMaxBreakpoints; k += 1.0) {
    double v = k * t->step;
    if (v > x[j]) out.push_back(v);
  }
  return out;
}

double FloorSumConstraint::raise_cap(std::span<const double> x, std::size_t j) const {
  const FloorTerm* t = term_for(j);
  if (t == nullptr || satisfied(x)) return x[j];
  return std::max(x[j], count_to_satisfy(x, *t) * t->step);
}

GenericConstraint::GenericConstraint(std::string id, std::vector<std::size_t> deps,
                                     Predicate predicate, ConstraintKind kind,
                                     Breakpoints breakpoints, Cap cap)
    : Constraint(std::move(id), std::move(deps)),
      predicate_(std::move(predicate)),
      kind_(kind),
      breakpoints_(std::move(breakpoints)),
      cap_(std::move(cap)) {
  if (!predicate_) fail(ErrorCode::kInvalidArgument, "generic constraint needs a predicate");
}

std::vector<double> GenericConstraint::breakpoints(std::span<const double> x,
                                                   std::size_t j) const {
  if (!breakpoints_) return {};
  return breakpoints_(x, j);
}

double GenericConstraint::raise_cap(std::span<const double> x, std::size_t j) const {
  if (!cap_) return Constraint::raise_cap(x, j);
  return cap_(x, j);
}

RoundedConstraint::RoundedConstraint(ConstraintPtr inner,
                                     std::shared_ptr<const std::vector<Domain>> domains)
    : Constraint(inner->id(), inner->deps()), inner_(std::move(inner)), domains_(std::move(domains)) {
  for (std::size_t j : deps()) {
    if (j >= domains_->size()) {
      fail(ErrorCode::kDimensionMismatch,
           "constraint '" + id() + "' references variable " + std::to_string(j));
    }
    if ((*domains_)[j].unrestricted()) all_discrete_ = false;
  }
}

std::optional<Point> RoundedConstraint::rounded(std::span<const double> x) const {
  Point y(x.begin(), x.end());
  for (std::size_t j : deps()) {
    const Domain& d = (*domains_)[j];
    if (d.unrestricted()) continue;
    auto z = d.round_down(x[j]);
    if (!z) return std::nullopt;
    y[j] = *z;
  }
  return y;
}

bool RoundedConstraint::satisfied(std::span<const double> x) const {
  auto y = rounded(x);
  return y && inner_->satisfied(*y);
}

std::vector<double> RoundedConstraint::breakpoints(std::span<const double> x,
                                                   std::size_t j) const {
  auto y = rounded(x);
  const Domain& d = (*domains_)[j];
  if (d.unrestricted()) {
    if (!y) return {};
    std::vector<double> out;
    for (double v : inner_->breakpoints(*y, j)) {
      if (v > x[j]) out.push_back(v);
    }
    return out;
  }
  double cap = inner_->raise_cap(y ? std::span<const double>(*y) : x, j);
  double hi = kUnbounded;
  if (!is_unbounded(cap)) {
    auto up = d.round_up(cap);
    hi = up ? *up : d.max_value();
  }
  return d.points_in(x[j], hi, kMaxBreakpoints);
}

bool RoundedConstraint::piecewise_constant() const {
  return all_discrete_ || inner_->piecewise_constant();
}

bool RoundedConstraint::piecewise_constant_in(std::size_t j) const {
  return !(*domains_)[j].unrestricted() || inner_->piecewise_constant_in(j);
}

std::optional<double> RoundedConstraint::shortfall(std::span<const double> x) const {
  if (all_discrete_) return std::nullopt;
  auto y = rounded(x);
  if (!y) return std::nullopt;
  return inner_->shortfall(*y);
}

double RoundedConstraint::raise_cap(std::span<const double> x, std::size_t j) const {
  auto y = rounded(x);
  double cap = inner_->raise_cap(y ? std::span<const double>(*y) : x, j);
  const Domain& d = (*domains_)[j];
  if (d.unrestricted() || is_unbounded(cap)) return std::max(x[j], cap);
  auto up = d.round_up(cap);
  return std::max(x[j], up ? *up : d.max_value());
}

}  // namespace monocover
