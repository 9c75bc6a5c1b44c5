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

#include "monocover/engine.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "monocover/cmip.hpp"
#include "monocover/oracle.hpp"

namespace monocover {

namespace {

void check_beta(double beta) {
  if (std::isnan(beta) || beta < 0.0 || std::isinf(beta)) {
    fail(ErrorCode::kInvalidArgument, "step size must be finite and >= 0, got " + std::to_string(beta));
  }
}

// Raised vector for a given beta, with the clamp values of free raises
// computed once.
class RaiseCurve {
 public:
  RaiseCurve(std::span<const double> x, const Constraint& S, const CostModel& cost)
      : x_(x), S_(S), cost_(cost), caps_(S.deps().size(), -1.0) {}

  double target(std::size_t k, double beta) {
    std::size_t j = S_.deps()[k];
    double v = cost_->raise_limit(x_, j, beta);
    if (is_unbounded(v)) {
      if (caps_[k] < 0.0) caps_[k] = S_.raise_cap(x_, j);
      v = caps_[k];
      if (is_unbounded(v)) {
        fail(ErrorCode::kUnbounded, "free raise of x[" + std::to_string(j) + "] for constraint '" +
                                        S_.id() + "' has no finite clamp");
      }
    }
    return std::max(x_[j], v);
  }

  Point at(double beta) {
    Point y(x_.begin(), x_.end());
    for (std::size_t k = 0; k < S_.deps().size(); ++k) y[S_.deps()[k]] = target(k, beta);
    return y;
  }

  bool satisfied(double beta) { return S_.satisfied(at(beta)); }

 private:
  std::span<const double> x_;
  const Constraint& S_;
  const CostModel& cost_;
  std::vector<double> caps_;
};

}  // namespace

Point replay(const StepTrace& trace) {
  Point x = trace.start;
  for (std::size_t t = 0; t < trace.steps.size(); ++t) {
    for (const auto& r : trace.steps[t].raised) {
      if (r.var >= x.size() || x[r.var] != r.old_value || r.new_value < r.old_value) {
        fail(ErrorCode::kPrecondition, "trace is not replayable at step " + std::to_string(t));
      }
      x[r.var] = r.new_value;
    }
  }
  return x;
}

Point step_target(std::span<const double> x, const Constraint& S, const CostModel& cost,
                  double beta) {
  RaiseCurve curve(x, S, cost);
  return curve.at(beta);
}

StepRecord step(Point& x, const Constraint& S, const CostModel& cost, double beta,
                std::size_t index) {
  check_beta(beta);
  if (S.satisfied(x)) {
    fail(ErrorCode::kPrecondition, "step: x already satisfies constraint '" + S.id() + "'");
  }
  StepRecord rec;
  rec.constraint = index;
  rec.constraint_id = S.id();
  rec.beta = beta;
  rec.cost_before = cost(x);
  Point y = step_target(x, S, cost, beta);
  for (std::size_t j : S.deps()) {
    if (y[j] > x[j]) rec.raised.push_back({j, x[j], y[j]});
  }
  x = std::move(y);
  rec.cost_after = cost(x);
  return rec;
}

double minimal_beta(std::span<const double> x, const Constraint& S, const CostModel& cost) {
  if (S.satisfied(x)) {
    fail(ErrorCode::kPrecondition, "minimal_beta: x already satisfies constraint '" + S.id() + "'");
  }
  RaiseCurve curve(x, S, cost);
  if (curve.satisfied(0.0)) return 0.0;

  // Every beta at which some raised coordinate reaches a constraint
  // breakpoint or a kink of its cost curve.
  std::vector<double> events;
  for (std::size_t j : S.deps()) {
    auto add = [&](double v) {
      if (!(v > x[j]) || is_unbounded(v)) return;
      double e = cost->raise_cost(x, j, v);
      if (e > 0.0 && std::isfinite(e)) events.push_back(e);
    };
    for (double v : S.breakpoints(x, j)) add(v);
    for (double v : cost->raise_knots(x, j)) add(v);
    add(S.raise_cap(x, j));
  }
  std::sort(events.begin(), events.end());
  events.erase(std::unique(events.begin(), events.end()), events.end());

  auto refine = [&](double lo, double hi, bool at_event) {
    if (at_event && S.piecewise_constant()) return hi;
    // Between events the raised vector is affine in beta, and so is the
    // shortfall of a linear constraint: solve for its root directly.
    if (auto s0 = S.shortfall(curve.at(lo)); s0 && *s0 > 0.0) {
      double mid = lo + 0.5 * (hi - lo);
      if (auto s1 = S.shortfall(curve.at(mid)); s1 && *s1 < *s0) {
        double root = lo + *s0 * (mid - lo) / (*s0 - *s1);
        if (root > lo && root < hi) {
          double r = root;
          for (int i = 0; i < 16; ++i, r = std::nextafter(r, kUnbounded)) {
            if (curve.satisfied(r)) return r;
          }
          lo = r;
        }
      }
    }
    for (int i = 0; i < 200 && std::nextafter(lo, kUnbounded) < hi; ++i) {
      double mid = lo + 0.5 * (hi - lo);
      if (curve.satisfied(mid)) {
        hi = mid;
      } else {
        lo = mid;
      }
    }
    return hi;
  };

  double lo = 0.0;
  for (double e : events) {
    if (curve.satisfied(e)) return refine(lo, e, true);
    lo = e;
  }
  double hi = lo > 0.0 ? 2.0 * lo : 1.0;
  while (!curve.satisfied(hi)) {
    lo = hi;
    hi *= 2.0;
    if (std::isinf(hi)) {
      fail(ErrorCode::kUnbounded,
           "minimal_beta: constraint '" + S.id() + "' cannot be met at any finite cost");
    }
  }
  return refine(lo, hi, false);
}

double structural_beta(std::span<const double> x, const Constraint& S, const CostModel& cost) {
  if (const auto* row = dynamic_cast<const CmipRow*>(&S); row && cost.linear_coefficients()) {
    return cmip_stepsize(x, *row, cost).beta;
  }
  if (S.piecewise_constant()) {
    // Membership cannot change before some coordinate reaches its next
    // breakpoint, so the cheapest such move is a lower bound.
    double best = kUnbounded;
    for (std::size_t j : S.deps()) {
      auto bps = S.breakpoints(x, j);
      if (!bps.empty()) best = std::min(best, cost->raise_cost(x, j, bps.front()));
    }
    if (std::isfinite(best)) return best;
  }
  return minimal_beta(x, S, cost);
}

const char* policy_name(StepSizePolicy::Kind kind) {
  switch (kind) {
    case StepSizePolicy::Kind::kMinimal: return "minimal";
    case StepSizePolicy::Kind::kMaximal: return "maximal";
    case StepSizePolicy::Kind::kStructural: return "structural";
    case StepSizePolicy::Kind::kCustom: return "custom";
    case StepSizePolicy::Kind::kFixedFraction: return "fixed-fraction";
  }
  return "unknown";
}

double choose_beta(const Instance& instance, std::size_t i, std::span<const double> x,
                   const StepSizePolicy& policy) {
  const Constraint& S = instance.effective(i);
  const CostModel& cost = instance.cost();
  switch (policy.kind) {
    case StepSizePolicy::Kind::kMinimal: return minimal_beta(x, S, cost);
    case StepSizePolicy::Kind::kMaximal: return distance(instance, x, i);
    case StepSizePolicy::Kind::kStructural: return structural_beta(x, S, cost);
    case StepSizePolicy::Kind::kCustom:
      if (!policy.custom) fail(ErrorCode::kInvalidArgument, "custom policy without a callback");
      return policy.custom(StepContext{instance, i, x});
    case StepSizePolicy::Kind::kFixedFraction: {
      if (!(policy.fraction > 0.0 && policy.fraction <= 1.0)) {
        fail(ErrorCode::kInvalidArgument, "fixed-fraction policy needs a fraction in (0, 1]");
      }
      double m = minimal_beta(x, S, cost);
      double beta = policy.fraction * m;
      // Geometric shrinking would never close a continuous constraint.
      return beta < 1e-4 ? m : beta;
    }
  }
  return minimal_beta(x, S, cost);
}

SolveResult solve(const Instance& instance, const SolveOptions& options) {
  std::vector<std::size_t> order = options.permutation;
  if (order.empty()) {
    order.resize(instance.size());
    std::iota(order.begin(), order.end(), 0);
  } else {
    std::vector<std::size_t> check = order;
    std::sort(check.begin(), check.end());
    for (std::size_t i = 0; i < check.size(); ++i) {
      if (check[i] != i || check.size() != instance.size()) {
        fail(ErrorCode::kInvalidArgument, "constraint order is not a permutation");
      }
    }
  }
  const std::size_t limit = options.max_steps != 0
                                ? options.max_steps
                                : 10 * (instance.total_deps() + instance.n()) + 10;

  SolveResult out;
  Point x = instance.start();
  out.trace.start = x;

  auto advance = [&](std::size_t i) {
    const Constraint& S = instance.effective(i);
    double beta = 0.0;
    try {
      beta = choose_beta(instance, i, x, options.policy);
    } catch (const Error& e) {
      // No finite raise of deps(S) reaches S.
      if (e.code() != ErrorCode::kUnbounded) throw;
      throw InfeasibleError(e.what(), std::ptrdiff_t(i));
    }
    if (std::isnan(beta) || beta < 0.0 || std::isinf(beta)) {
      fail(ErrorCode::kPrecondition, std::string("policy '") + policy_name(options.policy.kind) +
                                         "' returned an invalid step size for '" + S.id() + "'");
    }
    StepRecord rec = step(x, S, instance.cost(), beta, i);
    if (rec.raised.empty()) {
      fail(ErrorCode::kPrecondition, std::string("policy '") + policy_name(options.policy.kind) +
                                         "' made no progress on '" + S.id() + "'");
    }
    out.trace.steps.push_back(std::move(rec));
    if (out.trace.steps.size() > limit) {
      out.trace.final_x = x;
      throw StepLimitError("solve: exceeded " + std::to_string(limit) + " steps (last constraint '" +
                               S.id() + "')",
                           out.trace);
    }
  };

  if (options.order == ConstraintOrder::kSequential) {
    for (std::size_t i : order) {
      while (!instance.effective(i).satisfied(x)) advance(i);
    }
  } else {
    for (bool pending = true; pending;) {
      pending = false;
      for (std::size_t i : order) {
        if (instance.effective(i).satisfied(x)) continue;
        pending = true;
        advance(i);
      }
    }
  }

  out.x = x;
  out.mu = instance.mu(x);
  out.cost = instance.cost()(out.mu);
  out.trace.final_x = out.x;
  out.trace.final_mu = out.mu;
  return out;
}

}  // namespace monocover
