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

#include "monocover/local_ratio.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "monocover/oracle.hpp"

namespace monocover {

namespace {

double tol(double scale) { return 1e-9 * (1.0 + std::abs(scale)); }

std::size_t unit_levels(const Domain& d) {
  if (!d.bounded()) return 0;
  auto pts = d.points();
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (pts[i] != double(i)) return 0;
  }
  return pts.size() - 1;
}

}  // namespace

double distance_between(const CostModel& cost, std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) fail(ErrorCode::kDimensionMismatch, "distance: vectors differ in length");
  Point j(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) j[i] = std::max(x[i], y[i]);
  return cost(j) - cost(x);
}

Decomposition::Decomposition(const StepTrace& trace, CostModel cost) : cost_(std::move(cost)) {
  if (trace.start.size() != cost_.dimension()) {
    fail(ErrorCode::kDimensionMismatch, "decomposition: trace and cost disagree on n");
  }
  replay(trace);
  Point x = trace.start;
  points_.push_back(x);
  for (const auto& s : trace.steps) {
    for (const auto& r : s.raised) x[r.var] = r.new_value;
    points_.push_back(x);
    betas_.push_back(s.beta);
  }
  base_ = cost_(points_.front());
}

double Decomposition::ct(std::size_t t, std::span<const double> x) const {
  if (t == 0 || t > steps()) fail(ErrorCode::kInvalidArgument, "decomposition: step index out of range");
  return distance_between(cost_, points_[t - 1], x) - distance_between(cost_, points_[t], x);
}

double Decomposition::r(std::span<const double> x) const { return distance_between(cost_, points_.back(), x); }

double Decomposition::ct_linear(std::size_t t, std::span<const double> x) const {
  const auto* c = cost_.linear_coefficients();
  if (!c) fail(ErrorCode::kUnsupported, "closed-form c^t needs a linear cost");
  if (t == 0 || t > steps()) fail(ErrorCode::kInvalidArgument, "decomposition: step index out of range");
  double total = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    double lo = points_[t - 1][j], hi = points_[t][j];
    total += (*c)[j] * std::max(0.0, std::min(x[j], hi) - lo);
  }
  return total;
}

double Decomposition::telescoping_gap(std::span<const double> x) const {
  Point top(x.begin(), x.end());
  for (std::size_t j = 0; j < top.size(); ++j) top[j] = std::max(top[j], points_.front()[j]);
  double sum = base_ + r(x);
  for (std::size_t t = 1; t <= steps(); ++t) sum += ct(t, x);
  return cost_(top) - sum;
}

PropertyBReport check_property_b(const Decomposition& d, const Instance& instance,
                                 std::span<const double> xstar, std::span<const double> x, double eps) {
  if (!instance.feasible(xstar)) throw InfeasibleError("check_property_b: x* is not feasible");
  PropertyBReport out;
  const double delta = double(instance.delta());
  for (std::size_t t = 1; t <= d.steps(); ++t) {
    double cx = d.ct(t, x), cs = d.ct(t, xstar), beta = d.betas()[t - 1];
    double slack = delta * cs - cx;
    out.min_slack = std::min(out.min_slack, slack);
    if (slack < -eps * (1.0 + std::abs(cx))) out.holds = false;
    double chain = std::min(delta * beta - cx, delta * cs - delta * beta);
    out.min_chain_slack = std::min(out.min_chain_slack, chain);
    if (chain < -eps * (1.0 + delta * std::abs(beta) + std::abs(cx))) out.chain_holds = false;
    out.checks += 1;
  }
  return out;
}

std::vector<Point> probe_points(const Decomposition& d, std::size_t count, std::uint64_t seed) {
  const Point& lo = d.points().front();
  const std::size_t n = lo.size();
  Point hi = lo;
  for (const auto& p : d.points()) {
    for (std::size_t j = 0; j < n; ++j) hi[j] = std::max(hi[j], p[j]);
  }
  for (std::size_t j = 0; j < n; ++j) {
    if (hi[j] == lo[j]) hi[j] = lo[j] + 1.0;
  }
  std::vector<Point> out;
  if (n <= 10) {
    for (std::size_t m = 0; m < (std::size_t{1} << n); ++m) {
      Point p(n);
      for (std::size_t j = 0; j < n; ++j) p[j] = (m >> j & 1u) ? hi[j] : lo[j];
      out.push_back(std::move(p));
    }
  } else {
    std::mt19937_64 rng(seed);
    for (std::size_t k = 0; k < count; ++k) {
      Point p(n);
      for (std::size_t j = 0; j < n; ++j) p[j] = std::uniform_real_distribution<double>(lo[j], hi[j])(rng);
      out.push_back(std::move(p));
    }
  }
  for (const auto& p : d.points()) out.push_back(p);
  return out;
}

WeightReductionView weight_reduction_view(const Instance& instance, const StepTrace& trace) {
  const auto* c = instance.cost().linear_coefficients();
  if (!c) fail(ErrorCode::kUnsupported, "weight reduction view needs a linear cost");
  for (const auto& d : instance.domains()) {
    if (unit_levels(d) != 1) fail(ErrorCode::kUnsupported, "weight reduction view needs {0,1} domains");
  }
  replay(trace);
  WeightReductionView out;
  Point w = *c;
  Point x = trace.start;
  out.weights.push_back(w);
  auto check = [&] {
    for (std::size_t j = 0; j < w.size(); ++j) {
      double expect = (*c)[j] * (1.0 - std::min(1.0, x[j]));
      if (std::abs(w[j] - expect) > tol((*c)[j])) out.invariant_holds = false;
    }
  };
  check();
  for (const auto& s : trace.steps) {
    for (const auto& r : s.raised) {
      w[r.var] = std::max(0.0, w[r.var] - (*c)[r.var] * (r.new_value - r.old_value));
      x[r.var] = r.new_value;
    }
    check();
    out.weights.push_back(w);
  }
  Point mu = instance.mu(x);
  out.cover.resize(w.size());
  for (std::size_t j = 0; j < w.size(); ++j) {
    out.cover[j] = w[j] <= kEps * std::max(1.0, (*c)[j]) ? 1.0 : 0.0;
    // A weight that starts at 0 marks j as taken even if x_j never moved.
    bool ok = (*c)[j] == 0.0 ? out.cover[j] >= mu[j] : out.cover[j] == mu[j];
    if (!ok) out.matches_mu = false;
  }
  return out;
}

MultilevelView multilevel_weight_view(const Instance& instance, const StepTrace& trace) {
  const auto* c = instance.cost().linear_coefficients();
  if (!c) fail(ErrorCode::kUnsupported, "multilevel view needs a linear cost");
  MultilevelView out;
  for (const auto& d : instance.domains()) {
    std::size_t u = unit_levels(d);
    if (u == 0 || u > 3) fail(ErrorCode::kUnsupported, "multilevel view needs domains {0..u} with u <= 3");
    out.levels = std::max(out.levels, u);
  }
  replay(trace);
  const std::size_t n = c->size();
  std::vector<std::vector<double>> w(n);
  std::vector<std::size_t> u(n);
  for (std::size_t j = 0; j < n; ++j) {
    u[j] = unit_levels(instance.domains()[j]);
    w[j].assign(u[j], (*c)[j]);
  }
  Point x = trace.start;
  auto check = [&] {
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t i = 1; i <= u[j]; ++i) {
        double done = std::clamp(x[j] - double(i - 1), 0.0, 1.0);
        if (std::abs(w[j][i - 1] - (*c)[j] * (1.0 - done)) > tol((*c)[j])) out.invariant_holds = false;
      }
    }
  };
  check();
  out.weights.push_back(w);
  for (const auto& s : trace.steps) {
    for (const auto& r : s.raised) {
      double amount = (*c)[r.var] * (r.new_value - r.old_value);
      for (double& level : w[r.var]) {
        double take = std::min(level, amount);
        level -= take;
        amount -= take;
        if (level <= tol((*c)[r.var]) * 1e-3) level = 0.0;
      }
      x[r.var] = r.new_value;
    }
    check();
    out.weights.push_back(w);
  }
  Point mu = instance.mu(x);
  out.solution.assign(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    std::size_t i = 0;
    while (i < u[j] && w[j][i] <= kEps * std::max(1.0, (*c)[j])) ++i;
    out.solution[j] = double(i);
    bool ok = (*c)[j] == 0.0 ? out.solution[j] >= mu[j] : out.solution[j] == mu[j];
    if (!ok) out.matches_mu = false;
  }
  return out;
}

bool LocalRatioReport::passed() const {
  return property_a && property_b && chain && property_c && linear_closed_form && conclusion &&
         (!weight_view_checked || weight_view);
}

LocalRatioReport local_ratio_report(const Instance& instance, const StepTrace& trace, std::size_t probes,
                                    std::uint64_t seed, const Point* xstar) {
  Decomposition d(trace, instance.cost());
  LocalRatioReport out;
  out.steps = d.steps();
  out.delta = instance.delta();
  Point opt;
  if (xstar) {
    opt = *xstar;
  } else {
    auto o = exact_opt(instance);
    if (!o.feasible) throw InfeasibleError("local_ratio_report: instance is infeasible");
    if (!o.exact) fail(ErrorCode::kOracleUnavailable, "local_ratio_report: oracle could not certify x*");
    opt = o.x;
  }
  const Point& xt = d.points().back();
  out.property_c = d.r(xt) == 0.0;

  auto pts = probe_points(d, probes, seed);
  pts.push_back(opt);
  out.probes = pts.size();
  const bool linear = instance.cost().linear_coefficients() != nullptr;
  for (const auto& p : pts) {
    double gap = std::abs(d.telescoping_gap(p));
    out.max_telescoping_gap = std::max(out.max_telescoping_gap, gap);
    if (gap > tol(instance.cost()(p))) out.property_a = false;
    auto b = check_property_b(d, instance, opt, p);
    out.property_b = out.property_b && b.holds;
    out.chain = out.chain && b.chain_holds;
    out.min_slack_b = std::min(out.min_slack_b, b.min_slack);
    out.min_chain_slack = std::min(out.min_chain_slack, b.min_chain_slack);
    if (linear) {
      for (std::size_t t = 1; t <= d.steps(); ++t) {
        double g = std::abs(d.ct(t, p) - d.ct_linear(t, p));
        out.max_closed_form_gap = std::max(out.max_closed_form_gap, g);
        if (g > tol(instance.cost()(p))) out.linear_closed_form = false;
      }
    }
  }

  double lhs = d.base(), rhs = d.base() + d.r(opt);
  for (std::size_t t = 1; t <= d.steps(); ++t) {
    lhs += d.ct(t, xt);
    rhs += d.ct(t, opt);
  }
  out.conclusion_lhs = lhs;
  out.conclusion_rhs = double(out.delta) * rhs;
  out.greedy_cost = instance.cost()(instance.mu(xt));
  out.opt_cost = instance.cost()(opt);
  out.conclusion = std::abs(lhs - instance.cost()(xt)) <= tol(lhs) && lhs <= out.conclusion_rhs + tol(lhs) &&
                   out.greedy_cost <= lhs + tol(lhs) &&
                   out.greedy_cost <= double(out.delta) * out.opt_cost + tol(out.opt_cost);

  bool binary = linear && std::all_of(instance.domains().begin(), instance.domains().end(),
                                      [](const Domain& dom) { return unit_levels(dom) == 1; });
  if (binary) {
    auto v = weight_reduction_view(instance, trace);
    out.weight_view_checked = true;
    out.weight_view = v.invariant_holds && v.matches_mu;
  }
  return out;
}

}  // namespace monocover
