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

#ifndef MONOCOVER_LOCAL_RATIO_HPP_
#define MONOCOVER_LOCAL_RATIO_HPP_

#include <cstdint>
#include <vector>

#include "monocover/engine.hpp"
#include "monocover/instance.hpp"

namespace monocover {

// c(x v y) - c(x): the cost to raise x until it dominates y.
double distance_between(const CostModel& cost, std::span<const double> x, std::span<const double> y);

// c^t(x) = distance(x^{t-1}, x) - distance(x^t, x) and r(x) = distance(x^T, x)
// over the points x^0..x^T of a replayed trace. Identity (a) reads
// c(x v x^0) = c(x^0) + r(x) + sum_t c^t(x), which is the usual form when
// x^0 = 0.
class Decomposition {
 public:
  // Throws kPrecondition when the trace does not replay.
  Decomposition(const StepTrace& trace, CostModel cost);

  std::size_t steps() const { return points_.size() - 1; }
  const std::vector<Point>& points() const { return points_; }
  const std::vector<double>& betas() const { return betas_; }
  const CostModel& cost() const { return cost_; }
  double base() const { return base_; }  // c(x^0)

  double ct(std::size_t t, std::span<const double> x) const;  // 1 <= t <= T
  double r(std::span<const double> x) const;
  // sum_j c_j |[0, x_j] n [x_j^{t-1}, x_j^t]|; linear costs only.
  double ct_linear(std::size_t t, std::span<const double> x) const;
  // c(x v x^0) - (c(x^0) + r(x) + sum_t c^t(x)).
  double telescoping_gap(std::span<const double> x) const;

 private:
  std::vector<Point> points_;
  std::vector<double> betas_;
  CostModel cost_;
  double base_ = 0.0;
};

struct PropertyBReport {
  bool holds = true;             // c^t(x) <= delta * c^t(x*) + eps for all t
  double min_slack = kUnbounded;  // min_t delta * c^t(x*) - c^t(x)
  bool chain_holds = true;       // c^t(x) <= delta * beta_t <= delta * c^t(x*), + eps
  double min_chain_slack = kUnbounded;
  std::size_t checks = 0;
};

// Throws InfeasibleError when xstar is not feasible for `instance`.
PropertyBReport check_property_b(const Decomposition& d, const Instance& instance,
                                 std::span<const double> xstar, std::span<const double> x,
                                 double eps = 1e-9);

// The 2^n lattice of per-variable bounds {x^0_j, max_t x^t_j} for n <= 10;
// otherwise `count` uniform points in that box. Trace points are appended.
std::vector<Point> probe_points(const Decomposition& d, std::size_t count, std::uint64_t seed);

struct WeightReductionView {
  std::vector<Point> weights;  // c' before the first step and after each step
  Point cover;                 // x_j = 1 iff c'_j = 0
  bool invariant_holds = true;  // c'_j = c_j (1 - min(1, x_j)) after every step
  bool matches_mu = true;       // cover == mu(x^T)
};

// {0,1} domains and linear cost; otherwise kUnsupported. Each raise of x_j
// reduces c'_j by the cost it added, never below 0.
WeightReductionView weight_reduction_view(const Instance& instance, const StepTrace& trace);

struct MultilevelView {
  std::size_t levels = 0;                          // u
  std::vector<std::vector<std::vector<double>>> weights;  // [step][j][i - 1] = c'_j(i)
  Point solution;  // x_j = max{i : c'_j(1..i) all 0}
  bool invariant_holds = true;
  bool matches_mu = true;
};

// Domains {0, 1, ..., u} with u <= 3 and linear cost. Each raise lowers the
// lowest non-zero level first and spills into the next one.
MultilevelView multilevel_weight_view(const Instance& instance, const StepTrace& trace);

struct LocalRatioReport {
  std::size_t steps = 0;
  std::size_t delta = 0;
  std::size_t probes = 0;
  bool property_a = true;
  double max_telescoping_gap = 0.0;
  bool property_b = true;
  double min_slack_b = kUnbounded;
  bool chain = true;
  double min_chain_slack = kUnbounded;
  bool property_c = true;  // r(x^T) == 0 exactly
  bool linear_closed_form = true;
  double max_closed_form_gap = 0.0;
  // c(x^T) = c(x^0) + sum_t c^t(x^T) <= delta * (c(x^0) + sum_t c^t(x*) + r(x*)).
  double conclusion_lhs = 0.0;
  double conclusion_rhs = 0.0;
  double greedy_cost = 0.0;  // c(mu(x^T))
  double opt_cost = 0.0;     // c(x*)
  bool conclusion = true;
  bool weight_view_checked = false;
  bool weight_view = true;
  bool passed() const;
};

// Runs every check with x* from the oracle (or the caller).
LocalRatioReport local_ratio_report(const Instance& instance, const StepTrace& trace,
                                    std::size_t probes = 100, std::uint64_t seed = 1,
                                    const Point* xstar = nullptr);

}  // namespace monocover

#endif  // MONOCOVER_LOCAL_RATIO_HPP_
