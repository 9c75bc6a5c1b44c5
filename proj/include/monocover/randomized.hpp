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

#ifndef MONOCOVER_RANDOMIZED_HPP_
#define MONOCOVER_RANDOMIZED_HPP_

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <vector>

#include "monocover/engine.hpp"
#include "monocover/instance.hpp"

namespace monocover {

// Seedable generator with stream splitting: stream s of seed k is an
// mt19937_64 seeded with splitmix64 applied to (k, s). Streams of one seed
// are used for independent trials.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }
  std::uint64_t next() { return engine_(); }
  // Uniform in [0, 1) with 53 random bits.
  double uniform() { return double(engine_() >> 11) * 0x1p-53; }
  bool bernoulli(double p) { return p >= 1.0 || (p > 0.0 && uniform() < p); }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t& state);

enum class Correlation {
  kIndependent,  // one Bernoulli(p_j) per variable
  kSinglePick,   // at most one variable, j with probability p_j; needs sum p_j <= 1
};

struct RandomStepPlan {
  std::vector<double> p;  // aligned with deps(S)
  double beta = 0.0;
  Correlation correlation = Correlation::kIndependent;
  // Optional targets aligned with deps(S); when empty X_j is the largest
  // value raising c by at most beta / p_j.
  std::vector<double> targets;
};

// X_j for every dep: the largest raise costing at most beta / p_j (x_j when
// p_j = 0). Free raises are clamped at S.raise_cap.
std::vector<double> rstep_targets(std::span<const double> x, const Constraint& S,
                                  const CostModel& cost, const RandomStepPlan& plan);

// Randomized step: raises each dep j with probability p_j. x must violate S. The record lists the coordinates that moved.
StepRecord rstep(Point& x, const Constraint& S, const CostModel& cost, const RandomStepPlan& plan,
                 Rng& rng, std::size_t index = 0);

struct StatelessPlan {
  std::vector<double> next;   // X_j = min{z in U_j : z > x_j}, or x_j
  std::vector<double> alpha;  // c(x with x_j = X_j) - c(x); +inf when X_j = x_j
  RandomStepPlan step;
};

// The rstep the stateless variant performs at x. beta = min_j alpha_j under
// independent draws; under single pick beta = 1 / sum_j (1 / alpha_j) so the
// probabilities sum to one. When some raise is free the plan raises only the
// free variables, with beta = 0 and p = 1.
StatelessPlan stateless_plan(std::span<const double> x, const Constraint& S, const CostModel& cost,
                             const std::vector<Domain>& domains,
                             Correlation correlation = Correlation::kIndependent);

// Stateless step: each dep moves to its next domain point or stays.
// Every coordinate stays in its domain. Throws InfeasibleError when
// no dep can move while x violates S.
StepRecord stateless_rstep(Point& x, const Constraint& S, const CostModel& cost,
                           const std::vector<Domain>& domains, Rng& rng,
                           Correlation correlation = Correlation::kIndependent,
                           std::size_t index = 0);

enum class RandomVariant { kRstep, kStateless };

const char* variant_name(RandomVariant v);

struct RandomizedOptions {
  RandomVariant variant = RandomVariant::kStateless;
  Correlation correlation = Correlation::kIndependent;
  // kRstep: probability per variable (empty means all 1). Needs a linear
  // cost unless `beta` is given; then beta = minimal_beta under c'_j = p_j c_j.
  std::vector<double> p;
  // Caller-certified step size for non-linear costs under kRstep.
  std::function<double(const Instance&, std::size_t, std::span<const double>)> beta;
  // 0 selects 1000 * (sum |deps(S)| + n).
  std::size_t max_steps = 0;
};

struct RandomizedResult {
  Point x;
  Point mu;
  double cost = 0.0;  // c(mu(x)); equals c(x) for the stateless variant
  StepTrace trace;
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
};

// Constraints are satisfied one after another in input order, which is also
// the online order.
RandomizedResult randomized_solve(const Instance& instance, const RandomizedOptions& options, Rng& rng);

struct MonteCarloReport {
  RandomVariant variant = RandomVariant::kStateless;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  double mean = 0.0;
  double standard_error = 0.0;
  double min_cost = 0.0;
  double max_cost = 0.0;
  double opt = 0.0;
  double ratio = 0.0;  // mean / opt (1 when both are 0)
  std::size_t delta = 0;
  bool within_bound = false;  // mean <= delta * opt + 3 * se
};

// Trial t uses Rng(seed, t). `opt` defaults to the oracle value.
MonteCarloReport montecarlo_ratio(const Instance& instance, const RandomizedOptions& options,
                                  std::size_t trials, std::uint64_t seed,
                                  std::optional<double> opt = std::nullopt);

}  // namespace monocover

#endif  // MONOCOVER_RANDOMIZED_HPP_
