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

#ifndef MONOCOVER_PROBABILISTIC_HPP_
#define MONOCOVER_PROBABILISTIC_HPP_

#include <cstdint>
#include <memory>
#include <vector>

#include "monocover/cmip.hpp"
#include "monocover/engine.hpp"

namespace monocover {

// Two-stage probabilistic CMIP. Row S is activated independently with
// probability p[S]; w[S][k] is the first-stage weight of x^S on the k-th
// entry of rows[S] (entries are sorted by variable).
struct TwoStageInstance {
  std::vector<double> c;
  std::vector<std::shared_ptr<const CmipRow>> rows;
  std::vector<double> p;
  std::vector<std::vector<double>> w;

  std::size_t n() const { return c.size(); }
  std::size_t size() const { return rows.size(); }
  // Throws on dimension mismatches, p outside [0, 1], negative weights.
  void validate() const;
  // Max variables per row.
  std::size_t delta() const;
  // Max rows per variable.
  std::size_t delta_hat() const;

  // From a CMIP instance; w defaults to zero weights.
  static TwoStageInstance from_instance(const Instance& inst, std::vector<double> p,
                                        std::vector<std::vector<double>> w = {});
};

// X = (x^S): values[S][k] is x^S at the k-th entry of rows[S].
struct FirstStageMatrix {
  std::vector<std::vector<double>> values;

  static FirstStageMatrix zeros(const TwoStageInstance& inst);
  // x^S as a dense vector over all n variables.
  Point dense(const TwoStageInstance& inst, std::size_t s) const;
  bool operator==(const FirstStageMatrix&) const = default;
};

// C(X) = W.X + E[c . x_hat], exact for independent activations.
double expected_total_cost(const TwoStageInstance& inst, const FirstStageMatrix& X);
double first_stage_cost(const TwoStageInstance& inst, const FirstStageMatrix& X);

struct MonteCarloEstimate {
  double mean = 0.0;
  double standard_error = 0.0;
  std::size_t samples = 0;
};
MonteCarloEstimate monte_carlo_total_cost(const TwoStageInstance& inst, const FirstStageMatrix& X,
                                          std::size_t samples, std::uint64_t seed);

// dC/dx^S_j for j in deps(S), valid until x^S_j reaches threshold().
double marginal_rate(const TwoStageInstance& inst, const FirstStageMatrix& X, std::size_t s,
                     std::size_t j);
// Smallest x^R_j strictly above x^S_j over rows R containing j; +inf if none.
double threshold(const TwoStageInstance& inst, const FirstStageMatrix& X, std::size_t s,
                 std::size_t j);

// True when every row of X lies in its constraint.
bool first_stage_feasible(const TwoStageInstance& inst, const FirstStageMatrix& X);

struct ProbabilisticResult {
  FirstStageMatrix x;         // the greedy matrix
  FirstStageMatrix solution;  // each x^S rounded as in solve_cmip
  double cost = 0.0;          // C(solution)
  // Variables of the trace are flat indices: row offset + entry position.
  StepTrace trace;
  std::vector<std::size_t> steps_per_row;
  std::uint64_t ops = 0;  // rate, threshold and stepsize work
};

// Rows in input order; each step uses beta = min(beta_t, stepsize_{c'}).
ProbabilisticResult solve_probabilistic_cmip(const TwoStageInstance& inst);

// Exhaustive optimum when every variable is integer with a finite bound.
struct TwoStageOptimum {
  double cost = kUnbounded;
  FirstStageMatrix x;
};
TwoStageOptimum two_stage_opt(const TwoStageInstance& inst, std::size_t limit = 20'000'000);

}  // namespace monocover

#endif  // MONOCOVER_PROBABILISTIC_HPP_
