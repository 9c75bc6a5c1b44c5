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

#ifndef MONOCOVER_ORACLE_HPP_
#define MONOCOVER_ORACLE_HPP_

#include <span>
#include <vector>

#include "monocover/common.hpp"
#include "monocover/instance.hpp"

namespace monocover {

struct OracleOptions {
  // Search nodes before giving up with OracleUnavailableError.
  std::size_t budget = 10'000'000;
  // Known achievable total cost, used to prune (optional).
  double incumbent = kUnbounded;
};

struct OracleResult {
  bool feasible = false;
  // False when some variable could only be handled by grid sampling; such
  // results are upper bounds, not certificates.
  bool exact = true;
  Point x;
  double value = kUnbounded;  // c(x)
  std::size_t nodes = 0;
};

// min c(y) over y >= anchor with mu(y) in every listed constraint (every
// constraint when `which` is empty).
//
// Branch and bound: pick an unmet constraint and branch on which of its
// variables is the first to move up to its next candidate value; earlier
// siblings stay fixed, so every candidate vector is visited at most once.
// Candidates of a variable are the anchor plus the breakpoints of every
// constraint it appears in, evaluated at the anchor. This is exact because
// membership only changes at breakpoints and a breakpoint beyond the
// single-variable satisfaction point is never needed. Variables that only
// enter CMIP rows as continuous terms are left to a covering LP at the
// leaves (linear cost required).
OracleResult cheapest_augmentation(const Instance& instance, std::span<const double> anchor,
                                   std::span<const std::size_t> which,
                                   const OracleOptions& options = {});

// OPT from the start vector.
OracleResult exact_opt(const Instance& instance, const OracleOptions& options = {});

// min{c(y) - c(x) : y >= x feasible}. Throws InfeasibleError when no y exists.
double residual(const Instance& instance, std::span<const double> x,
                const OracleOptions& options = {});

// The same for the single constraint `i`.
double distance(const Instance& instance, std::span<const double> x, std::size_t i,
                const OracleOptions& options = {});

}  // namespace monocover

#endif  // MONOCOVER_ORACLE_HPP_
