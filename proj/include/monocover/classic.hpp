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

#ifndef MONOCOVER_CLASSIC_HPP_
#define MONOCOVER_CLASSIC_HPP_

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "monocover/engine.hpp"
#include "monocover/instance.hpp"

namespace monocover {

// Non-metric facility location. customers[i] lists N(i) with the
// assignment cost d_ij of each eligible facility.
struct FacilityInstance {
  struct Option {
    std::size_t facility = 0;
    double cost = 0.0;
    bool operator==(const Option&) const = default;
  };
  std::vector<double> opening;
  std::vector<std::vector<Option>> customers;

  // Throws on an empty N(i), unknown or repeated facilities, negative costs.
  void validate() const;
  std::size_t delta() const;
  // One variable per (customer, option), customers in order.
  std::vector<FacilityPair> pairs() const;
  bool operator==(const FacilityInstance&) const = default;
};

struct FacilityResult {
  Point x;                              // per pair, see FacilityInstance::pairs()
  std::vector<std::size_t> assignment;  // facility serving each customer
  std::vector<char> open;
  double cost = 0.0;                    // of the assignment
  StepTrace trace;
  std::uint64_t touches = 0;            // inner-loop iterations
};

// The linear-time greedy: one step per customer, in input order.
FacilityResult solve_facility_location(const FacilityInstance& inst);

// Monotone-covering form: pair variables, facility cost, one floor-sum
// constraint per customer.
Instance facility_to_instance(const FacilityInstance& inst);

// Cost of serving customer i by assignment[i].
double facility_cost(const FacilityInstance& inst, const std::vector<std::size_t>& assignment);

struct FacilityOptimum {
  double cost = kUnbounded;
  std::vector<std::size_t> assignment;
};
// Exhaustive over the subsets of open facilities.
FacilityOptimum facility_opt(const FacilityInstance& inst);
// Cheapest augmentation of a pair vector x to a feasible one.
double facility_residual(const FacilityInstance& inst, std::span<const double> x);

struct SetCoverInstance {
  std::vector<double> weights;                    // per set
  std::vector<std::vector<std::size_t>> element_sets;  // sets containing each element
  void validate() const;
  std::size_t delta() const;
};

struct SetCoverResult {
  std::vector<std::size_t> chosen;  // ascending set indices
  double cost = 0.0;
  std::uint64_t touches = 0;
};

// Facility location with d = 0: sets are facilities, elements customers.
SetCoverResult solve_set_cover(const SetCoverInstance& inst);
// One variable per set, sum_{s ∋ e} floor(x_s) >= 1 per element.
Instance set_cover_to_instance(const SetCoverInstance& inst);

struct Graph {
  std::size_t n = 0;
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  std::vector<double> weights;  // per vertex; empty means unit weights
  void validate() const;
  double weight(std::size_t v) const { return weights.empty() ? 1.0 : weights[v]; }
};

struct VertexCoverResult {
  std::vector<std::size_t> cover;
  double cost = 0.0;
  SolveResult run;
};

// The generic engine on floor(x_u) + floor(x_w) >= 1 per edge.
VertexCoverResult solve_vertex_cover(const Graph& g,
                                     const StepSizePolicy& policy = StepSizePolicy::minimal());
Instance vertex_cover_to_instance(const Graph& g);

// DIMACS edge format: "c" comments, "p edge N M", "e U V" (1-based).
Graph parse_dimacs(std::istream& in);

}  // namespace monocover

#endif  // MONOCOVER_CLASSIC_HPP_
