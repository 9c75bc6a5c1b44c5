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

#ifndef MONOCOVER_BENCH_HPP_
#define MONOCOVER_BENCH_HPP_

#include <cstdint>
#include <vector>

#include "monocover/classic.hpp"
#include "monocover/cmip.hpp"
#include "monocover/instance.hpp"

namespace monocover {

// n variables and n rows of `row_size` distinct variables each. Integrality
// and upper bounds are fixed per variable; every row is satisfiable.
Instance random_cmip_instance(std::size_t n, std::size_t row_size, std::uint64_t seed);

// `customers` customers with `degree` eligible facilities each.
FacilityInstance random_facility_instance(std::size_t customers, std::size_t facilities,
                                          std::size_t degree, std::uint64_t seed);

struct CounterPoint {
  std::size_t n = 0;
  std::size_t N = 0;      // sum |deps(S)|
  std::size_t delta = 0;  // max |deps(S)|
  std::uint64_t ops = 0;
  std::size_t steps = 0;
  double normalized = 0.0;  // ops / (N log2 delta)
  double seconds = 0.0;
};

struct CounterFamilyReport {
  std::vector<CounterPoint> points;
  double C = 0.0;  // max normalized
  // Slopes of log(ops / log2 delta) against log N: least squares over all
  // points, and the largest between consecutive sizes.
  double slope = 0.0;
  double max_pair_slope = 0.0;
  double threshold = 1.15;
  bool ok() const { return max_pair_slope <= threshold && slope <= threshold; }
};

CounterFamilyReport cmip_counter_family(const std::vector<std::size_t>& sizes,
                                        std::size_t row_size, std::uint64_t seed);

struct FacilityCounterPoint {
  std::size_t customers = 0;
  std::size_t facilities = 0;
  std::size_t pairs = 0;  // sum |N(i)|
  std::uint64_t touches = 0;
  double seconds = 0.0;
  bool ok() const { return touches <= 2 * pairs; }
};

std::vector<FacilityCounterPoint> facility_counter_family(const std::vector<std::size_t>& sizes,
                                                          std::size_t degree, std::uint64_t seed);

}  // namespace monocover

#endif  // MONOCOVER_BENCH_HPP_
