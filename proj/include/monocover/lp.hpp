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

#ifndef MONOCOVER_LP_HPP_
#define MONOCOVER_LP_HPP_

#include <vector>

namespace monocover {

// min cost . z  s.t.  rows z >= rhs,  0 <= z <= upper,  with cost >= 0.
// Dense and small: meant for the oracle's continuous sub-problems.
struct CoveringLp {
  std::vector<double> cost;
  std::vector<std::vector<double>> rows;
  std::vector<double> rhs;
  std::vector<double> upper;  // +inf for no bound
};

struct LpSolution {
  bool feasible = false;
  double value = 0.0;
  std::vector<double> z;
};

// Primal simplex with Bland's rule on the dual, whose slack basis is feasible
// because the costs are non-negative.
LpSolution solve_covering_lp(const CoveringLp& lp);

}  // namespace monocover

#endif  // MONOCOVER_LP_HPP_
