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

#include "monocover/lp.hpp"

#include <algorithm>
#include <cmath>

#include "monocover/common.hpp"

namespace monocover {

LpSolution solve_covering_lp(const CoveringLp& lp) {
  const std::size_t n = lp.cost.size();
  if (lp.upper.size() != n || lp.rows.size() != lp.rhs.size()) {
    fail(ErrorCode::kDimensionMismatch, "covering LP: inconsistent sizes");
  }
  for (double c : lp.cost) {
    if (!(c >= 0.0)) fail(ErrorCode::kInvalidArgument, "covering LP needs non-negative costs");
  }

  // Dual: max rhs' w  s.t.  M' w <= cost, w >= 0, where M stacks the rows and
  // -e_j for every finite upper bound (with rhs -upper_j).
  std::vector<std::vector<double>> m;
  std::vector<double> r;
  for (std::size_t i = 0; i < lp.rows.size(); ++i) {
    if (lp.rows[i].size() != n) fail(ErrorCode::kDimensionMismatch, "covering LP: row width");
    m.push_back(lp.rows[i]);
    r.push_back(lp.rhs[i]);
  }
  for (std::size_t j = 0; j < n; ++j) {
    if (std::isinf(lp.upper[j])) continue;
    std::vector<double> row(n, 0.0);
    row[j] = -1.0;
    m.push_back(std::move(row));
    r.push_back(-lp.upper[j]);
  }
  const std::size_t k = m.size();
  const std::size_t cols = k + n;
  constexpr double kTol = 1e-12;

  // Tableau rows are the n dual constraints; columns are w then slacks.
  std::vector<std::vector<double>> t(n, std::vector<double>(cols + 1, 0.0));
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < k; ++i) t[j][i] = m[i][j];
    t[j][k + j] = 1.0;
    t[j][cols] = lp.cost[j];
  }
  std::vector<double> d(cols, 0.0);  // reduced profits
  for (std::size_t i = 0; i < k; ++i) d[i] = r[i];
  std::vector<std::size_t> basis(n);
  for (std::size_t j = 0; j < n; ++j) basis[j] = k + j;

  for (std::size_t iter = 0; iter < 100000; ++iter) {
    std::size_t enter = cols;
    for (std::size_t c = 0; c < cols; ++c) {
      if (d[c] > kTol) {
        enter = c;
        break;
      }
    }
    if (enter == cols) break;
    std::size_t leave = n;
    double best = 0.0;
    for (std::size_t row = 0; row < n; ++row) {
      if (t[row][enter] > kTol) {
        double ratio = t[row][cols] / t[row][enter];
        if (leave == n || ratio < best - kTol ||
            (ratio <= best + kTol && basis[row] < basis[leave])) {
          leave = row;
          best = ratio;
        }
      }
    }
    // Unbounded dual: the covering rows cannot be met within the bounds.
    if (leave == n) return {};
    double piv = t[leave][enter];
    for (double& v : t[leave]) v /= piv;
    for (std::size_t row = 0; row < n; ++row) {
      if (row == leave || t[row][enter] == 0.0) continue;
      double f = t[row][enter];
      for (std::size_t c = 0; c <= cols; ++c) t[row][c] -= f * t[leave][c];
    }
    double f = d[enter];
    for (std::size_t c = 0; c < cols; ++c) d[c] -= f * t[leave][c];
    basis[leave] = enter;
  }

  LpSolution out;
  out.feasible = true;
  out.z.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    double z = std::max(0.0, -d[k + j]);
    if (!std::isinf(lp.upper[j])) z = std::min(z, lp.upper[j]);
    out.z[j] = z;
    out.value += lp.cost[j] * z;
  }
  return out;
}

}  // namespace monocover
