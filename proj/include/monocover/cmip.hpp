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

#ifndef MONOCOVER_CMIP_HPP_
#define MONOCOVER_CMIP_HPP_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "monocover/common.hpp"
#include "monocover/constraint.hpp"
#include "monocover/cost.hpp"
#include "monocover/engine.hpp"
#include "monocover/instance.hpp"

namespace monocover {

struct CmipEntry {
  std::size_t var = 0;
  double coeff = 0.0;  // A_ij > 0
  bool integer = false;
  double upper = kUnbounded;
  bool operator==(const CmipEntry&) const = default;
};

// sum_{j in I} A_j floor(min(x_j, u_j)) + sum_{j not in I} A_j min(x_j, u_j) >= b.
class CmipRow final : public Constraint {
 public:
  CmipRow(std::string id, std::vector<CmipEntry> entries, double b);

  ConstraintKind kind() const override { return ConstraintKind::kCmipRow; }
  bool satisfied(std::span<const double> x) const override;
  std::vector<double> breakpoints(std::span<const double> x, std::size_t j) const override;
  bool piecewise_constant() const override { return all_integer_; }
  bool piecewise_constant_in(std::size_t j) const override {
    const CmipEntry* e = entry_for(j);
    return e == nullptr || e->integer;
  }
  std::optional<double> shortfall(std::span<const double> x) const override;
  double raise_cap(std::span<const double> x, std::size_t j) const override;

  // Sorted by variable index.
  const std::vector<CmipEntry>& entries() const { return entries_; }
  double b() const { return b_; }
  const CmipEntry* entry_for(std::size_t j) const;
  // Positions in entries() of the integer terms, by decreasing coefficient,
  // ties by ascending variable index.
  const std::vector<std::size_t>& integer_order() const { return integer_order_; }

  double lhs(std::span<const double> x) const;
  // A_j's contribution at x_j = v, floored when `floored`.
  static double term(const CmipEntry& e, double v, bool floored);
  static bool saturated(const CmipEntry& e, double v) {
    return !is_unbounded(e.upper) && v >= e.upper - kEps;
  }

 private:
  std::vector<CmipEntry> entries_;
  double b_;
  std::vector<std::size_t> integer_order_;
  bool all_integer_ = true;
};

struct StepsizeBreakdown {
  std::vector<std::size_t> J;  // variables, in prefix order
  std::vector<std::size_t> U;  // variables, ascending
  double beta_J = kUnbounded;
  double beta_Jbar = kUnbounded;
  double slack = 0.0;  // b' for the relaxed row S(J)
  double beta = kUnbounded;
};

// CMIP step size computed from scratch in O(|deps|). `c` is the full cost vector.
StepsizeBreakdown cmip_stepsize(std::span<const double> x, const CmipRow& row,
                                std::span<const double> c);
StepsizeBreakdown cmip_stepsize(std::span<const double> x, const CmipRow& row,
                                const CostModel& cost);

enum class CmipImpl { kHeap, kNaive };

struct CmipOptions {
  CmipImpl impl = CmipImpl::kHeap;
  bool record_trace = true;
};

// Work done by the stepsize and step routines. A heap operation on a heap of
// size s counts 1 + ceil(log2 s); every scanned entry of the naive variant
// counts 1.
struct CmipCounters {
  std::uint64_t preprocessing = 0;
  std::uint64_t stepsize_ops = 0;
  std::uint64_t step_ops = 0;
  std::uint64_t total() const { return stepsize_ops + step_ops; }
};

struct CmipResult {
  Point x;         // the greedy vector (may exceed u)
  Point solution;  // floor(min(x, u)) on I, min(x, u) elsewhere
  double cost = 0.0;
  StepTrace trace;
  std::vector<std::size_t> steps_per_row;
  std::size_t steps = 0;
  CmipCounters counters;
};

// Rows are processed in input order, each until satisfied. Requires a linear
// cost, CmipRow constraints only, real domains, and the same integrality and
// upper bound for a variable in every row.
CmipResult solve_cmip(const Instance& instance, const CmipOptions& options = {});

// True when `instance` meets the solve_cmip requirements.
bool is_cmip_instance(const Instance& instance);

}  // namespace monocover

#endif  // MONOCOVER_CMIP_HPP_
