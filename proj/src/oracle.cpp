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

#include "monocover/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>

#include "monocover/cmip.hpp"
#include "monocover/lp.hpp"

namespace monocover {

namespace {

const CmipRow* as_cmip(const Constraint& c) {
  if (const auto* row = dynamic_cast<const CmipRow*>(&c)) return row;
  if (const auto* r = dynamic_cast<const RoundedConstraint*>(&c)) {
    return dynamic_cast<const CmipRow*>(&r->inner());
  }
  return nullptr;
}

constexpr int kGridSamples = 16;

class BranchAndBound {
 public:
  BranchAndBound(const Instance& inst, std::span<const double> anchor,
                 std::vector<std::size_t> which, const OracleOptions& options)
      : inst_(inst), anchor_(anchor.begin(), anchor.end()), which_(std::move(which)),
        options_(options) {
    const std::size_t n = inst.n();
    if (anchor_.size() != n) {
      fail(ErrorCode::kDimensionMismatch, "oracle: anchor has the wrong length");
    }
    kind_.assign(n, Kind::kFixed);
    cand_.assign(n, {});
    lp_rows_.assign(which_.size(), nullptr);
    std::vector<std::vector<std::size_t>> by_var(n);
    for (std::size_t w = 0; w < which_.size(); ++w) {
      for (std::size_t j : inst.effective(which_[w]).deps()) by_var[j].push_back(w);
    }
    const bool linear = inst.cost().linear_coefficients() != nullptr;
    for (std::size_t j = 0; j < n; ++j) {
      if (by_var[j].empty()) continue;
      bool discrete = true;
      bool lp_ok = linear && inst.domains()[j].unrestricted();
      for (std::size_t w : by_var[j]) {
        const Constraint& S = inst.effective(which_[w]);
        if (!S.piecewise_constant_in(j)) {
          discrete = false;
          if (as_cmip(S) == nullptr) lp_ok = false;
        }
      }
      if (discrete) {
        kind_[j] = Kind::kDiscrete;
      } else if (lp_ok) {
        kind_[j] = Kind::kLp;
      } else {
        kind_[j] = Kind::kGrid;
        exact_ = false;
      }
      std::vector<double> values{anchor_[j]};
      double top = anchor_[j];
      for (std::size_t w : by_var[j]) {
        const Constraint& S = inst.effective(which_[w]);
        for (double v : S.breakpoints(anchor_, j)) {
          if (v > anchor_[j]) values.push_back(v);
        }
        double cap = S.raise_cap(anchor_, j);
        if (std::isfinite(cap)) top = std::max(top, cap);
      }
      if (kind_[j] == Kind::kGrid && top > anchor_[j]) {
        for (int s = 1; s <= kGridSamples; ++s) {
          values.push_back(anchor_[j] + (top - anchor_[j]) * s / kGridSamples);
        }
      }
      std::sort(values.begin(), values.end());
      std::vector<double> uniq;
      for (double v : values) {
        if (uniq.empty() || v > uniq.back() + 1e-12) uniq.push_back(v);
      }
      cand_[j] = std::move(uniq);
      optimistic_[j] = kind_[j] == Kind::kLp ? std::max(top, anchor_[j]) : cand_[j].back();
    }
    for (std::size_t w = 0; w < which_.size(); ++w) {
      const Constraint& S = inst.effective(which_[w]);
      for (std::size_t j : S.deps()) {
        if (kind_[j] == Kind::kLp) lp_rows_[w] = as_cmip(S);
      }
    }
    best_value_ = std::isfinite(options.incumbent)
                      ? options.incumbent + 1e-9 * std::max(1.0, std::abs(options.incumbent))
                      : kUnbounded;
  }

  OracleResult run() {
    cur_ = anchor_;
    level_.assign(inst_.n(), 0);
    fixed_.assign(inst_.n(), 0);
    search();
    OracleResult out;
    out.exact = exact_;
    out.nodes = nodes_;
    out.feasible = !best_x_.empty();
    if (out.feasible) {
      out.x = best_x_;
      out.value = inst_.cost()(best_x_);
    }
    return out;
  }

 private:
  enum class Kind { kFixed, kDiscrete, kLp, kGrid };

  bool branchable(std::size_t j) const {
    return (kind_[j] == Kind::kDiscrete || kind_[j] == Kind::kGrid) && !fixed_[j] &&
           level_[j] + 1 < cand_[j].size();
  }

  bool optimistic_feasible() {
    Point y = cur_;
    for (std::size_t j = 0; j < y.size(); ++j) {
      if (kind_[j] == Kind::kLp || branchable(j)) y[j] = optimistic_[j];
    }
    for (std::size_t i : which_) {
      if (!inst_.effective(i).satisfied(y)) return false;
    }
    return true;
  }

  void search() {
    if (++nodes_ > options_.budget) {
      throw OracleUnavailableError("oracle: search budget of " + std::to_string(options_.budget) +
                                   " nodes exceeded");
    }
    double lb = inst_.cost()(cur_);
    if (lb >= best_value_) return;
    if (!optimistic_feasible()) return;

    for (std::size_t w = 0; w < which_.size(); ++w) {
      const Constraint& S = inst_.effective(which_[w]);
      if (S.satisfied(cur_)) continue;
      std::vector<std::size_t> moves;
      bool has_lp = false;
      for (std::size_t j : S.deps()) {
        if (branchable(j)) moves.push_back(j);
        if (kind_[j] == Kind::kLp) has_lp = true;
      }
      if (moves.empty()) {
        if (has_lp) continue;
        return;
      }
      for (std::size_t j : moves) {
        double saved = cur_[j];
        ++level_[j];
        cur_[j] = cand_[j][level_[j]];
        search();
        --level_[j];
        cur_[j] = saved;
        fixed_[j] = 1;
      }
      if (has_lp) search();
      for (std::size_t j : moves) fixed_[j] = 0;
      return;
    }
    leaf();
  }

  void leaf() {
    std::vector<std::size_t> lp_vars;
    std::vector<std::size_t> lp_index(inst_.n(), 0);
    CoveringLp lp;
    const auto* c = inst_.cost().linear_coefficients();
    for (std::size_t w = 0; w < which_.size(); ++w) {
      const Constraint& S = inst_.effective(which_[w]);
      if (S.satisfied(cur_)) continue;
      const CmipRow* row = lp_rows_[w];
      if (row == nullptr) return;
      Point y = inst_.restricted() ? inst_.mu(cur_) : cur_;
      std::vector<double> coeffs;
      double rhs = row->b();
      for (const auto& e : row->entries()) {
        rhs -= CmipRow::term(e, y[e.var], e.integer);
      }
      for (const auto& e : row->entries()) {
        if (kind_[e.var] != Kind::kLp || cur_[e.var] >= e.upper) continue;
        if (lp_index[e.var] == 0) {
          lp_vars.push_back(e.var);
          lp_index[e.var] = lp_vars.size();
          lp.cost.push_back((*c)[e.var]);
          lp.upper.push_back(is_unbounded(e.upper) ? kUnbounded : e.upper - cur_[e.var]);
          for (auto& r : lp.rows) r.push_back(0.0);
        }
      }
      std::vector<double> r(lp_vars.size(), 0.0);
      for (const auto& e : row->entries()) {
        if (lp_index[e.var] != 0 && cur_[e.var] < e.upper) r[lp_index[e.var] - 1] = e.coeff;
      }
      lp.rows.push_back(std::move(r));
      lp.rhs.push_back(rhs);
    }
    for (auto& r : lp.rows) r.resize(lp_vars.size(), 0.0);
    Point y = cur_;
    if (!lp_vars.empty() || !lp.rows.empty()) {
      LpSolution sol = solve_covering_lp(lp);
      if (!sol.feasible) return;
      for (std::size_t k = 0; k < lp_vars.size(); ++k) y[lp_vars[k]] += sol.z[k];
    }
    double value = inst_.cost()(y);
    if (value < best_value_) {
      best_value_ = value;
      best_x_ = std::move(y);
    }
  }

  const Instance& inst_;
  Point anchor_;
  std::vector<std::size_t> which_;
  OracleOptions options_;
  std::vector<Kind> kind_;
  std::vector<std::vector<double>> cand_;
  std::unordered_map<std::size_t, double> optimistic_;
  std::vector<const CmipRow*> lp_rows_;
  bool exact_ = true;

  Point cur_;
  std::vector<std::size_t> level_;
  std::vector<char> fixed_;
  std::size_t nodes_ = 0;
  double best_value_ = kUnbounded;
  Point best_x_;
};

}  // namespace

OracleResult cheapest_augmentation(const Instance& instance, std::span<const double> anchor,
                                   std::span<const std::size_t> which,
                                   const OracleOptions& options) {
  std::vector<std::size_t> list(which.begin(), which.end());
  if (list.empty()) {
    list.resize(instance.size());
    std::iota(list.begin(), list.end(), 0);
  }
  for (std::size_t i : list) {
    if (i >= instance.size()) fail(ErrorCode::kInvalidArgument, "oracle: constraint index out of range");
  }
  for (double v : anchor) {
    if (std::isnan(v) || v < 0.0) fail(ErrorCode::kDomain, "oracle: anchor must be >= 0");
  }
  BranchAndBound bb(instance, anchor, std::move(list), options);
  return bb.run();
}

OracleResult exact_opt(const Instance& instance, const OracleOptions& options) {
  Point start = instance.start();
  return cheapest_augmentation(instance, start, {}, options);
}

double residual(const Instance& instance, std::span<const double> x, const OracleOptions& options) {
  if (instance.feasible(x)) return 0.0;
  OracleResult r = cheapest_augmentation(instance, x, {}, options);
  if (!r.feasible) throw InfeasibleError("residual: no feasible augmentation exists");
  return std::max(0.0, r.value - instance.cost()(x));
}

double distance(const Instance& instance, std::span<const double> x, std::size_t i,
                const OracleOptions& options) {
  if (i >= instance.size()) fail(ErrorCode::kInvalidArgument, "distance: constraint index out of range");
  if (instance.effective(i).satisfied(x)) return 0.0;
  std::size_t which[] = {i};
  OracleResult r = cheapest_augmentation(instance, x, which, options);
  if (!r.feasible) {
    throw InfeasibleError("distance: constraint '" + instance.constraint(i).id() + "' cannot be met",
                          static_cast<std::ptrdiff_t>(i));
  }
  return std::max(0.0, r.value - instance.cost()(x));
}

}  // namespace monocover
