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

#include "monocover/probabilistic.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

namespace monocover {

namespace {

struct Slot {
  std::size_t row;
  std::size_t pos;
};

std::vector<std::vector<Slot>> incidence(const TwoStageInstance& inst) {
  std::vector<std::vector<Slot>> out(inst.n());
  for (std::size_t s = 0; s < inst.size(); ++s) {
    const auto& entries = inst.rows[s]->entries();
    for (std::size_t k = 0; k < entries.size(); ++k) out[entries[k].var].push_back({s, k});
  }
  return out;
}

std::size_t position(const CmipRow& row, std::size_t j) {
  const auto& entries = row.entries();
  auto it = std::lower_bound(entries.begin(), entries.end(), j,
                             [](const CmipEntry& e, std::size_t v) { return e.var < v; });
  if (it == entries.end() || it->var != j) {
    fail(ErrorCode::kInvalidArgument, "variable " + std::to_string(j) + " is not in row '" + row.id() + "'");
  }
  return static_cast<std::size_t>(it - entries.begin());
}

void check_matrix(const TwoStageInstance& inst, const FirstStageMatrix& X) {
  if (X.values.size() != inst.size()) fail(ErrorCode::kDimensionMismatch, "X: one vector per row expected");
  for (std::size_t s = 0; s < inst.size(); ++s) {
    if (X.values[s].size() != inst.rows[s]->entries().size()) {
      fail(ErrorCode::kDimensionMismatch, "X: row " + std::to_string(s) + " has the wrong support");
    }
    for (double v : X.values[s]) {
      if (!(v >= 0.0)) fail(ErrorCode::kDomain, "X entries must be >= 0");
    }
  }
}

double rounded(const CmipEntry& e, double v) {
  double capped = std::min(v, e.upper);
  return e.integer ? floor_eps(capped) : capped;
}

}  // namespace

void TwoStageInstance::validate() const {
  for (double cj : c) {
    if (!(cj >= 0.0) || std::isinf(cj)) fail(ErrorCode::kInvalidArgument, "c must be finite and >= 0");
  }
  if (p.size() != rows.size() || w.size() != rows.size()) {
    fail(ErrorCode::kDimensionMismatch, "two-stage instance: p and W need one entry per row");
  }
  for (std::size_t s = 0; s < rows.size(); ++s) {
    if (!rows[s]) fail(ErrorCode::kInvalidArgument, "two-stage instance: null row");
    if (!(p[s] >= 0.0 && p[s] <= 1.0)) {
      fail(ErrorCode::kInvalidArgument, "activation probability of row '" + rows[s]->id() + "' not in [0, 1]");
    }
    const auto& entries = rows[s]->entries();
    if (w[s].size() != entries.size()) {
      fail(ErrorCode::kDimensionMismatch, "W: row '" + rows[s]->id() + "' needs one weight per entry");
    }
    for (double v : w[s]) {
      if (!(v >= 0.0) || std::isinf(v)) fail(ErrorCode::kInvalidArgument, "W must be finite and >= 0");
    }
    for (const auto& e : entries) {
      if (e.var >= c.size()) fail(ErrorCode::kDimensionMismatch, "row references an unknown variable");
    }
  }
}

std::size_t TwoStageInstance::delta() const {
  std::size_t d = 0;
  for (const auto& r : rows) d = std::max(d, r->entries().size());
  return d;
}

std::size_t TwoStageInstance::delta_hat() const {
  std::vector<std::size_t> count(n(), 0);
  std::size_t d = 0;
  for (const auto& r : rows) {
    for (const auto& e : r->entries()) d = std::max(d, ++count[e.var]);
  }
  return d;
}

TwoStageInstance TwoStageInstance::from_instance(const Instance& inst, std::vector<double> p,
                                                 std::vector<std::vector<double>> w) {
  const auto* c = inst.cost().linear_coefficients();
  if (c == nullptr) fail(ErrorCode::kUnsupported, "two-stage instances need a linear second-stage cost");
  TwoStageInstance out;
  out.c = *c;
  for (std::size_t i = 0; i < inst.size(); ++i) {
    auto row = std::dynamic_pointer_cast<const CmipRow>(inst.constraints()[i]);
    if (!row) fail(ErrorCode::kUnsupported, "two-stage instances need CMIP rows");
    out.rows.push_back(std::move(row));
  }
  out.p = std::move(p);
  if (w.empty()) {
    for (const auto& r : out.rows) w.emplace_back(r->entries().size(), 0.0);
  }
  out.w = std::move(w);
  out.validate();
  return out;
}

FirstStageMatrix FirstStageMatrix::zeros(const TwoStageInstance& inst) {
  FirstStageMatrix X;
  for (const auto& r : inst.rows) X.values.emplace_back(r->entries().size(), 0.0);
  return X;
}

Point FirstStageMatrix::dense(const TwoStageInstance& inst, std::size_t s) const {
  Point x(inst.n(), 0.0);
  const auto& entries = inst.rows[s]->entries();
  for (std::size_t k = 0; k < entries.size(); ++k) x[entries[k].var] = values[s][k];
  return x;
}

double first_stage_cost(const TwoStageInstance& inst, const FirstStageMatrix& X) {
  check_matrix(inst, X);
  double total = 0.0;
  for (std::size_t s = 0; s < inst.size(); ++s) {
    for (std::size_t k = 0; k < X.values[s].size(); ++k) total += inst.w[s][k] * X.values[s][k];
  }
  return total;
}

double expected_total_cost(const TwoStageInstance& inst, const FirstStageMatrix& X) {
  double total = first_stage_cost(inst, X);
  auto by_var = incidence(inst);
  std::vector<std::pair<double, double>> levels;
  for (std::size_t j = 0; j < inst.n(); ++j) {
    if (inst.c[j] == 0.0) continue;
    levels.clear();
    for (auto [s, k] : by_var[j]) levels.emplace_back(X.values[s][k], inst.p[s]);
    std::sort(levels.begin(), levels.end(), std::greater<>());
    double none_above = 1.0;  // probability that no higher level is active
    double expect = 0.0;
    for (auto [v, p] : levels) {
      expect += v * p * none_above;
      none_above *= 1.0 - p;
    }
    total += inst.c[j] * expect;
  }
  return total;
}

MonteCarloEstimate monte_carlo_total_cost(const TwoStageInstance& inst, const FirstStageMatrix& X,
                                          std::size_t samples, std::uint64_t seed) {
  double first = first_stage_cost(inst, X);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> hat(inst.n());
  double sum = 0.0, sum_sq = 0.0;
  for (std::size_t t = 0; t < samples; ++t) {
    std::fill(hat.begin(), hat.end(), 0.0);
    for (std::size_t s = 0; s < inst.size(); ++s) {
      if (unit(rng) >= inst.p[s]) continue;
      const auto& entries = inst.rows[s]->entries();
      for (std::size_t k = 0; k < entries.size(); ++k) {
        hat[entries[k].var] = std::max(hat[entries[k].var], X.values[s][k]);
      }
    }
    double second = 0.0;
    for (std::size_t j = 0; j < inst.n(); ++j) second += inst.c[j] * hat[j];
    sum += second;
    sum_sq += second * second;
  }
  MonteCarloEstimate out;
  out.samples = samples;
  if (samples == 0) return out;
  double mean = sum / double(samples);
  double var = samples > 1 ? std::max(0.0, (sum_sq - sum * mean) / double(samples - 1)) : 0.0;
  out.mean = first + mean;
  out.standard_error = std::sqrt(var / double(samples));
  return out;
}

double marginal_rate(const TwoStageInstance& inst, const FirstStageMatrix& X, std::size_t s,
                     std::size_t j) {
  check_matrix(inst, X);
  std::size_t k = position(*inst.rows[s], j);
  double v = X.values[s][k];
  double prob = inst.p[s];
  for (std::size_t r = 0; r < inst.size() && prob > 0.0; ++r) {
    if (r == s) continue;
    const CmipEntry* e = inst.rows[r]->entry_for(j);
    if (e == nullptr) continue;
    if (X.values[r][position(*inst.rows[r], j)] > v) prob *= 1.0 - inst.p[r];
  }
  return inst.w[s][k] + inst.c[j] * prob;
}

double threshold(const TwoStageInstance& inst, const FirstStageMatrix& X, std::size_t s,
                 std::size_t j) {
  check_matrix(inst, X);
  double v = X.values[s][position(*inst.rows[s], j)];
  double t = kUnbounded;
  for (std::size_t r = 0; r < inst.size(); ++r) {
    if (r == s || inst.rows[r]->entry_for(j) == nullptr) continue;
    double other = X.values[r][position(*inst.rows[r], j)];
    if (other > v) t = std::min(t, other);
  }
  return t;
}

bool first_stage_feasible(const TwoStageInstance& inst, const FirstStageMatrix& X) {
  check_matrix(inst, X);
  for (std::size_t s = 0; s < inst.size(); ++s) {
    if (!inst.rows[s]->satisfied(X.dense(inst, s))) return false;
  }
  return true;
}

ProbabilisticResult solve_probabilistic_cmip(const TwoStageInstance& inst) {
  inst.validate();
  auto by_var = incidence(inst);
  const std::size_t dhat = inst.delta_hat();
  ProbabilisticResult out;
  out.x = FirstStageMatrix::zeros(inst);
  out.steps_per_row.assign(inst.size(), 0);
  std::vector<std::size_t> offset(inst.size() + 1, 0);
  for (std::size_t s = 0; s < inst.size(); ++s) {
    offset[s + 1] = offset[s] + inst.rows[s]->entries().size();
  }
  out.trace.start.assign(offset.back(), 0.0);

  Point xs(inst.n(), 0.0);
  std::vector<double> rate(inst.n(), 0.0);
  double running = 0.0;
  for (std::size_t s = 0; s < inst.size(); ++s) {
    const CmipRow& row = *inst.rows[s];
    const auto& entries = row.entries();
    const std::size_t d = entries.size();
    auto& mine = out.x.values[s];
    std::vector<double> t(d), next(d);
    const std::size_t limit = 10 * d * (dhat + 2) + 10;
    while (!row.satisfied(xs)) {
      if (++out.steps_per_row[s] > limit) {
        fail(ErrorCode::kStepLimit, "probabilistic solve: step limit exceeded on row '" + row.id() + "'");
      }
      double beta_t = kUnbounded;
      for (std::size_t k = 0; k < d; ++k) {
        const std::size_t j = entries[k].var;
        double prob = inst.p[s];
        t[k] = kUnbounded;
        for (auto [r, pos] : by_var[j]) {
          ++out.ops;
          if (r == s) continue;
          double other = out.x.values[r][pos];
          if (other > mine[k]) {
            prob *= 1.0 - inst.p[r];
            t[k] = std::min(t[k], other);
          }
        }
        rate[j] = inst.w[s][k] + inst.c[j] * prob;
        // A free variable at its bound never moves, so its threshold is moot.
        bool stuck = rate[j] == 0.0 && CmipRow::saturated(entries[k], mine[k]);
        if (!is_unbounded(t[k]) && !stuck) beta_t = std::min(beta_t, (t[k] - mine[k]) * rate[j]);
      }
      out.ops += d;
      double beta = std::min(beta_t, cmip_stepsize(xs, row, rate).beta);

      StepRecord rec;
      rec.constraint = s;
      rec.constraint_id = row.id();
      rec.beta = beta;
      rec.cost_before = running;
      for (std::size_t k = 0; k < d; ++k) {
        const auto& e = entries[k];
        double old = mine[k];
        double v = old;
        if (rate[e.var] > 0.0) {
          v = old + beta / rate[e.var];
        } else if (!CmipRow::saturated(e, old)) {
          // A free raise stops where the rate may change or the row is met.
          v = std::min(row.raise_cap(xs, e.var), t[k]);
        }
        if (!is_unbounded(t[k]) && v >= t[k] - kEps) v = std::max(v, t[k]);
        if (e.integer) v = std::max(v, floor_eps(v));
        if (!is_unbounded(e.upper) && v >= e.upper - kEps) v = std::max(v, e.upper);
        next[k] = v;
      }
      bool moved = false;
      for (std::size_t k = 0; k < d; ++k) {
        if (next[k] <= mine[k]) continue;
        moved = true;
        const std::size_t j = entries[k].var;
        running += rate[j] * (next[k] - mine[k]);
        rec.raised.push_back({offset[s] + k, mine[k], next[k]});
        mine[k] = next[k];
        xs[j] = next[k];
      }
      if (!moved) {
        fail(ErrorCode::kPrecondition, "probabilistic solve: no progress on row '" + row.id() + "'");
      }
      rec.cost_after = running;
      out.trace.steps.push_back(std::move(rec));
    }
    for (const auto& e : entries) xs[e.var] = 0.0;
  }

  out.solution = out.x;
  for (std::size_t s = 0; s < inst.size(); ++s) {
    const auto& entries = inst.rows[s]->entries();
    for (std::size_t k = 0; k < entries.size(); ++k) {
      out.solution.values[s][k] = rounded(entries[k], out.x.values[s][k]);
    }
  }
  out.cost = expected_total_cost(inst, out.solution);
  for (std::size_t s = 0; s < inst.size(); ++s) {
    out.trace.final_x.insert(out.trace.final_x.end(), out.x.values[s].begin(), out.x.values[s].end());
    out.trace.final_mu.insert(out.trace.final_mu.end(), out.solution.values[s].begin(),
                              out.solution.values[s].end());
  }
  return out;
}

TwoStageOptimum two_stage_opt(const TwoStageInstance& inst, std::size_t limit) {
  inst.validate();
  // Feasible integer points of each row. Flooring and capping keep a point
  // feasible and never raise C, so these suffice.
  std::vector<std::vector<std::vector<double>>> choices(inst.size());
  double combos = 1.0;
  Point xs(inst.n(), 0.0);
  for (std::size_t s = 0; s < inst.size(); ++s) {
    const auto& entries = inst.rows[s]->entries();
    std::vector<double> cur(entries.size(), 0.0);
    for (const auto& e : entries) {
      if (!e.integer || is_unbounded(e.upper)) {
        fail(ErrorCode::kOracleUnavailable, "two_stage_opt needs integer variables with finite bounds");
      }
    }
    while (true) {
      for (std::size_t k = 0; k < entries.size(); ++k) xs[entries[k].var] = cur[k];
      if (inst.rows[s]->satisfied(xs)) choices[s].push_back(cur);
      std::size_t k = 0;
      while (k < entries.size() && (cur[k] += 1.0) > std::floor(entries[k].upper)) cur[k++] = 0.0;
      if (k == entries.size()) break;
    }
    for (const auto& e : entries) xs[e.var] = 0.0;
    if (choices[s].empty()) {
      throw InfeasibleError("row '" + inst.rows[s]->id() + "' cannot be satisfied",
                            static_cast<std::ptrdiff_t>(s));
    }
    combos *= double(choices[s].size());
    if (combos > double(limit)) fail(ErrorCode::kOracleUnavailable, "two_stage_opt: search space too large");
  }
  TwoStageOptimum best;
  FirstStageMatrix X = FirstStageMatrix::zeros(inst);
  std::vector<std::size_t> pick(inst.size(), 0);
  while (true) {
    for (std::size_t s = 0; s < inst.size(); ++s) X.values[s] = choices[s][pick[s]];
    double value = expected_total_cost(inst, X);
    if (value < best.cost) {
      best.cost = value;
      best.x = X;
    }
    std::size_t s = 0;
    while (s < inst.size() && ++pick[s] == choices[s].size()) pick[s++] = 0;
    if (s == inst.size()) break;
  }
  return best;
}

}  // namespace monocover
