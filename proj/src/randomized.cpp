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

#include "monocover/randomized.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "monocover/oracle.hpp"

namespace monocover {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

namespace {

std::mt19937_64 seeded(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t state = seed;
  std::uint64_t a = splitmix64(state);
  state ^= stream * 0xd1b54a32d192ed03ULL;
  std::uint64_t b = splitmix64(state);
  std::seed_seq seq{std::uint32_t(a), std::uint32_t(a >> 32), std::uint32_t(b), std::uint32_t(b >> 32)};
  return std::mt19937_64(seq);
}

void check_plan(const Constraint& S, const RandomStepPlan& plan) {
  const std::size_t m = S.deps().size();
  if (plan.p.size() != m) fail(ErrorCode::kDimensionMismatch, "rstep: one probability per dependency");
  if (!plan.targets.empty() && plan.targets.size() != m) {
    fail(ErrorCode::kDimensionMismatch, "rstep: one target per dependency");
  }
  if (!(plan.beta >= 0.0) || std::isinf(plan.beta)) {
    fail(ErrorCode::kInvalidArgument, "rstep: beta must be finite and >= 0");
  }
  double total = 0.0;
  for (double p : plan.p) {
    if (!(p >= 0.0 && p <= 1.0)) {
      fail(ErrorCode::kInvalidArgument, "rstep: probability outside [0, 1]: " + std::to_string(p));
    }
    total += p;
  }
  if (plan.correlation == Correlation::kSinglePick && total > 1.0 + 1e-12) {
    fail(ErrorCode::kInvalidArgument, "rstep: single pick needs probabilities summing to at most 1");
  }
}

}  // namespace

Rng::Rng(std::uint64_t seed, std::uint64_t stream)
    : seed_(seed), stream_(stream), engine_(seeded(seed, stream)) {}

std::vector<double> rstep_targets(std::span<const double> x, const Constraint& S,
                                  const CostModel& cost, const RandomStepPlan& plan) {
  check_plan(S, plan);
  if (!plan.targets.empty()) return plan.targets;
  std::vector<double> out;
  for (std::size_t k = 0; k < S.deps().size(); ++k) {
    const std::size_t j = S.deps()[k];
    if (plan.p[k] == 0.0) {
      out.push_back(x[j]);
      continue;
    }
    double v = cost->raise_limit(x, j, plan.beta / plan.p[k]);
    if (is_unbounded(v)) {
      v = S.raise_cap(x, j);
      if (is_unbounded(v)) {
        fail(ErrorCode::kUnbounded, "rstep: free raise of x[" + std::to_string(j) + "] has no finite clamp");
      }
    }
    out.push_back(std::max(x[j], v));
  }
  return out;
}

StepRecord rstep(Point& x, const Constraint& S, const CostModel& cost, const RandomStepPlan& plan,
                 Rng& rng, std::size_t index) {
  if (S.satisfied(x)) fail(ErrorCode::kPrecondition, "rstep: x already satisfies '" + S.id() + "'");
  std::vector<double> X = rstep_targets(x, S, cost, plan);
  const auto& deps = S.deps();
  std::vector<char> take(deps.size(), 0);
  if (plan.correlation == Correlation::kIndependent) {
    for (std::size_t k = 0; k < deps.size(); ++k) take[k] = rng.bernoulli(plan.p[k]);
  } else {
    double u = rng.uniform(), acc = 0.0;
    for (std::size_t k = 0; k < deps.size(); ++k) {
      acc += plan.p[k];
      if (u < acc) {
        take[k] = 1;
        break;
      }
    }
  }
  StepRecord rec;
  rec.constraint = index;
  rec.constraint_id = S.id();
  rec.beta = plan.beta;
  rec.cost_before = cost(x);
  for (std::size_t k = 0; k < deps.size(); ++k) {
    const std::size_t j = deps[k];
    if (take[k] && X[k] > x[j]) {
      rec.raised.push_back({j, x[j], X[k]});
      x[j] = X[k];
    }
  }
  rec.cost_after = cost(x);
  return rec;
}

StatelessPlan stateless_plan(std::span<const double> x, const Constraint& S, const CostModel& cost,
                             const std::vector<Domain>& domains, Correlation correlation) {
  StatelessPlan out;
  const auto& deps = S.deps();
  const double base = cost(x);
  Point y(x.begin(), x.end());
  bool any_free = false, any = false;
  for (std::size_t j : deps) {
    if (j >= domains.size()) fail(ErrorCode::kDimensionMismatch, "stateless_rstep: missing domain");
    auto nx = domains[j].next_above(x[j]);
    double X = nx ? *nx : x[j];
    double a = kUnbounded;
    if (X > x[j]) {
      y[j] = X;
      a = std::max(0.0, cost(y) - base);
      y[j] = x[j];
      any = true;
      any_free = any_free || a == 0.0;
    }
    out.next.push_back(X);
    out.alpha.push_back(a);
  }
  if (!any) {
    throw InfeasibleError("stateless_rstep: no dependency of '" + S.id() + "' can move within its domain");
  }
  out.step.targets = out.next;
  out.step.correlation = correlation;
  if (any_free) {
    out.step.beta = 0.0;
    out.step.correlation = Correlation::kIndependent;
    for (double a : out.alpha) out.step.p.push_back(a == 0.0 ? 1.0 : 0.0);
    return out;
  }
  double beta = kUnbounded;
  if (correlation == Correlation::kIndependent) {
    for (double a : out.alpha) beta = std::min(beta, a);
  } else {
    double inv = 0.0;
    for (double a : out.alpha) {
      if (!is_unbounded(a)) inv += 1.0 / a;
    }
    beta = 1.0 / inv;
  }
  out.step.beta = beta;
  for (double a : out.alpha) out.step.p.push_back(is_unbounded(a) ? 0.0 : std::min(1.0, beta / a));
  return out;
}

StepRecord stateless_rstep(Point& x, const Constraint& S, const CostModel& cost,
                           const std::vector<Domain>& domains, Rng& rng, Correlation correlation,
                           std::size_t index) {
  if (S.satisfied(x)) fail(ErrorCode::kPrecondition, "stateless_rstep: x already satisfies '" + S.id() + "'");
  for (std::size_t j : S.deps()) {
    if (j < domains.size() && !domains[j].contains(x[j])) {
      fail(ErrorCode::kPrecondition, "stateless_rstep: x[" + std::to_string(j) + "] is outside its domain");
    }
  }
  StatelessPlan plan = stateless_plan(x, S, cost, domains, correlation);
  return rstep(x, S, cost, plan.step, rng, index);
}

const char* variant_name(RandomVariant v) {
  return v == RandomVariant::kRstep ? "rstep" : "stateless";
}

RandomizedResult randomized_solve(const Instance& inst, const RandomizedOptions& options, Rng& rng) {
  RandomizedResult out;
  out.seed = rng.seed();
  out.stream = rng.stream();
  const bool stateless = options.variant == RandomVariant::kStateless;
  Point x = inst.start();
  out.trace.start = x;

  if (stateless) {
    for (std::size_t j = 0; j < inst.n(); ++j) {
      if (inst.domains()[j].kind() == Domain::Kind::kReals) {
        fail(ErrorCode::kUnsupported, "randomized_solve: the stateless variant needs discrete domains (x[" +
                                          std::to_string(j) + "] ranges over the reals)");
      }
    }
  }
  std::vector<double> p = options.p;
  std::optional<CostModel> scaled;
  if (!stateless) {
    if (p.empty()) p.assign(inst.n(), 1.0);
    if (p.size() != inst.n()) fail(ErrorCode::kDimensionMismatch, "randomized_solve: one probability per variable");
    for (double v : p) {
      if (!(v > 0.0 && v <= 1.0)) fail(ErrorCode::kInvalidArgument, "randomized_solve: probabilities must lie in (0, 1]");
    }
    if (!options.beta) {
      const auto* c = inst.cost().linear_coefficients();
      bool ones = std::all_of(p.begin(), p.end(), [](double v) { return v == 1.0; });
      if (!c && !ones) {
        fail(ErrorCode::kInvalidArgument,
             "randomized_solve: non-linear costs with p < 1 need a caller-supplied beta");
      }
      if (c) {
        std::vector<double> cp(c->size());
        for (std::size_t j = 0; j < cp.size(); ++j) cp[j] = p[j] * (*c)[j];
        scaled = CostModel::linear(std::move(cp));
      }
    }
  }

  std::size_t limit = options.max_steps ? options.max_steps : 1000 * (inst.total_deps() + inst.n());
  for (std::size_t i = 0; i < inst.size(); ++i) {
    const Constraint& S = stateless ? inst.constraint(i) : inst.effective(i);
    while (!S.satisfied(x)) {
      if (out.trace.steps.size() >= limit) {
        out.trace.final_x = x;
        out.trace.final_mu = inst.mu(x);
        throw StepLimitError("randomized_solve: step limit reached", out.trace);
      }
      StepRecord rec;
      if (stateless) {
        rec = stateless_rstep(x, S, inst.cost(), inst.domains(), rng, options.correlation, i);
      } else {
        RandomStepPlan plan;
        plan.correlation = options.correlation;
        for (std::size_t j : S.deps()) plan.p.push_back(p[j]);
        try {
          plan.beta = options.beta ? options.beta(inst, i, x)
                                   : minimal_beta(x, S, scaled ? *scaled : inst.cost());
        } catch (const Error& e) {
          if (e.code() != ErrorCode::kUnbounded) throw;
          throw InfeasibleError("constraint '" + S.id() + "' cannot be satisfied",
                                static_cast<std::ptrdiff_t>(i));
        }
        rec = rstep(x, S, inst.cost(), plan, rng, i);
      }
      out.trace.steps.push_back(std::move(rec));
    }
  }
  out.x = x;
  out.mu = inst.mu(x);
  out.cost = inst.cost()(out.mu);
  out.trace.final_x = out.x;
  out.trace.final_mu = out.mu;
  return out;
}

MonteCarloReport montecarlo_ratio(const Instance& inst, const RandomizedOptions& options,
                                  std::size_t trials, std::uint64_t seed, std::optional<double> opt) {
  if (trials == 0) fail(ErrorCode::kInvalidArgument, "montecarlo_ratio: trials must be >= 1");
  MonteCarloReport out;
  out.variant = options.variant;
  out.trials = trials;
  out.seed = seed;
  out.delta = inst.delta();
  if (opt) {
    out.opt = *opt;
  } else {
    auto o = exact_opt(inst);
    if (!o.feasible) throw InfeasibleError("montecarlo_ratio: instance is infeasible");
    if (!o.exact) fail(ErrorCode::kOracleUnavailable, "montecarlo_ratio: oracle could not certify OPT");
    out.opt = o.value;
  }
  double mean = 0.0, m2 = 0.0;
  out.min_cost = kUnbounded;
  out.max_cost = 0.0;
  for (std::size_t t = 0; t < trials; ++t) {
    Rng rng(seed, t);
    double c = randomized_solve(inst, options, rng).cost;
    const double d = c - mean;
    mean += d / double(t + 1);
    m2 += d * (c - mean);
    out.min_cost = std::min(out.min_cost, c);
    out.max_cost = std::max(out.max_cost, c);
  }
  const double n = double(trials);
  out.mean = mean;
  out.standard_error = trials > 1 ? std::sqrt(m2 / (n - 1.0) / n) : 0.0;
  out.ratio = out.opt > 0.0 ? out.mean / out.opt : (out.mean > 0.0 ? kUnbounded : 1.0);
  out.within_bound = out.mean <= double(out.delta) * out.opt + 3.0 * out.standard_error + 1e-9;
  return out;
}

}  // namespace monocover
