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

#ifndef MONOCOVER_ONLINE_HPP_
#define MONOCOVER_ONLINE_HPP_

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "monocover/engine.hpp"
#include "monocover/instance.hpp"

namespace monocover {

// Constraints arrive one at a time; x only ever grows.
class OnlineSession {
 public:
  OnlineSession(std::vector<Domain> domains, CostModel cost);
  static OnlineSession continuous(CostModel cost);

  std::size_t n() const { return domains_->size(); }
  const Point& x() const { return x_; }
  Point mu() const { return mu_round(*domains_, x_); }
  // c(mu(x)) and c(x).
  double cost() const;
  double fractional_cost() const { return cost_(x_); }
  const std::vector<ConstraintPtr>& revealed() const { return revealed_; }
  const StepTrace& trace() const { return trace_; }
  // The instance revealed so far.
  Instance instance() const;

 private:
  friend std::size_t online_reveal(OnlineSession& session, ConstraintPtr S);

  std::shared_ptr<const std::vector<Domain>> domains_;
  CostModel cost_;
  Point x_;
  std::vector<ConstraintPtr> revealed_;
  StepTrace trace_;
};

// Steps with the minimal beta until x is in S. Returns the steps taken.
// Throws InfeasibleError when no raise of deps(S) satisfies S.
std::size_t online_reveal(OnlineSession& session, ConstraintPtr S);

// What happened on one request of a caching simulation.
struct CacheEvent {
  std::size_t time = 0;
  bool hit = false;
  std::vector<std::size_t> evicted;  // items (pages, connection ids)
  double charge = 0.0;               // eviction cost paid at this request
};

struct CachingResult {
  double cost = 0.0;  // total eviction cost
  std::size_t faults = 0;
  std::size_t evictions = 0;
  std::size_t steps = 0;
  // Max |Q - {r_t}| over the constraints actually enforced.
  std::size_t delta = 0;
  std::vector<CacheEvent> events;
};

// Paging and file caching over pages 0..P-1. The cache holds pages of total
// size <= k; the requested page always stays. On overflow every other cached
// page s is raised at rate 1/cost(s) until one reaches 1 and is evicted.
// Empty sizes/costs mean 1 for every page.
CachingResult simulate_paging(const std::vector<std::size_t>& requests, double k,
                              const std::vector<double>& sizes = {},
                              const std::vector<double>& costs = {});

struct OfflineCaching {
  double cost = 0.0;
  std::size_t faults = 0;
  std::size_t evictions = 0;
};
// Belady's farthest-in-future rule (unit sizes and costs).
OfflineCaching belady(const std::vector<std::size_t>& requests, std::size_t k);
// Exact optimum by dynamic programming over cache contents (at most 16
// distinct pages). Any subset may be evicted at any request.
double caching_opt(const std::vector<std::size_t>& requests, double k,
                   const std::vector<double>& sizes = {}, const std::vector<double>& costs = {});

struct ConnectionRequest {
  std::size_t u = 0;
  std::size_t w = 0;
  double cost = 1.0;  // cost of closing this connection before its next request
};

// Connection ids in CacheEvent::evicted index distinct_connections().
CachingResult simulate_connection_caching(const std::vector<ConnectionRequest>& requests,
                                          std::size_t k);
std::vector<std::pair<std::size_t, std::size_t>> distinct_connections(
    const std::vector<ConnectionRequest>& requests);
// Exact optimum by dynamic programming over the active sets (at most 16
// distinct connections).
double connection_caching_opt(const std::vector<ConnectionRequest>& requests, std::size_t k);

// Upgradable caching. `cachable` must be non-decreasing in y and
// non-increasing in the cached set; `cost` non-increasing in y.
struct CacheModel {
  std::size_t d = 0;
  std::function<bool(std::span<const std::size_t> cached, std::span<const double> y,
                     std::size_t t)>
      cachable;
  std::function<double(std::size_t item, std::span<const double> y)> cost;
  // Optional closed forms; bisection is used when empty.
  // Smallest tau >= 0 with cachable(cached, y + tau * 1, t), or kUnbounded.
  std::function<double(std::span<const std::size_t> cached, std::span<const double> y,
                       std::size_t t)>
      time_to_cachable;
  // Smallest tau >= 0 with x + tau >= cost(item, y + tau * 1).
  std::function<double(std::size_t item, double x, std::span<const double> y)> time_to_evict;
};

// The two shipped predicate templates.
struct CacheTemplate {
  enum class Kind { kCapacityThreshold, kConflictPairs };
  struct Upgrade {
    double price = 1.0;  // spend per capacity step
    double gain = 1.0;   // capacity per step
  };
  struct Conflict {
    std::size_t a = 0;
    std::size_t b = 0;
    // The pair may be cached together once y[component] >= unlock.
    std::optional<std::size_t> component;
    double unlock = kUnbounded;
  };

  Kind kind = Kind::kCapacityThreshold;
  std::size_t d = 0;
  std::size_t items = 0;
  std::vector<double> sizes;  // empty: 1 each
  // capacity(y) = base_capacity + sum_i gain_i * floor(y_i / price_i)
  double base_capacity = 1.0;
  std::vector<Upgrade> upgrades;  // one per component
  // cost(r, y) = max(evict_floor[r], evict_cost[r] - discount_rate * y[discount_component])
  std::vector<double> evict_cost;   // empty: 1 each
  std::vector<double> evict_floor;  // empty: no discount
  double discount_rate = 0.0;
  std::size_t discount_component = 0;
  std::vector<Conflict> conflicts;  // kConflictPairs only

  void validate() const;
  double size(std::size_t r) const { return sizes.empty() ? 1.0 : sizes[r]; }
  double capacity(std::span<const double> y) const;
  double cost(std::size_t r, std::span<const double> y) const;
  bool cachable(std::span<const std::size_t> cached, std::span<const double> y) const;
  CacheModel model() const;
  // Per-component spend levels where feasibility or a cost changes.
  std::vector<std::vector<double>> breakpoints() const;
};

struct Eviction {
  std::size_t time = 0;
  std::size_t item = 0;
  double charge = 0.0;  // cost(item, y) when evicted; never revised
};

struct UpgradableResult {
  Point y;
  std::vector<Eviction> evictions;
  double eviction_cost = 0.0;
  double total = 0.0;  // sum(y) + eviction_cost
  std::size_t delta = 0;  // max |Q - {r_t}| + d over enforced constraints
  std::size_t max_cached = 0;
  std::size_t steps = 0;
  // Cached items after each request.
  std::vector<std::vector<std::size_t>> cache_after;
  // x_s of every cached item after each request, parallel to cache_after.
  std::vector<std::vector<double>> x_after;
};

UpgradableResult simulate_upgradable_caching(const std::vector<std::size_t>& requests,
                                             const CacheModel& model);

// min over y of sum(y) + optimal caching cost at fixed y, with y drawn from
// the product of tmpl.breakpoints(); exact for the template's cost shape.
double upgradable_opt(const std::vector<std::size_t>& requests, const CacheTemplate& tmpl);

struct CacheAudit {
  std::size_t checks = 0;
  std::size_t violations = 0;
};
// Samples (Q, y, y' >= y) and Q' subset of Q and checks the monotonicity
// contract of `model` over items 0..items-1.
CacheAudit audit_cache_model(const CacheModel& model, std::size_t items, std::size_t samples,
                             std::uint64_t seed);

// Segment-level caching. x_s counts evicted segments of file s.
// sum_s (size_s - floor(x_s)) <= k over all files, or nothing when the files
// already fit.
std::vector<ConstraintPtr> build_segment_constraints(const std::vector<std::size_t>& sizes,
                                                     std::size_t k);
// sum_s floor(x_{vars[s]} / need[s]) >= 1: evict need[s] segments of some file.
ConstraintPtr segment_choice_constraint(std::string id, const std::vector<std::size_t>& vars,
                                        const std::vector<double>& need);
// Cost of retrieving the cheapest x segments of a file.
PiecewiseLinear segment_cost_curve(std::vector<double> segment_costs);

// Replays a file trace at segment granularity. Request t gets its own
// variable x_t (evicted segments of that copy, domain {0..size}); on each
// request the most recent copy of every other file is constrained by
// sum (size_s - floor(x_s)) <= k - size(r_t). Every segment of file f costs
// costs[f] to retrieve.
struct SegmentCachingResult {
  std::vector<double> evicted;  // mu(x_t) per request
  double cost = 0.0;
  std::size_t steps = 0;
  std::size_t delta = 0;  // max files per enforced constraint
  std::vector<Domain> domains;
  CostModel cost_model;
  std::vector<ConstraintPtr> constraints;
  Instance instance() const { return Instance(domains, cost_model, constraints); }
};
SegmentCachingResult simulate_segment_caching(const std::vector<std::size_t>& requests,
                                              const std::vector<std::size_t>& sizes,
                                              const std::vector<double>& costs, std::size_t k);

}  // namespace monocover

#endif  // MONOCOVER_ONLINE_HPP_
