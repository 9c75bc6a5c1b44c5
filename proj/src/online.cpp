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

#include "monocover/online.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>
#include <string>
#include <unordered_map>

namespace monocover {

OnlineSession::OnlineSession(std::vector<Domain> domains, CostModel cost)
    : domains_(std::make_shared<const std::vector<Domain>>(std::move(domains))), cost_(std::move(cost)) {
  if (cost_.dimension() != domains_->size()) {
    fail(ErrorCode::kDimensionMismatch, "online session: cost and domains disagree on n");
  }
  x_.resize(n());
  for (std::size_t j = 0; j < n(); ++j) x_[j] = (*domains_)[j].min_value();
  trace_.start = x_;
  trace_.final_x = x_;
  trace_.final_mu = mu();
}

OnlineSession OnlineSession::continuous(CostModel cost) {
  std::vector<Domain> domains(cost.dimension(), Domain::reals());
  return OnlineSession(std::move(domains), std::move(cost));
}

double OnlineSession::cost() const { return cost_(mu()); }

Instance OnlineSession::instance() const { return Instance(*domains_, cost_, revealed_); }

std::size_t online_reveal(OnlineSession& session, ConstraintPtr S) {
  if (!S) fail(ErrorCode::kInvalidArgument, "online_reveal: null constraint");
  bool restricted = false;
  for (std::size_t j : S->deps()) {
    if (j >= session.n()) {
      fail(ErrorCode::kDimensionMismatch, "constraint '" + S->id() + "' uses an unknown variable");
    }
    if (!(*session.domains_)[j].unrestricted()) restricted = true;
  }
  ConstraintPtr eff = restricted ? std::make_shared<RoundedConstraint>(S, session.domains_) : S;
  const std::size_t index = session.revealed_.size();
  session.revealed_.push_back(S);
  std::size_t steps = 0;
  while (!eff->satisfied(session.x_)) {
    double beta;
    try {
      beta = minimal_beta(session.x_, *eff, session.cost_);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kUnbounded) throw;
      throw InfeasibleError("revealed constraint '" + S->id() + "' cannot be satisfied",
                            static_cast<std::ptrdiff_t>(index));
    }
    StepRecord rec = step(session.x_, *eff, session.cost_, beta, index);
    if (rec.raised.empty() || ++steps > 64) {
      fail(ErrorCode::kPrecondition, "online_reveal: no progress on '" + S->id() + "'");
    }
    session.trace_.steps.push_back(std::move(rec));
  }
  session.trace_.final_x = session.x_;
  session.trace_.final_mu = session.mu();
  return steps;
}

namespace {

double at(const std::vector<double>& v, std::size_t i) { return v.empty() ? 1.0 : v[i]; }

std::size_t page_count(const std::vector<std::size_t>& requests, const std::vector<double>& sizes,
                       const std::vector<double>& costs) {
  std::size_t pages = 0;
  for (std::size_t p : requests) pages = std::max(pages, p + 1);
  if ((!sizes.empty() && sizes.size() < pages) || (!costs.empty() && costs.size() < pages)) {
    fail(ErrorCode::kDimensionMismatch, "caching: sizes/costs must cover every requested page");
  }
  for (double s : sizes) {
    if (!(s > 0.0)) fail(ErrorCode::kInvalidArgument, "caching: sizes must be > 0");
  }
  for (double c : costs) {
    if (!(c >= 0.0) || std::isinf(c)) fail(ErrorCode::kInvalidArgument, "caching: costs must be >= 0");
  }
  return pages;
}

// Raises every listed x_s at rate 1/cost_s until the cheapest reaches 1.
// Returns the items that reached 1.
std::vector<std::size_t> unit_step(const std::vector<std::size_t>& others, std::vector<double>& x,
                                   const std::function<double(std::size_t)>& cost) {
  double beta = kUnbounded;
  for (std::size_t s : others) beta = std::min(beta, cost(s) * (1.0 - x[s]));
  std::vector<std::size_t> out;
  for (std::size_t s : others) {
    double c = cost(s);
    x[s] = c == 0.0 ? 1.0 : x[s] + beta / c;
    if (x[s] >= 1.0 - kEps) {
      x[s] = 1.0;
      out.push_back(s);
    }
  }
  return out;
}

template <typename Fn>
void for_submasks(std::uint32_t mask, Fn&& fn) {
  for (std::uint32_t e = mask;; e = (e - 1) & mask) {
    fn(e);
    if (e == 0) break;
  }
}

}  // namespace

CachingResult simulate_paging(const std::vector<std::size_t>& requests, double k,
                              const std::vector<double>& sizes, const std::vector<double>& costs) {
  const std::size_t pages = page_count(requests, sizes, costs);
  for (std::size_t p : requests) {
    if (at(sizes, p) > k + kEps) fail(ErrorCode::kInvalidArgument, "paging: a page does not fit in the cache");
  }
  CachingResult out;
  std::vector<char> cached(pages, 0);
  std::vector<double> x(pages, 0.0);
  double load = 0.0;
  auto cost = [&](std::size_t s) { return at(costs, s); };
  for (std::size_t t = 0; t < requests.size(); ++t) {
    const std::size_t p = requests[t];
    CacheEvent ev;
    ev.time = t;
    ev.hit = cached[p] != 0;
    x[p] = 0.0;
    if (!ev.hit) {
      cached[p] = 1;
      load += at(sizes, p);
      ++out.faults;
    }
    while (load > k + kEps) {
      std::vector<std::size_t> others;
      for (std::size_t s = 0; s < pages; ++s) {
        if (cached[s] && s != p) others.push_back(s);
      }
      out.delta = std::max(out.delta, others.size());
      ++out.steps;
      for (std::size_t s : unit_step(others, x, cost)) {
        cached[s] = 0;
        load -= at(sizes, s);
        ev.evicted.push_back(s);
        ev.charge += cost(s);
      }
    }
    out.cost += ev.charge;
    out.evictions += ev.evicted.size();
    out.events.push_back(std::move(ev));
  }
  return out;
}

OfflineCaching belady(const std::vector<std::size_t>& requests, std::size_t k) {
  if (k == 0) fail(ErrorCode::kInvalidArgument, "belady: k must be >= 1");
  OfflineCaching out;
  std::set<std::size_t> cache;
  for (std::size_t t = 0; t < requests.size(); ++t) {
    const std::size_t p = requests[t];
    if (cache.count(p)) continue;
    ++out.faults;
    if (cache.size() == k) {
      std::size_t victim = *cache.begin();
      std::size_t farthest = 0;
      for (std::size_t q : cache) {
        std::size_t next = requests.size();
        for (std::size_t u = t + 1; u < requests.size(); ++u) {
          if (requests[u] == q) {
            next = u;
            break;
          }
        }
        if (next > farthest) {
          farthest = next;
          victim = q;
        }
        if (next == requests.size()) break;
      }
      cache.erase(victim);
      ++out.evictions;
    }
    cache.insert(p);
  }
  out.cost = double(out.evictions);
  return out;
}

double caching_opt(const std::vector<std::size_t>& requests, double k,
                   const std::vector<double>& sizes, const std::vector<double>& costs) {
  page_count(requests, sizes, costs);
  std::map<std::size_t, std::size_t> index;
  std::vector<std::size_t> page_of;
  for (std::size_t p : requests) {
    if (index.emplace(p, page_of.size()).second) page_of.push_back(p);
  }
  if (page_of.size() > 16) fail(ErrorCode::kOracleUnavailable, "caching_opt: more than 16 distinct pages");
  auto load = [&](std::uint32_t mask) {
    double total = 0.0;
    for (std::size_t i = 0; i < page_of.size(); ++i) {
      if (mask >> i & 1u) total += at(sizes, page_of[i]);
    }
    return total;
  };
  auto price = [&](std::uint32_t mask) {
    double total = 0.0;
    for (std::size_t i = 0; i < page_of.size(); ++i) {
      if (mask >> i & 1u) total += at(costs, page_of[i]);
    }
    return total;
  };
  std::unordered_map<std::uint32_t, double> dp{{0u, 0.0}}, next;
  for (std::size_t p : requests) {
    const std::uint32_t bit = 1u << index[p];
    next.clear();
    for (auto [mask, c] : dp) {
      std::uint32_t m = mask | bit;
      for_submasks(m & ~bit, [&](std::uint32_t e) {
        std::uint32_t rem = m & ~e;
        if (load(rem) > k + kEps) return;
        double v = c + price(e);
        auto it = next.find(rem);
        if (it == next.end() || v < it->second) next[rem] = v;
      });
    }
    if (next.empty()) throw InfeasibleError("caching_opt: a page does not fit in the cache");
    dp.swap(next);
  }
  double best = kUnbounded;
  for (auto [mask, c] : dp) best = std::min(best, c);
  return best;
}

std::vector<std::pair<std::size_t, std::size_t>> distinct_connections(
    const std::vector<ConnectionRequest>& requests) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> seen;
  for (const auto& r : requests) {
    if (r.u == r.w) fail(ErrorCode::kInvalidArgument, "connection request joins a node to itself");
    if (!(r.cost >= 0.0) || std::isinf(r.cost)) {
      fail(ErrorCode::kInvalidArgument, "connection costs must be finite and >= 0");
    }
    auto key = std::minmax(r.u, r.w);
    if (seen.emplace(key, out.size()).second) out.push_back(key);
  }
  return out;
}

namespace {

std::vector<std::size_t> connection_ids(const std::vector<ConnectionRequest>& requests,
                                        const std::vector<std::pair<std::size_t, std::size_t>>& conns) {
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> id;
  for (std::size_t c = 0; c < conns.size(); ++c) id[conns[c]] = c;
  std::vector<std::size_t> out;
  for (const auto& r : requests) out.push_back(id[std::minmax(r.u, r.w)]);
  return out;
}

}  // namespace

CachingResult simulate_connection_caching(const std::vector<ConnectionRequest>& requests,
                                          std::size_t k) {
  if (k == 0) fail(ErrorCode::kInvalidArgument, "connection caching: k must be >= 1");
  auto conns = distinct_connections(requests);
  auto ids = connection_ids(requests, conns);
  CachingResult out;
  std::vector<char> active(conns.size(), 0);
  std::vector<double> x(conns.size(), 0.0), latest(conns.size(), 1.0);
  std::map<std::size_t, std::set<std::size_t>> at_node;
  auto cost = [&](std::size_t s) { return latest[s]; };
  for (std::size_t t = 0; t < requests.size(); ++t) {
    const std::size_t id = ids[t];
    CacheEvent ev;
    ev.time = t;
    ev.hit = active[id] != 0;
    latest[id] = requests[t].cost;
    x[id] = 0.0;
    if (!ev.hit) {
      active[id] = 1;
      at_node[conns[id].first].insert(id);
      at_node[conns[id].second].insert(id);
      ++out.faults;
    }
    for (std::size_t node : {requests[t].u, requests[t].w}) {
      auto& here = at_node[node];
      while (here.size() > k) {
        std::vector<std::size_t> others;
        for (std::size_t s : here) {
          if (s != id) others.push_back(s);
        }
        out.delta = std::max(out.delta, others.size());
        ++out.steps;
        for (std::size_t s : unit_step(others, x, cost)) {
          active[s] = 0;
          at_node[conns[s].first].erase(s);
          at_node[conns[s].second].erase(s);
          ev.evicted.push_back(s);
          ev.charge += cost(s);
        }
      }
    }
    out.cost += ev.charge;
    out.evictions += ev.evicted.size();
    out.events.push_back(std::move(ev));
  }
  return out;
}

double connection_caching_opt(const std::vector<ConnectionRequest>& requests, std::size_t k) {
  if (k == 0) fail(ErrorCode::kInvalidArgument, "connection caching: k must be >= 1");
  auto conns = distinct_connections(requests);
  if (conns.size() > 16) {
    fail(ErrorCode::kOracleUnavailable, "connection_caching_opt: more than 16 distinct connections");
  }
  auto ids = connection_ids(requests, conns);
  std::vector<double> latest(conns.size(), 1.0);
  auto fits = [&](std::uint32_t mask, std::size_t node) {
    std::size_t deg = 0;
    for (std::size_t c = 0; c < conns.size(); ++c) {
      if ((mask >> c & 1u) && (conns[c].first == node || conns[c].second == node)) ++deg;
    }
    return deg <= k;
  };
  std::unordered_map<std::uint32_t, double> dp{{0u, 0.0}}, next;
  for (std::size_t t = 0; t < requests.size(); ++t) {
    const std::uint32_t bit = 1u << ids[t];
    latest[ids[t]] = requests[t].cost;
    next.clear();
    for (auto [mask, c] : dp) {
      std::uint32_t m = mask | bit;
      for_submasks(m & ~bit, [&](std::uint32_t e) {
        std::uint32_t rem = m & ~e;
        if (!fits(rem, requests[t].u) || !fits(rem, requests[t].w)) return;
        double v = c;
        for (std::size_t s = 0; s < conns.size(); ++s) {
          if (e >> s & 1u) v += latest[s];
        }
        auto it = next.find(rem);
        if (it == next.end() || v < it->second) next[rem] = v;
      });
    }
    dp.swap(next);
  }
  double best = kUnbounded;
  for (auto [mask, c] : dp) best = std::min(best, c);
  return best;
}

void CacheTemplate::validate() const {
  if (upgrades.size() != d) fail(ErrorCode::kDimensionMismatch, "cache template: one upgrade per component");
  for (const auto& u : upgrades) {
    if (!(u.price > 0.0) || !(u.gain >= 0.0)) {
      fail(ErrorCode::kInvalidArgument, "cache template: prices must be > 0 and gains >= 0");
    }
  }
  if ((!sizes.empty() && sizes.size() != items) || (!evict_cost.empty() && evict_cost.size() != items) ||
      (!evict_floor.empty() && evict_floor.size() != items)) {
    fail(ErrorCode::kDimensionMismatch, "cache template: per-item vectors need one entry per item");
  }
  for (std::size_t r = 0; r < items; ++r) {
    if (!(size(r) > 0.0)) fail(ErrorCode::kInvalidArgument, "cache template: sizes must be > 0");
    double c = evict_cost.empty() ? 1.0 : evict_cost[r];
    if (!(c >= 0.0)) fail(ErrorCode::kInvalidArgument, "cache template: eviction costs must be >= 0");
    if (!evict_floor.empty() && !(evict_floor[r] >= 0.0 && evict_floor[r] <= c)) {
      fail(ErrorCode::kInvalidArgument, "cache template: floors must lie in [0, cost]");
    }
  }
  if (discount_rate < 0.0) fail(ErrorCode::kInvalidArgument, "cache template: negative discount rate");
  if (discount_rate > 0.0 && discount_component >= d) {
    fail(ErrorCode::kInvalidArgument, "cache template: discount component out of range");
  }
  if (kind == Kind::kCapacityThreshold && !conflicts.empty()) {
    fail(ErrorCode::kInvalidArgument, "cache template: conflicts need the conflict-pairs kind");
  }
  for (const auto& c : conflicts) {
    if (c.a >= items || c.b >= items || c.a == c.b || (c.component && *c.component >= d)) {
      fail(ErrorCode::kInvalidArgument, "cache template: bad conflict pair");
    }
  }
}

double CacheTemplate::capacity(std::span<const double> y) const {
  double cap = base_capacity;
  for (std::size_t i = 0; i < d; ++i) cap += upgrades[i].gain * floor_eps(y[i] / upgrades[i].price);
  return cap;
}

double CacheTemplate::cost(std::size_t r, std::span<const double> y) const {
  double c = evict_cost.empty() ? 1.0 : evict_cost[r];
  if (discount_rate == 0.0 || evict_floor.empty()) return c;
  return std::max(evict_floor[r], c - discount_rate * y[discount_component]);
}

bool CacheTemplate::cachable(std::span<const std::size_t> cached, std::span<const double> y) const {
  double load = 0.0;
  for (std::size_t r : cached) load += size(r);
  if (load > capacity(y) + kEps) return false;
  for (const auto& c : conflicts) {
    bool both = std::find(cached.begin(), cached.end(), c.a) != cached.end() &&
                std::find(cached.begin(), cached.end(), c.b) != cached.end();
    if (both && !(c.component && y[*c.component] >= c.unlock - kEps)) return false;
  }
  return true;
}

CacheModel CacheTemplate::model() const {
  validate();
  auto self = std::make_shared<const CacheTemplate>(*this);
  CacheModel m;
  m.d = d;
  m.cachable = [self](std::span<const std::size_t> q, std::span<const double> y, std::size_t) {
    return self->cachable(q, y);
  };
  m.cost = [self](std::size_t r, std::span<const double> y) { return self->cost(r, y); };
  m.time_to_cachable = [self](std::span<const std::size_t> q, std::span<const double> y,
                              std::size_t) {
    double need = 0.0;
    for (std::size_t r : q) need += self->size(r);
    double tau = 0.0;
    Point z(y.begin(), y.end());
    while (self->capacity(z) < need - kEps) {
      double step = kUnbounded;
      for (std::size_t i = 0; i < self->d; ++i) {
        const auto& u = self->upgrades[i];
        if (u.gain == 0.0) continue;
        step = std::min(step, u.price * (floor_eps(z[i] / u.price) + 1.0) - z[i]);
      }
      if (is_unbounded(step)) return kUnbounded;
      tau += step;
      for (std::size_t i = 0; i < self->d; ++i) z[i] = y[i] + tau;
    }
    for (const auto& c : self->conflicts) {
      bool both = std::find(q.begin(), q.end(), c.a) != q.end() && std::find(q.begin(), q.end(), c.b) != q.end();
      if (!both) continue;
      if (!c.component || is_unbounded(c.unlock)) return kUnbounded;
      tau = std::max(tau, c.unlock - y[*c.component]);
    }
    return tau;
  };
  m.time_to_evict = [self](std::size_t r, double x, std::span<const double> y) {
    double now = self->cost(r, y);
    if (x >= now - kEps) return 0.0;
    if (self->discount_rate == 0.0 || self->evict_floor.empty()) return now - x;
    double c = self->evict_cost.empty() ? 1.0 : self->evict_cost[r];
    double rate = self->discount_rate;
    double meet = (c - rate * y[self->discount_component] - x) / (1.0 + rate);
    return std::max({0.0, meet, self->evict_floor[r] - x});
  };
  return m;
}

std::vector<std::vector<double>> CacheTemplate::breakpoints() const {
  validate();
  std::vector<std::vector<double>> out(d, std::vector<double>{0.0});
  double total = 0.0;
  for (std::size_t r = 0; r < items; ++r) total += size(r);
  for (std::size_t i = 0; i < d; ++i) {
    const auto& u = upgrades[i];
    if (u.gain > 0.0) {
      double steps = std::ceil(std::max(0.0, total - base_capacity) / u.gain - kEps);
      for (double s = 1.0; s <= steps; s += 1.0) out[i].push_back(s * u.price);
    }
    for (const auto& c : conflicts) {
      if (c.component == i && !is_unbounded(c.unlock)) out[i].push_back(c.unlock);
    }
  }
  if (discount_rate > 0.0 && !evict_floor.empty()) {
    for (std::size_t r = 0; r < items; ++r) {
      double c = evict_cost.empty() ? 1.0 : evict_cost[r];
      out[discount_component].push_back((c - evict_floor[r]) / discount_rate);
    }
  }
  for (auto& v : out) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
  }
  return out;
}

namespace {

// Smallest tau in [0, inf) with pred(tau), for a predicate that is false
// then true. kUnbounded when it never turns true.
double first_true(const std::function<bool(double)>& pred) {
  if (pred(0.0)) return 0.0;
  double lo = 0.0, hi = 1.0;
  while (!pred(hi)) {
    lo = hi;
    hi *= 2.0;
    if (hi > 0x1p60) return kUnbounded;
  }
  for (int i = 0; i < 64; ++i) {
    double mid = lo + (hi - lo) / 2.0;
    if (mid <= lo || mid >= hi) break;
    (pred(mid) ? hi : lo) = mid;
  }
  return hi;
}

Point shifted(std::span<const double> y, double tau) {
  Point z(y.begin(), y.end());
  for (double& v : z) v += tau;
  return z;
}

}  // namespace

UpgradableResult simulate_upgradable_caching(const std::vector<std::size_t>& requests,
                                             const CacheModel& model) {
  if (!model.cachable || !model.cost) fail(ErrorCode::kInvalidArgument, "cache model needs cachable and cost");
  UpgradableResult out;
  out.y.assign(model.d, 0.0);
  std::size_t items = 0;
  for (std::size_t r : requests) items = std::max(items, r + 1);
  std::vector<double> x(items, 0.0);
  std::vector<std::size_t> cache;  // ascending

  auto time_to_cachable = [&](std::size_t t) {
    if (model.time_to_cachable) return model.time_to_cachable(cache, out.y, t);
    return first_true([&](double tau) { return model.cachable(cache, shifted(out.y, tau), t); });
  };
  auto time_to_evict = [&](std::size_t s) {
    if (model.time_to_evict) return model.time_to_evict(s, x[s], out.y);
    return first_true([&](double tau) { return x[s] + tau >= model.cost(s, shifted(out.y, tau)); });
  };
  auto evict_due = [&](std::size_t t, std::size_t keep) {
    for (std::size_t i = 0; i < cache.size();) {
      std::size_t s = cache[i];
      double c = model.cost(s, out.y);
      if (s != keep && x[s] >= c - kEps) {
        out.evictions.push_back({t, s, c});
        out.eviction_cost += c;
        cache.erase(cache.begin() + static_cast<std::ptrdiff_t>(i));
      } else {
        ++i;
      }
    }
  };

  for (std::size_t t = 0; t < requests.size(); ++t) {
    const std::size_t r = requests[t];
    x[r] = 0.0;
    evict_due(t, r);
    if (!std::binary_search(cache.begin(), cache.end(), r)) {
      cache.insert(std::upper_bound(cache.begin(), cache.end(), r), r);
    }
    while (!model.cachable(cache, out.y, t)) {
      const std::size_t others = cache.size() - 1;
      out.delta = std::max(out.delta, others + model.d);
      ++out.steps;
      double tau = time_to_cachable(t);
      std::vector<std::pair<std::size_t, double>> due;
      for (std::size_t s : cache) {
        if (s == r) continue;
        due.push_back({s, time_to_evict(s)});
        tau = std::min(tau, due.back().second);
      }
      if (is_unbounded(tau) || (others == 0 && model.d == 0)) {
        throw InfeasibleError("request " + std::to_string(t) + ": no upgrade or eviction makes the cache valid",
                              static_cast<std::ptrdiff_t>(t));
      }
      for (double& v : out.y) v += tau;
      for (std::size_t s : cache) {
        if (s != r) x[s] += tau;
      }
      // Bisected event times carry small errors; events this close count as ties.
      const double tie = 1e-8 * (1.0 + tau);
      for (auto [s, when] : due) {
        if (when <= tau + tie) x[s] = std::max(x[s], model.cost(s, out.y));
      }
      std::size_t before = cache.size();
      evict_due(t, r);
      if (tau == 0.0 && cache.size() == before && !model.cachable(cache, out.y, t)) {
        fail(ErrorCode::kPrecondition, "upgradable caching: no progress at request " + std::to_string(t));
      }
    }
    out.max_cached = std::max(out.max_cached, cache.size());
    out.cache_after.push_back(cache);
    std::vector<double> xs;
    for (std::size_t s : cache) xs.push_back(x[s]);
    out.x_after.push_back(std::move(xs));
  }
  out.total = out.eviction_cost;
  for (double v : out.y) out.total += v;
  return out;
}

double upgradable_opt(const std::vector<std::size_t>& requests, const CacheTemplate& tmpl) {
  tmpl.validate();
  std::map<std::size_t, std::size_t> index;
  std::vector<std::size_t> item_of;
  for (std::size_t r : requests) {
    if (r >= tmpl.items) fail(ErrorCode::kInvalidArgument, "upgradable_opt: request for an unknown item");
    if (index.emplace(r, item_of.size()).second) item_of.push_back(r);
  }
  if (item_of.size() > 16) fail(ErrorCode::kOracleUnavailable, "upgradable_opt: more than 16 distinct items");
  auto grid = tmpl.breakpoints();
  double grid_size = 1.0;
  for (const auto& g : grid) grid_size *= double(g.size());
  if (grid_size > 1e5) fail(ErrorCode::kOracleUnavailable, "upgradable_opt: configuration grid too large");

  double best = kUnbounded;
  std::vector<std::size_t> pick(tmpl.d, 0);
  Point y(tmpl.d, 0.0);
  std::vector<std::size_t> members;
  while (true) {
    double spend = 0.0;
    for (std::size_t i = 0; i < tmpl.d; ++i) spend += y[i] = grid[i][pick[i]];
    std::unordered_map<std::uint32_t, double> dp{{0u, 0.0}}, next;
    for (std::size_t t = 0; t < requests.size() && !dp.empty(); ++t) {
      const std::uint32_t bit = 1u << index[requests[t]];
      next.clear();
      for (auto [mask, c] : dp) {
        if (c + spend >= best) continue;
        std::uint32_t m = mask | bit;
        for_submasks(m & ~bit, [&](std::uint32_t e) {
          std::uint32_t rem = m & ~e;
          members.clear();
          double v = c;
          for (std::size_t i = 0; i < item_of.size(); ++i) {
            if (rem >> i & 1u) members.push_back(item_of[i]);
            if (e >> i & 1u) v += tmpl.cost(item_of[i], y);
          }
          if (!tmpl.cachable(members, y)) return;
          auto it = next.find(rem);
          if (it == next.end() || v < it->second) next[rem] = v;
        });
      }
      dp.swap(next);
    }
    for (auto [mask, c] : dp) best = std::min(best, c + spend);
    std::size_t i = 0;
    while (i < tmpl.d && ++pick[i] == grid[i].size()) pick[i++] = 0;
    if (i == tmpl.d) break;
  }
  if (is_unbounded(best)) throw InfeasibleError("upgradable_opt: no configuration serves the trace");
  return best;
}

CacheAudit audit_cache_model(const CacheModel& model, std::size_t items, std::size_t samples,
                             std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> spend(0.0, 10.0);
  CacheAudit out;
  for (std::size_t n = 0; n < samples; ++n) {
    std::vector<std::size_t> q, sub;
    for (std::size_t r = 0; r < items; ++r) {
      if (rng() % 2) {
        q.push_back(r);
        if (rng() % 2) sub.push_back(r);
      }
    }
    Point y(model.d), y2(model.d);
    for (std::size_t i = 0; i < model.d; ++i) {
      y[i] = spend(rng);
      y2[i] = y[i] + spend(rng);
    }
    bool ok = model.cachable(q, y, 0);
    out.checks += 2;
    if (ok && !model.cachable(q, y2, 0)) ++out.violations;
    if (ok && !model.cachable(sub, y, 0)) ++out.violations;
    for (std::size_t r = 0; r < items; ++r) {
      ++out.checks;
      if (model.cost(r, y2) > model.cost(r, y) + kEps) ++out.violations;
    }
  }
  return out;
}

std::vector<ConstraintPtr> build_segment_constraints(const std::vector<std::size_t>& sizes,
                                                     std::size_t k) {
  std::size_t total = 0;
  for (std::size_t s : sizes) {
    if (s == 0) fail(ErrorCode::kInvalidArgument, "segment sizes must be >= 1");
    total += s;
  }
  if (total <= k) return {};
  std::vector<FloorTerm> terms;
  for (std::size_t s = 0; s < sizes.size(); ++s) terms.push_back({s, 1.0, 1.0, double(sizes[s])});
  return {std::make_shared<FloorSumConstraint>("segments", std::move(terms), double(total - k))};
}

ConstraintPtr segment_choice_constraint(std::string id, const std::vector<std::size_t>& vars,
                                        const std::vector<double>& need) {
  if (vars.size() != need.size()) fail(ErrorCode::kDimensionMismatch, "segment choice: one need per file");
  std::vector<FloorTerm> terms;
  for (std::size_t s = 0; s < vars.size(); ++s) {
    if (!(need[s] > 0.0)) fail(ErrorCode::kInvalidArgument, "segment choice: needs must be > 0");
    terms.push_back({vars[s], 1.0, need[s], kUnbounded});
  }
  return std::make_shared<FloorSumConstraint>(std::move(id), std::move(terms), 1.0);
}

PiecewiseLinear segment_cost_curve(std::vector<double> segment_costs) {
  std::sort(segment_costs.begin(), segment_costs.end());
  PiecewiseLinear curve;
  curve.knots.push_back(0.0);
  curve.values.push_back(0.0);
  for (std::size_t i = 0; i < segment_costs.size(); ++i) {
    if (!(segment_costs[i] >= 0.0)) fail(ErrorCode::kInvalidArgument, "segment costs must be >= 0");
    curve.knots.push_back(double(i + 1));
    curve.values.push_back(curve.values.back() + segment_costs[i]);
  }
  curve.tail_slope = segment_costs.empty() ? 0.0 : segment_costs.back();
  return curve;
}

SegmentCachingResult simulate_segment_caching(const std::vector<std::size_t>& requests,
                                              const std::vector<std::size_t>& sizes,
                                              const std::vector<double>& costs, std::size_t k) {
  if (costs.size() != sizes.size()) fail(ErrorCode::kDimensionMismatch, "segments: one cost per file");
  std::vector<Domain> domains;
  std::vector<PiecewiseLinear> curves;
  for (std::size_t f : requests) {
    if (f >= sizes.size()) fail(ErrorCode::kInvalidArgument, "segments: unknown file");
    if (sizes[f] == 0) fail(ErrorCode::kInvalidArgument, "segment sizes must be >= 1");
    if (sizes[f] > k) fail(ErrorCode::kInvalidArgument, "segments: file larger than the cache");
    domains.push_back(Domain::grid(0.0, 1.0, double(sizes[f])));
    curves.push_back(segment_cost_curve(std::vector<double>(sizes[f], costs[f])));
  }
  OnlineSession session(domains, CostModel::separable(std::move(curves)));
  SegmentCachingResult out;
  std::map<std::size_t, std::size_t> latest;  // file -> request index
  for (std::size_t t = 0; t < requests.size(); ++t) {
    std::size_t f = requests[t];
    latest[f] = t;
    std::vector<FloorTerm> terms;
    double total = 0.0;
    for (auto [g, s] : latest) {
      total += double(sizes[g]);
      if (g != f) terms.push_back({s, 1.0, 1.0, double(sizes[g])});
    }
    if (total <= double(k)) continue;
    out.delta = std::max(out.delta, terms.size());
    auto S = std::make_shared<FloorSumConstraint>("t" + std::to_string(t), std::move(terms),
                                                  total - double(k));
    out.steps += online_reveal(session, S);
  }
  out.evicted = session.mu();
  out.cost = session.cost();
  out.domains = std::move(domains);
  out.cost_model = session.instance().cost();
  out.constraints = session.revealed();
  return out;
}

}  // namespace monocover
