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

#include "monocover/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

namespace monocover {

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double fit_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / double(xs.size());
  double my = std::accumulate(ys.begin(), ys.end(), 0.0) / double(ys.size());
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  return sxx > 0.0 ? sxy / sxx : 0.0;
}

}  // namespace

Instance random_cmip_instance(std::size_t n, std::size_t row_size, std::uint64_t seed) {
  if (n == 0 || row_size == 0 || row_size > n) {
    fail(ErrorCode::kInvalidArgument, "random_cmip_instance: need 1 <= row_size <= n");
  }
  std::mt19937_64 rng(seed);
  std::vector<char> integer(n);
  std::vector<double> upper(n), c(n);
  for (std::size_t j = 0; j < n; ++j) {
    integer[j] = rng() % 2;
    upper[j] = rng() % 3 == 0 ? kUnbounded : double(1 + rng() % 4);
    c[j] = double(1 + rng() % 10);
  }
  std::vector<ConstraintPtr> rows;
  rows.reserve(n);
  std::vector<std::size_t> pick;
  for (std::size_t i = 0; i < n; ++i) {
    pick.clear();
    while (pick.size() < row_size) {
      std::size_t j = rng() % n;
      if (std::find(pick.begin(), pick.end(), j) == pick.end()) pick.push_back(j);
    }
    std::vector<CmipEntry> entries;
    double reach = 0.0;
    for (std::size_t j : pick) {
      double a = double(1 + rng() % 10);
      entries.push_back({j, a, integer[j] != 0, upper[j]});
      reach += a * upper[j];
    }
    double b = std::min(double(1 + rng() % 30), reach);
    rows.push_back(std::make_shared<CmipRow>("r" + std::to_string(i), std::move(entries), b));
  }
  return Instance::continuous(CostModel::linear(std::move(c)), std::move(rows));
}

FacilityInstance random_facility_instance(std::size_t customers, std::size_t facilities,
                                          std::size_t degree, std::uint64_t seed) {
  if (degree == 0 || degree > facilities) {
    fail(ErrorCode::kInvalidArgument, "random_facility_instance: need 1 <= degree <= facilities");
  }
  std::mt19937_64 rng(seed);
  FacilityInstance inst;
  inst.opening.resize(facilities);
  for (double& f : inst.opening) f = double(1 + rng() % 20);
  inst.customers.resize(customers);
  for (auto& opts : inst.customers) {
    while (opts.size() < degree) {
      std::size_t f = rng() % facilities;
      bool seen = std::any_of(opts.begin(), opts.end(), [&](const auto& o) { return o.facility == f; });
      if (!seen) opts.push_back({f, double(rng() % 10)});
    }
  }
  return inst;
}

CounterFamilyReport cmip_counter_family(const std::vector<std::size_t>& sizes,
                                        std::size_t row_size, std::uint64_t seed) {
  CounterFamilyReport out;
  std::vector<double> lx, ly;
  for (std::size_t n : sizes) {
    Instance inst = random_cmip_instance(n, row_size, seed + n);
    auto t0 = std::chrono::steady_clock::now();
    CmipResult r = solve_cmip(inst, {CmipImpl::kHeap, false});
    CounterPoint p;
    p.seconds = seconds_since(t0);
    p.n = n;
    p.N = inst.total_deps();
    p.delta = inst.delta();
    p.ops = r.counters.total();
    p.steps = r.steps;
    double lg = std::max(1.0, std::log2(double(p.delta)));
    p.normalized = double(p.ops) / (double(p.N) * lg);
    out.C = std::max(out.C, p.normalized);
    lx.push_back(std::log(double(p.N)));
    ly.push_back(std::log(std::max(1.0, double(p.ops)) / lg));
    out.points.push_back(p);
  }
  if (lx.size() >= 2) {
    out.slope = fit_slope(lx, ly);
    for (std::size_t i = 1; i < lx.size(); ++i) {
      if (lx[i] > lx[i - 1]) {
        out.max_pair_slope = std::max(out.max_pair_slope, (ly[i] - ly[i - 1]) / (lx[i] - lx[i - 1]));
      }
    }
  }
  return out;
}

std::vector<FacilityCounterPoint> facility_counter_family(const std::vector<std::size_t>& sizes,
                                                          std::size_t degree, std::uint64_t seed) {
  std::vector<FacilityCounterPoint> out;
  for (std::size_t n : sizes) {
    std::size_t facilities = std::max(degree, n / 4);
    FacilityInstance inst = random_facility_instance(n, facilities, degree, seed + n);
    auto t0 = std::chrono::steady_clock::now();
    FacilityResult r = solve_facility_location(inst);
    FacilityCounterPoint p;
    p.seconds = seconds_since(t0);
    p.customers = n;
    p.facilities = facilities;
    p.pairs = n * degree;
    p.touches = r.touches;
    out.push_back(p);
  }
  return out;
}

}  // namespace monocover
