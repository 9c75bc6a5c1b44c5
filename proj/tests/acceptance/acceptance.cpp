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

// Acceptance run: one line per criterion, exit status 1 if any fails.
//
// Expected values come from exhaustive searches written here, independent of
// the library oracles, or from the library oracle cross-checked against them.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "monocover/bench.hpp"
#include "monocover/classic.hpp"
#include "monocover/cmip.hpp"
#include "monocover/engine.hpp"
#include "monocover/io.hpp"
#include "monocover/local_ratio.hpp"
#include "monocover/online.hpp"
#include "monocover/oracle.hpp"
#include "monocover/probabilistic.hpp"
#include "monocover/randomized.hpp"

#ifndef MONOCOVER_FIXTURE_DIR
#define MONOCOVER_FIXTURE_DIR "fixtures"
#endif

using namespace monocover;

namespace {

using Clock = std::chrono::steady_clock;
using Rng64 = std::mt19937_64;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  void require(bool ok, const std::string& why) {
    if (!ok && pass) {
      pass = false;
      detail << "[first failure: " << why << "] ";
    }
  }
};

std::string str(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

StepSizePolicy cycle_policy(std::size_t i) {
  switch (i % 3) {
    case 0: return StepSizePolicy::minimal();
    case 1: return StepSizePolicy::structural();
    default: return StepSizePolicy::maximal();
  }
}

ConstraintPtr cover_edge(std::size_t u, std::size_t w) {
  return std::make_shared<FloorSumConstraint>(
      "e" + std::to_string(u) + "_" + std::to_string(w),
      std::vector<FloorTerm>{{u, 1.0, 1.0, kUnbounded}, {w, 1.0, 1.0, kUnbounded}}, 1.0);
}

// ------------------------------------------------------------ generators

Graph random_graph(Rng64& rng, std::size_t max_n) {
  Graph g;
  g.n = 2 + rng() % (max_n - 1);
  double density = 0.15 + 0.1 * double(rng() % 4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (std::size_t a = 0; a < g.n; ++a) {
    for (std::size_t b = a + 1; b < g.n; ++b) {
      if (u(rng) < density) g.edges.push_back({a, b});
    }
  }
  if (g.edges.empty()) g.edges.push_back({0, 1});
  for (std::size_t v = 0; v < g.n; ++v) g.weights.push_back(double(1 + rng() % 5));
  return g;
}

Instance binary_vertex_cover(const Graph& g) {
  std::vector<ConstraintPtr> cs;
  for (auto [u, w] : g.edges) cs.push_back(cover_edge(u, w));
  std::vector<double> c(g.n);
  for (std::size_t v = 0; v < g.n; ++v) c[v] = g.weight(v);
  return Instance(std::vector<Domain>(g.n, Domain::binary()), CostModel::linear(c), cs);
}

double brute_vertex_cover(const Graph& g) {
  double best = kUnbounded;
  for (std::uint32_t m = 0; m < (1u << g.n); ++m) {
    bool ok = std::all_of(g.edges.begin(), g.edges.end(),
                          [&](auto e) { return (m >> e.first & 1u) || (m >> e.second & 1u); });
    if (!ok) continue;
    double c = 0.0;
    for (std::size_t v = 0; v < g.n; ++v) c += (m >> v & 1u) ? g.weight(v) : 0.0;
    best = std::min(best, c);
  }
  return best;
}

SetCoverInstance random_set_cover(Rng64& rng) {
  SetCoverInstance sc;
  std::size_t sets = 1 + rng() % 12;
  std::size_t elements = 1 + rng() % 10;
  for (std::size_t s = 0; s < sets; ++s) sc.weights.push_back(double(1 + rng() % 6));
  for (std::size_t e = 0; e < elements; ++e) {
    std::size_t k = 1 + rng() % std::min<std::size_t>(3, sets);
    std::set<std::size_t> pick;
    while (pick.size() < k) pick.insert(rng() % sets);
    sc.element_sets.push_back({pick.begin(), pick.end()});
  }
  return sc;
}

Instance binary_set_cover(const SetCoverInstance& sc) {
  Instance base = set_cover_to_instance(sc);
  return Instance(std::vector<Domain>(base.n(), Domain::binary()), base.cost(), base.constraints());
}

double brute_set_cover(const SetCoverInstance& sc) {
  double best = kUnbounded;
  std::size_t n = sc.weights.size();
  for (std::uint32_t m = 0; m < (1u << n); ++m) {
    bool ok = std::all_of(sc.element_sets.begin(), sc.element_sets.end(), [&](const auto& es) {
      return std::any_of(es.begin(), es.end(), [&](std::size_t s) { return (m >> s & 1u) != 0; });
    });
    if (!ok) continue;
    double c = 0.0;
    for (std::size_t s = 0; s < n; ++s) c += (m >> s & 1u) ? sc.weights[s] : 0.0;
    best = std::min(best, c);
  }
  return best;
}

FacilityInstance random_facility(Rng64& rng) {
  FacilityInstance f;
  std::size_t fac = 1 + rng() % 4;
  std::size_t cust = 1 + rng() % 6;
  for (std::size_t i = 0; i < fac; ++i) f.opening.push_back(double(1 + rng() % 8));
  for (std::size_t c = 0; c < cust; ++c) {
    std::vector<FacilityInstance::Option> opts;
    for (std::size_t i = 0; i < fac; ++i) {
      if (rng() % 2) opts.push_back({i, double(rng() % 6)});
    }
    if (opts.empty()) opts.push_back({rng() % fac, double(rng() % 6)});
    f.customers.push_back(opts);
  }
  return f;
}

// Every assignment of customers to eligible facilities.
double brute_facility(const FacilityInstance& f) {
  double best = kUnbounded;
  std::vector<std::size_t> pick(f.customers.size(), 0);
  std::function<void(std::size_t)> rec = [&](std::size_t c) {
    if (c == f.customers.size()) {
      std::set<std::size_t> open;
      double cost = 0.0;
      for (std::size_t i = 0; i < pick.size(); ++i) {
        const auto& o = f.customers[i][pick[i]];
        cost += o.cost;
        open.insert(o.facility);
      }
      for (std::size_t i : open) cost += f.opening[i];
      best = std::min(best, cost);
      return;
    }
    for (std::size_t k = 0; k < f.customers[c].size(); ++k) {
      pick[c] = k;
      rec(c + 1);
    }
  };
  rec(0);
  return best;
}

struct CmipCase {
  Instance instance;
  bool all_integer = true;
};

CmipCase random_cmip(Rng64& rng, std::size_t max_n, std::size_t max_m) {
  std::size_t n = 1 + rng() % max_n;
  std::size_t m = 1 + rng() % max_m;
  std::vector<char> integer(n);
  std::vector<double> upper(n), c(n);
  bool all_integer = true;
  for (std::size_t j = 0; j < n; ++j) {
    integer[j] = rng() % 4 != 0;
    all_integer = all_integer && integer[j];
    upper[j] = rng() % 4 == 0 ? kUnbounded : double(1 + rng() % 3);
    c[j] = double(rng() % 6);
  }
  std::vector<ConstraintPtr> rows;
  for (std::size_t i = 0; i < m; ++i) {
    std::vector<std::size_t> pool(n);
    for (std::size_t j = 0; j < n; ++j) pool[j] = j;
    std::shuffle(pool.begin(), pool.end(), rng);
    std::size_t k = 1 + rng() % std::min<std::size_t>(n, 4);
    std::vector<CmipEntry> entries;
    double reach = 0.0;
    for (std::size_t t = 0; t < k; ++t) {
      double a = double(1 + rng() % 5);
      entries.push_back({pool[t], a, integer[pool[t]] != 0, upper[pool[t]]});
      reach += a * upper[pool[t]];
    }
    double b = std::min(double(1 + rng() % 10), reach);
    rows.push_back(std::make_shared<CmipRow>("r" + std::to_string(i), std::move(entries), b));
  }
  return {Instance::continuous(CostModel::linear(c), rows), all_integer};
}

// Pure-integer CMIP by enumeration; nullopt when the box is too large.
std::optional<double> brute_integer_cmip(const Instance& inst) {
  std::size_t n = inst.n();
  std::vector<double> top(n, 0.0);
  for (const auto& S : inst.constraints()) {
    const auto& row = static_cast<const CmipRow&>(*S);
    for (const auto& e : row.entries()) {
      double need = std::ceil(std::max(0.0, row.b()) / e.coeff);
      top[e.var] = std::max(top[e.var], std::min(e.upper, need));
    }
  }
  double box = 1.0;
  for (double t : top) box *= t + 1.0;
  if (box > 2e5) return std::nullopt;
  const auto& c = *inst.cost().linear_coefficients();
  Point x(n, 0.0);
  double best = kUnbounded;
  std::function<void(std::size_t, double)> rec = [&](std::size_t j, double cost) {
    if (cost >= best) return;
    if (j == n) {
      for (const auto& S : inst.constraints()) {
        const auto& row = static_cast<const CmipRow&>(*S);
        double lhs = 0.0;
        for (const auto& e : row.entries()) lhs += e.coeff * x[e.var];
        if (lhs < row.b() - 1e-9) return;
      }
      best = cost;
      return;
    }
    for (double v = 0.0; v <= top[j]; v += 1.0) {
      x[j] = v;
      rec(j + 1, cost + c[j] * v);
    }
    x[j] = 0.0;
  };
  rec(0, 0.0);
  return best;
}

// ------------------------------------------------------------ 1

Outcome criterion1() {
  Outcome o;
  auto t0 = Clock::now();
  auto S = std::make_shared<CmipRow>("s", std::vector<CmipEntry>{{0, 1.0, false, kUnbounded}, {1, 1.0, false, kUnbounded}},
                                     1.0);
  Point x{0.0, 0.0};
  step(x, *S, CostModel::linear({1.0, 2.0}), 1.0);
  double ms = ms_since(t0);
  o.require(x[0] == 1.0 && x[1] == 0.5, "x = (" + str(x[0]) + ", " + str(x[1]) + ")");
  o.require(ms < 1.0, "took " + str(ms) + " ms");
  o.detail << "x = (" << str(x[0]) << ", " << str(x[1]) << "), " << str(ms) << " ms";
  return o;
}

// ------------------------------------------------------------ 2

Outcome criterion2() {
  Outcome o;
  auto row = [](std::string id, std::size_t j, double b) {
    return std::make_shared<CmipRow>(std::move(id),
                                     std::vector<CmipEntry>{{0, 1.0, false, kUnbounded}, {j, 1.0, false, kUnbounded}}, b);
  };
  Instance inst = Instance::continuous(CostModel::linear({1.0, 1.0, 1.0}), {row("s", 1, 1.0), row("t", 2, 2.0)});
  double worst_ms = 0.0;
  for (auto perm : {std::vector<std::size_t>{0, 1}, std::vector<std::size_t>{1, 0}}) {
    SolveOptions opts;
    opts.policy = StepSizePolicy::maximal();
    opts.order = ConstraintOrder::kSequential;
    opts.permutation = perm;
    auto t0 = Clock::now();
    SolveResult r = solve(inst, opts);
    worst_ms = std::max(worst_ms, ms_since(t0));
    o.require(r.cost == 4.0, "order " + std::to_string(perm[0]) + ": cost " + str(r.cost));
  }
  auto t0 = Clock::now();
  OracleResult opt = exact_opt(inst);
  double oracle_ms = ms_since(t0);
  // Test-side check of OPT: x1 = 2 alone covers both rows, and any cover
  // pays x1 + x3 >= 2.
  o.require(opt.value == 2.0, "oracle OPT " + str(opt.value));
  o.require(4.0 / opt.value == double(inst.delta()), "ratio differs from delta");
  o.require(worst_ms < 1.0, "greedy took " + str(worst_ms) + " ms");
  o.detail << "cost 4 in both orders, OPT " << str(opt.value) << ", ratio " << str(4.0 / opt.value)
           << " = delta; greedy " << str(worst_ms) << " ms, oracle " << str(oracle_ms) << " ms";
  return o;
}

// ------------------------------------------------------------ 3 and 4

struct FamilyCase {
  std::string family;
  Instance instance;
  StepTrace trace;  // a greedy run on `instance`
  double greedy = 0.0;
  double opt = 0.0;
  bool binary = false;
};

struct Families {
  std::vector<FamilyCase> cases;
  std::map<std::string, std::size_t> count, violations, oracle_mismatch;
  std::map<std::string, double> worst_ratio;
  double seconds = 0.0;
};

void record(Families& F, const std::string& fam, double cost, double opt, std::size_t delta) {
  ++F.count[fam];
  if (cost > double(delta) * opt + 1e-9) ++F.violations[fam];
  double ratio = opt > 0.0 ? cost / opt : (cost > 1e-12 ? kUnbounded : 1.0);
  F.worst_ratio[fam] = std::max(F.worst_ratio[fam], ratio / double(std::max<std::size_t>(delta, 1)));
}

Families build_families(std::size_t per_family) {
  Families F;
  auto t0 = Clock::now();
  Rng64 rng(20260101);
  for (std::size_t i = 0; i < per_family; ++i) {
    Graph g = random_graph(rng, 16);
    VertexCoverResult r = solve_vertex_cover(g, cycle_policy(i));
    Instance inst = vertex_cover_to_instance(g);
    double opt = exact_opt(inst).value;
    if (opt != brute_vertex_cover(g)) ++F.oracle_mismatch["vertex cover"];
    record(F, "vertex cover", r.cost, opt, inst.delta());
    F.cases.push_back({"vertex cover", inst, r.run.trace, r.cost, opt, false});
  }
  for (std::size_t i = 0; i < per_family; ++i) {
    SetCoverInstance sc = random_set_cover(rng);
    Instance inst = binary_set_cover(sc);
    double opt = exact_opt(inst).value;
    if (opt != brute_set_cover(sc)) ++F.oracle_mismatch["set cover"];
    SetCoverResult fast = solve_set_cover(sc);
    record(F, "set cover", fast.cost, opt, inst.delta());
    SolveOptions so;
    so.policy = cycle_policy(i);
    SolveResult r = solve(inst, so);
    record(F, "set cover", r.cost, opt, inst.delta());
    F.cases.push_back({"set cover", inst, r.trace, r.cost, opt, true});
  }
  for (std::size_t i = 0; i < per_family; ++i) {
    FacilityInstance fl = random_facility(rng);
    Instance inst = facility_to_instance(fl);
    double opt = exact_opt(inst).value;
    double brute = brute_facility(fl);
    if (std::abs(opt - brute) > 1e-9 || std::abs(facility_opt(fl).cost - brute) > 1e-9) {
      ++F.oracle_mismatch["facility location"];
    }
    FacilityResult fast = solve_facility_location(fl);
    record(F, "facility location", fast.cost, opt, inst.delta());
    SolveOptions so;
    so.policy = cycle_policy(i);
    SolveResult r = solve(inst, so);
    record(F, "facility location", r.cost, opt, inst.delta());
    F.cases.push_back({"facility location", inst, fast.trace, fast.cost, opt, false});
  }
  for (std::size_t i = 0; i < per_family; ++i) {
    CmipCase cc = random_cmip(rng, 8, 8);
    const Instance& inst = cc.instance;
    double opt = exact_opt(inst).value;
    if (cc.all_integer) {
      auto brute = brute_integer_cmip(inst);
      if (brute && std::abs(*brute - opt) > 1e-9) ++F.oracle_mismatch["cmip"];
    }
    CmipResult fast = solve_cmip(inst);
    record(F, "cmip", fast.cost, opt, inst.delta());
    SolveOptions so;
    so.policy = cycle_policy(i);
    SolveResult r = solve(inst, so);
    record(F, "cmip", r.cost, opt, inst.delta());
    F.cases.push_back({"cmip", inst, fast.trace, fast.cost, opt, false});
  }
  F.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  return F;
}

Outcome criterion3(const Families& F, std::size_t per_family) {
  Outcome o;
  for (const auto& [fam, n] : F.count) {
    std::size_t instances = n / (fam == "vertex cover" ? 1 : 2);
    o.require(instances >= per_family, fam + ": only " + std::to_string(instances) + " instances");
    if (F.violations.count(fam)) o.require(false, fam + ": " + std::to_string(F.violations.at(fam)) + " violations");
    if (F.oracle_mismatch.count(fam)) o.require(false, fam + ": oracle disagrees with enumeration");
    o.detail << fam << " " << instances << " (worst cost/(delta OPT) " << str(F.worst_ratio.at(fam)) << "); ";
  }
  o.require(F.seconds < 60.0, "suite took " + str(F.seconds) + " s");
  o.detail << str(F.seconds) << " s";
  return o;
}

Outcome criterion4(const Families& F) {
  Outcome o;
  std::size_t steps = 0, runs = 0;
  double min_slack = kUnbounded, min_drop = kUnbounded;
  for (const FamilyCase& fc : F.cases) {
    const Instance& inst = fc.instance;
    double delta = double(inst.delta());
    Point x = fc.trace.start;
    double c0 = inst.cost()(x);
    double res = residual(inst, x);
    o.require(std::abs(c0 + res - fc.opt) <= 1e-9, fc.family + ": residual at start is not OPT");
    for (const StepRecord& rec : fc.trace.steps) {
      for (const RaisedVar& rv : rec.raised) x[rv.var] = rv.new_value;
      double next = residual(inst, x);
      double slack = fc.opt + 1e-9 - (inst.cost()(x) / delta + next);
      double drop = (res - next) - (rec.beta - 1e-9);
      min_slack = std::min(min_slack, slack);
      min_drop = std::min(min_drop, drop);
      o.require(slack >= 0.0, fc.family + ": c(x)/delta + residual(x) exceeds OPT by " + str(-slack));
      o.require(drop >= 0.0, fc.family + ": residual fell by less than beta");
      res = next;
      ++steps;
    }
    ++runs;
  }
  o.detail << runs << " runs, " << steps << " steps; min OPT - (c(x)/delta + residual) = " << str(min_slack)
           << ", min residual drop - beta = " << str(min_drop);
  return o;
}

// ------------------------------------------------------------ 5

Outcome criterion5() {
  Outcome o;
  Rng64 rng(55);
  std::size_t rows = 0, violations = 0, worst_steps = 0, worst_deps = 0;
  double worst = 0.0;
  for (int it = 0; it < 1000; ++it) {
    std::size_t n = 1 + rng() % 8;
    std::vector<CmipEntry> entries;
    std::vector<double> c(n);
    double reach = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      c[j] = double(rng() % 6);
      bool integer = rng() % 2;
      double upper = rng() % 3 == 0 ? kUnbounded : double(1 + rng() % 4);
      double a = double(1 + rng() % 9);
      entries.push_back({j, a, integer, upper});
      reach += a * upper;
    }
    double b = std::min(double(1 + rng() % 25), reach);
    auto row = std::make_shared<CmipRow>("r", entries, b);
    Instance inst = Instance::continuous(CostModel::linear(c), {row});
    for (CmipImpl impl : {CmipImpl::kHeap, CmipImpl::kNaive}) {
      CmipResult r = solve_cmip(inst, {impl, false});
      std::size_t s = r.steps_per_row[0];
      if (s > 2 * n) ++violations;
      double q = double(s) / double(n);
      if (q > worst) {
        worst = q;
        worst_steps = s;
        worst_deps = n;
      }
      o.require(inst.feasible(r.solution), "row left unsatisfied");
    }
    ++rows;
  }
  o.require(violations == 0, std::to_string(violations) + " rows over 2|deps| steps");
  o.detail << rows << " rows x 2 implementations, violations " << violations << ", worst " << worst_steps
           << " steps on " << worst_deps << " deps";
  return o;
}

// ------------------------------------------------------------ 6

Outcome criterion6() {
  Outcome o;
  CounterFamilyReport rep = cmip_counter_family({100, 1000, 10000}, 8, 1);
  o.require(rep.ok(), "slope " + str(rep.slope) + ", max pair slope " + str(rep.max_pair_slope));
  for (const CounterPoint& p : rep.points) {
    o.require(double(p.ops) <= rep.C * double(p.N) * std::log2(double(p.delta)) + 1e-9, "bound with fitted C");
  }
  o.detail << "fitted C = " << str(rep.C) << ", log-log slope " << str(rep.slope) << ", max doubling slope "
           << str(rep.max_pair_slope) << " (threshold " << str(rep.threshold) << "); ops:";
  for (const CounterPoint& p : rep.points) o.detail << " n=" << p.n << ":" << p.ops;
  return o;
}

// ------------------------------------------------------------ 7

using Cache = std::set<std::size_t>;

// Exhaustive eviction schedules: after each request the requested item
// stays and any subset of the rest may be dropped.
double brute_schedule(const std::vector<std::size_t>& reqs, const std::function<bool(const Cache&, std::size_t)>& fits,
                      const std::function<double(std::size_t, std::size_t)>& price) {
  std::map<Cache, double> states{{{}, 0.0}};
  for (std::size_t t = 0; t < reqs.size(); ++t) {
    std::map<Cache, double> next;
    for (const auto& [cache, c] : states) {
      std::vector<std::size_t> rest;
      for (std::size_t s : cache) {
        if (s != reqs[t]) rest.push_back(s);
      }
      for (std::uint32_t m = 0; m < (1u << rest.size()); ++m) {
        Cache keep{reqs[t]};
        double v = c;
        for (std::size_t i = 0; i < rest.size(); ++i) {
          if (m >> i & 1u) {
            v += price(rest[i], t);
          } else {
            keep.insert(rest[i]);
          }
        }
        if (!fits(keep, t)) continue;
        auto it = next.find(keep);
        if (it == next.end() || v < it->second) next[keep] = v;
      }
    }
    states.swap(next);
  }
  double best = kUnbounded;
  for (const auto& [cache, c] : states) best = std::min(best, c);
  return best;
}

Outcome criterion7() {
  Outcome o;
  Rng64 rng(77);
  std::size_t paging = 0, conn = 0, upg = 0;
  double worst_p = 0.0, worst_c = 0.0, worst_u = 0.0;
  for (std::size_t k : {2, 3}) {
    for (int it = 0; it < 200; ++it) {
      std::size_t pages = 1 + rng() % 6;
      std::vector<std::size_t> reqs(1 + rng() % 30);
      for (auto& r : reqs) r = rng() % pages;
      CachingResult g = simulate_paging(reqs, double(k));
      OfflineCaching b = belady(reqs, k);
      double brute = brute_schedule(reqs, [&](const Cache& q, std::size_t) { return q.size() <= k; },
                                    [](std::size_t, std::size_t) { return 1.0; });
      o.require(b.cost == brute, "Belady disagrees with enumeration");
      o.require(g.cost <= double(k) * b.cost, "paging k=" + std::to_string(k) + ": " + str(g.cost) + " > k * " +
                                                  str(b.cost));
      if (b.cost > 0) worst_p = std::max(worst_p, g.cost / b.cost);
      ++paging;
    }
  }
  for (std::size_t k : {1, 2}) {
    for (int it = 0; it < 200; ++it) {
      std::size_t nodes = 2 + rng() % 3;
      std::vector<ConnectionRequest> reqs(1 + rng() % 14);
      for (auto& r : reqs) {
        r.u = rng() % nodes;
        do r.w = rng() % nodes;
        while (r.w == r.u);
        r.cost = double(1 + rng() % 3);
      }
      std::map<std::pair<std::size_t, std::size_t>, std::size_t> id;
      std::vector<std::pair<std::size_t, std::size_t>> ends;
      std::vector<std::size_t> seq;
      for (const auto& r : reqs) {
        auto key = std::minmax(r.u, r.w);
        auto [pos, fresh] = id.emplace(key, ends.size());
        if (fresh) ends.push_back(key);
        seq.push_back(pos->second);
      }
      auto price = [&](std::size_t s, std::size_t t) {
        double c = 1.0;
        for (std::size_t u = 0; u <= t; ++u) {
          if (seq[u] == s) c = reqs[u].cost;
        }
        return c;
      };
      auto fits = [&](const Cache& q, std::size_t t) {
        for (std::size_t node : {reqs[t].u, reqs[t].w}) {
          std::size_t deg = 0;
          for (std::size_t s : q) deg += ends[s].first == node || ends[s].second == node;
          if (deg > k) return false;
        }
        return true;
      };
      double opt = brute_schedule(seq, fits, price);
      CachingResult g = simulate_connection_caching(reqs, k);
      o.require(std::abs(connection_caching_opt(reqs, k) - opt) <= 1e-9, "connection oracle disagrees");
      o.require(g.cost <= double(k) * opt + 1e-9, "connection k=" + std::to_string(k));
      if (opt > 0) worst_c = std::max(worst_c, g.cost / opt);
      ++conn;
    }
  }
  for (int it = 0; it < 50; ++it) {
    CacheTemplate t;
    t.d = 1 + it % 2;
    t.items = 3 + it % 2;
    t.base_capacity = 1.0 + double(it % 3 == 0);
    for (std::size_t i = 0; i < t.d; ++i) t.upgrades.push_back({double(1 + rng() % 3), 1.0});
    for (std::size_t i = 0; i < t.items; ++i) t.evict_cost.push_back(double(1 + rng() % 4));
    if (it % 4 == 1) {
      t.evict_floor.assign(t.items, 0.0);
      t.discount_rate = 1.0;
      t.discount_component = t.d - 1;
    }
    if (it % 5 == 2) {
      t.kind = CacheTemplate::Kind::kConflictPairs;
      t.base_capacity = 2.0;
      t.conflicts = {{0, 1, std::size_t{0}, double(1 + rng() % 3)}};
    }
    std::vector<std::size_t> reqs(2 + rng() % 7);
    for (auto& r : reqs) r = rng() % t.items;
    UpgradableResult g = simulate_upgradable_caching(reqs, t.model());
    // Integer grid over y: every price, unlock and cost here is integral.
    double opt = kUnbounded;
    std::vector<double> y(t.d, 0.0);
    std::function<void(std::size_t)> rec = [&](std::size_t i) {
      if (i == t.d) {
        double spend = 0.0;
        for (double v : y) spend += v;
        double sched = brute_schedule(
            reqs,
            [&](const Cache& q, std::size_t) {
              std::vector<std::size_t> items(q.begin(), q.end());
              return t.cachable(items, y);
            },
            [&](std::size_t s, std::size_t) { return t.cost(s, y); });
        opt = std::min(opt, spend + sched);
        return;
      }
      for (double v = 0.0; v <= 8.0; v += 1.0) {
        y[i] = v;
        rec(i + 1);
      }
      y[i] = 0.0;
    };
    rec(0);
    o.require(std::abs(upgradable_opt(reqs, t) - opt) <= 1e-9, "upgradable oracle disagrees on scenario " +
                                                                   std::to_string(it));
    o.require(g.delta <= t.d + g.max_cached, "delta above d + k");
    o.require(g.total <= double(t.d + g.max_cached) * opt + 1e-9, "upgradable scenario " + std::to_string(it));
    if (opt > 0) worst_u = std::max(worst_u, g.total / opt);
    ++upg;
  }
  o.detail << paging << " paging traces (worst ratio " << str(worst_p) << "), " << conn
           << " connection traces (worst " << str(worst_c) << "), " << upg << " upgradable scenarios (worst "
           << str(worst_u) << ")";
  return o;
}

// ------------------------------------------------------------ 8

TwoStageInstance random_two_stage(Rng64& rng, std::size_t max_n, std::size_t max_rows, bool bounded) {
  TwoStageInstance ts;
  std::size_t n = 1 + rng() % max_n;
  std::size_t rows = 1 + rng() % max_rows;
  std::vector<double> upper(n);
  for (std::size_t j = 0; j < n; ++j) {
    ts.c.push_back(double(1 + rng() % 4));
    upper[j] = bounded ? double(1 + rng() % 3) : (rng() % 2 ? kUnbounded : double(1 + rng() % 3));
  }
  for (std::size_t s = 0; s < rows; ++s) {
    std::vector<std::size_t> pool(n);
    for (std::size_t j = 0; j < n; ++j) pool[j] = j;
    std::shuffle(pool.begin(), pool.end(), rng);
    std::size_t k = 1 + rng() % n;
    std::vector<CmipEntry> entries;
    double reach = 0.0;
    for (std::size_t t = 0; t < k; ++t) {
      double a = double(1 + rng() % 3);
      entries.push_back({pool[t], a, bounded, upper[pool[t]]});
      reach += a * upper[pool[t]];
    }
    double b = std::min(double(1 + rng() % 5), reach);
    auto row = std::make_shared<CmipRow>("r" + std::to_string(s), entries, b);
    std::vector<double> w;
    for (std::size_t t = 0; t < row->entries().size(); ++t) w.push_back(double(rng() % 4));
    ts.rows.push_back(row);
    ts.w.push_back(w);
    ts.p.push_back(0.25 * double(1 + rng() % 4));
  }
  return ts;
}

// E over every activation pattern of W.X + c . max_{S active} x^S.
double enumerate_total_cost(const TwoStageInstance& ts, const FirstStageMatrix& X) {
  double first = 0.0;
  for (std::size_t s = 0; s < ts.size(); ++s) {
    for (std::size_t k = 0; k < X.values[s].size(); ++k) first += ts.w[s][k] * X.values[s][k];
  }
  double second = 0.0;
  for (std::uint32_t m = 0; m < (1u << ts.size()); ++m) {
    double prob = 1.0;
    Point hat(ts.n(), 0.0);
    for (std::size_t s = 0; s < ts.size(); ++s) {
      bool on = m >> s & 1u;
      prob *= on ? ts.p[s] : 1.0 - ts.p[s];
      if (!on) continue;
      const auto& e = ts.rows[s]->entries();
      for (std::size_t k = 0; k < e.size(); ++k) hat[e[k].var] = std::max(hat[e[k].var], X.values[s][k]);
    }
    double v = 0.0;
    for (std::size_t j = 0; j < ts.n(); ++j) v += ts.c[j] * hat[j];
    second += prob * v;
  }
  return first + second;
}

// Every integer first-stage matrix with entries in [0, u] meeting its row.
double brute_two_stage(const TwoStageInstance& ts) {
  FirstStageMatrix X = FirstStageMatrix::zeros(ts);
  std::vector<std::pair<std::size_t, std::size_t>> cells;
  for (std::size_t s = 0; s < ts.size(); ++s) {
    for (std::size_t k = 0; k < X.values[s].size(); ++k) cells.push_back({s, k});
  }
  double best = kUnbounded;
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == cells.size()) {
      for (std::size_t s = 0; s < ts.size(); ++s) {
        const auto& e = ts.rows[s]->entries();
        double lhs = 0.0;
        for (std::size_t k = 0; k < e.size(); ++k) lhs += e[k].coeff * X.values[s][k];
        if (lhs < ts.rows[s]->b() - 1e-9) return;
      }
      best = std::min(best, enumerate_total_cost(ts, X));
      return;
    }
    auto [s, k] = cells[i];
    double u = ts.rows[s]->entries()[k].upper;
    for (double v = 0.0; v <= u; v += 1.0) {
      X.values[s][k] = v;
      rec(i + 1);
    }
    X.values[s][k] = 0.0;
  };
  rec(0);
  return best;
}

Outcome criterion8() {
  Outcome o;
  Rng64 rng(88);
  std::uniform_real_distribution<double> unif(0.0, 3.0);
  std::size_t mc_checks = 0, fd_checks = 0, greedy_checks = 0;
  double worst_z = 0.0, worst_fd = 0.0, worst_ratio = 0.0;
  for (int it = 0; it < 50; ++it) {
    TwoStageInstance ts = random_two_stage(rng, 5, 4, false);
    FirstStageMatrix X = FirstStageMatrix::zeros(ts);
    for (auto& row : X.values) {
      for (double& v : row) v = unif(rng);
    }
    double exact = enumerate_total_cost(ts, X);
    double closed = expected_total_cost(ts, X);
    o.require(std::abs(exact - closed) <= 1e-9 * (1.0 + exact), "closed form disagrees with enumeration");
    MonteCarloEstimate mc = monte_carlo_total_cost(ts, X, 100000, 1000 + it);
    double gap = std::abs(mc.mean - closed);
    if (mc.standard_error > 0.0) {
      worst_z = std::max(worst_z, gap / mc.standard_error);
      o.require(gap <= 3.0 * mc.standard_error, "Monte Carlo off by " + str(gap / mc.standard_error) + " SE");
    } else {
      o.require(gap <= 1e-9, "zero-variance Monte Carlo differs");
    }
    ++mc_checks;
    for (std::size_t s = 0; s < ts.size(); ++s) {
      for (std::size_t k = 0; k < X.values[s].size(); ++k) {
        std::size_t j = ts.rows[s]->entries()[k].var;
        double rate = marginal_rate(ts, X, s, j);
        double room = threshold(ts, X, s, j) - X.values[s][k];
        double h = std::min(1e-6, room / 2.0);
        FirstStageMatrix Y = X;
        Y.values[s][k] += h;
        double fd = (expected_total_cost(ts, Y) - closed) / h;
        worst_fd = std::max(worst_fd, std::abs(fd - rate));
        o.require(std::abs(fd - rate) <= 1e-4, "marginal rate off by " + str(std::abs(fd - rate)));
        ++fd_checks;
      }
    }
  }
  for (int it = 0; it < 60; ++it) {
    TwoStageInstance ts = random_two_stage(rng, 3, 3, true);
    double opt = brute_two_stage(ts);
    o.require(std::abs(two_stage_opt(ts).cost - opt) <= 1e-9, "two-stage oracle disagrees with enumeration");
    ProbabilisticResult r = solve_probabilistic_cmip(ts);
    o.require(first_stage_feasible(ts, r.solution), "greedy first stage infeasible");
    o.require(r.cost <= double(ts.delta()) * opt + 1e-9, "greedy above delta * OPT");
    if (opt > 0) worst_ratio = std::max(worst_ratio, r.cost / opt);
    ++greedy_checks;
  }
  o.detail << mc_checks << " instances at 1e5 samples (worst |z| " << str(worst_z) << "), " << fd_checks
           << " finite differences (worst gap " << str(worst_fd) << "), " << greedy_checks
           << " exhaustive fixtures (worst C(X)/OPT " << str(worst_ratio) << ")";
  return o;
}

// ------------------------------------------------------------ 9

std::vector<std::pair<std::string, Instance>> randomized_fixtures() {
  std::vector<std::string> names{"triangle_vc",   "weighted_path_vc", "star_vc",       "five_edge_vc",
                                 "set_cover",     "facility",         "paging_constraints",
                                 "integer_rows",  "grid_separable",   "multilevel"};
  std::vector<std::pair<std::string, Instance>> out;
  for (const auto& n : names) {
    std::string path = std::string(MONOCOVER_FIXTURE_DIR) + "/randomized/" + n + ".json";
    out.emplace_back(n, instance_from_json(read_json_file(path)).instance);
  }
  return out;
}

bool same_bits(const Point& a, const Point& b) {
  return a.size() == b.size() && (a.empty() || std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0);
}

bool same_trace_bits(const StepTrace& a, const StepTrace& b) {
  if (!same_bits(a.start, b.start) || !same_bits(a.final_x, b.final_x) || !same_bits(a.final_mu, b.final_mu)) return false;
  if (a.steps.size() != b.steps.size()) return false;
  for (std::size_t t = 0; t < a.steps.size(); ++t) {
    const auto& p = a.steps[t];
    const auto& q = b.steps[t];
    if (p.constraint != q.constraint || p.raised.size() != q.raised.size()) return false;
    if (std::memcmp(&p.beta, &q.beta, sizeof(double)) != 0) return false;
    for (std::size_t i = 0; i < p.raised.size(); ++i) {
      if (p.raised[i].var != q.raised[i].var ||
          std::memcmp(&p.raised[i].new_value, &q.raised[i].new_value, sizeof(double)) != 0) {
        return false;
      }
    }
  }
  return true;
}

Outcome criterion9() {
  Outcome o;
  auto fixtures = randomized_fixtures();
  o.require(fixtures.size() == 10, "expected 10 fixtures");
  std::size_t in_domain_steps = 0;
  double worst = 0.0;
  for (const auto& [name, inst] : fixtures) {
    OracleResult opt = exact_opt(inst);
    if (name == "triangle_vc") o.require(opt.value == 2.0, "triangle OPT " + str(opt.value));
    for (Correlation corr : {Correlation::kIndependent, Correlation::kSinglePick}) {
      RandomizedOptions ro;
      ro.correlation = corr;
      MonteCarloReport rep = montecarlo_ratio(inst, ro, 10000, 9, opt.value);
      o.require(rep.mean <= double(rep.delta) * opt.value + 3.0 * rep.standard_error, name + ": mean above bound");
      if (opt.value > 0) worst = std::max(worst, rep.mean / (double(rep.delta) * opt.value));
    }
    // Domain closure: every coordinate of every step lands in U_j.
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
      Rng rng(seed, 1);
      RandomizedResult r = randomized_solve(inst, {}, rng);
      for (const auto& rec : r.trace.steps) {
        for (const auto& rv : rec.raised) {
          o.require(inst.domains()[rv.var].contains(rv.new_value), name + ": step left the domain");
          ++in_domain_steps;
        }
      }
      o.require(inst.feasible(r.x), name + ": stateless run ended infeasible");
      o.require(same_bits(r.x, r.mu), name + ": stateless x differs from mu(x)");
    }
    // p = 1 collapses to the deterministic engine.
    RandomizedOptions one;
    one.variant = RandomVariant::kRstep;
    if (!inst.cost().linear_coefficients()) {
      one.beta = [](const Instance& I, std::size_t i, std::span<const double> x) {
        return minimal_beta(x, I.effective(i), I.cost());
      };
    }
    Rng rng(42, 0);
    RandomizedResult rr = randomized_solve(inst, one, rng);
    SolveOptions so;
    so.order = ConstraintOrder::kSequential;
    SolveResult det = solve(inst, so);
    o.require(same_trace_bits(rr.trace, det.trace) && same_bits(rr.x, det.x), name + ": p = 1 differs from solve");
  }
  o.detail << fixtures.size() << " fixtures x 2 correlations x 1e4 trials (worst mean/(delta OPT) " << str(worst)
           << "), " << in_domain_steps << " in-domain coordinate moves, p = 1 bit-identical";
  return o;
}

// ------------------------------------------------------------ 10

Outcome criterion10(const Families& F) {
  Outcome o;
  std::size_t instances = 0, probes = 0, views = 0;
  double max_gap = 0.0, min_slack = kUnbounded;
  auto check = [&](const Instance& inst, const StepTrace& trace, bool binary, std::uint64_t seed) {
    OracleResult opt = exact_opt(inst);
    LocalRatioReport rep = local_ratio_report(inst, trace, 64, seed, &opt.x);
    max_gap = std::max(max_gap, rep.max_telescoping_gap);
    min_slack = std::min(min_slack, rep.min_slack_b);
    o.require(rep.max_telescoping_gap <= 1e-9, "property (a) gap " + str(rep.max_telescoping_gap));
    o.require(rep.property_c, "property (c): r(x^T) != 0");
    o.require(rep.min_slack_b >= -1e-9, "property (b) slack " + str(rep.min_slack_b));
    o.require(rep.min_chain_slack >= -1e-9, "beta chain slack " + str(rep.min_chain_slack));
    probes += rep.probes;
    ++instances;
    if (binary) {
      WeightReductionView v = weight_reduction_view(inst, trace);
      o.require(v.matches_mu && v.invariant_holds, "weight view differs from mu(x)");
      ++views;
    }
  };
  // 200 instances: every fourth family case plus binary vertex covers.
  Rng64 rng(1010);
  std::size_t taken = 0;
  for (std::size_t i = 0; i < F.cases.size() && taken < 150; i += 4, ++taken) {
    check(F.cases[i].instance, F.cases[i].trace, F.cases[i].binary, i);
  }
  while (instances < 200) {
    Graph g = random_graph(rng, 10);
    Instance inst = binary_vertex_cover(g);
    SolveOptions so;
    so.policy = cycle_policy(instances);
    check(inst, solve(inst, so).trace, true, instances);
  }
  for (const auto& [name, inst] : randomized_fixtures()) {
    bool binary = std::all_of(inst.domains().begin(), inst.domains().end(), [](const Domain& d) {
      return d.kind() == Domain::Kind::kFiniteSet && d.values() == std::vector<double>{0.0, 1.0};
    });
    if (!binary || !inst.cost().linear_coefficients()) continue;
    WeightReductionView v = weight_reduction_view(inst, solve(inst).trace);
    o.require(v.matches_mu && v.invariant_holds, name + ": weight view differs from mu(x)");
    ++views;
  }
  o.detail << instances << " instances, " << probes << " probes, max (a) gap " << str(max_gap)
           << ", min (b) slack " << str(min_slack) << ", " << views << " {0,1} weight views";
  return o;
}

}  // namespace

int main() {
  constexpr std::size_t kPerFamily = 500;
  int failed = 0;
  auto report = [&](int id, const char* name, Outcome o) {
    std::printf("criterion %2d %s: %s  %s\n", id, o.pass ? "PASS" : "FAIL", name, o.detail.str().c_str());
    std::fflush(stdout);
    failed += !o.pass;
  };
  auto guarded = [&](int id, const char* name, const std::function<Outcome()>& body) {
    try {
      report(id, name, body());
    } catch (const std::exception& e) {
      Outcome o;
      o.require(false, std::string("exception: ") + e.what());
      report(id, name, std::move(o));
    }
  };
  guarded(1, "worked example step", criterion1);
  guarded(2, "maximal step sizes on the two-row overshoot instance", criterion2);
  Families F;
  guarded(3, "delta-approximation suites", [&] {
    F = build_families(kPerFamily);
    return criterion3(F, kPerFamily);
  });
  guarded(4, "residual invariant per step", [&] { return criterion4(F); });
  guarded(5, "CMIP steps per row", criterion5);
  guarded(6, "CMIP operation counters", criterion6);
  guarded(7, "online competitiveness", criterion7);
  guarded(8, "two-stage CMIP", criterion8);
  guarded(9, "randomized and stateless variants", criterion9);
  guarded(10, "local-ratio decomposition", [&] { return criterion10(F); });
  std::printf("%d of 10 criteria failed\n", failed);
  return failed == 0 ? 0 : 1;
}
