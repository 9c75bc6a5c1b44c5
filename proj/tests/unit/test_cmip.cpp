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

#include <algorithm>
#include <random>

#include "doctest.h"
#include "monocover/cmip.hpp"
#include "monocover/oracle.hpp"

using namespace monocover;

namespace {

struct VarSpec {
  bool integer;
  double upper;
  double cost;
};

Instance random_cmip(std::mt19937_64& rng, std::size_t max_n, std::size_t max_m) {
  std::size_t n = 1 + rng() % max_n;
  std::size_t m = 1 + rng() % max_m;
  std::vector<VarSpec> vars(n);
  std::vector<double> c(n);
  for (std::size_t j = 0; j < n; ++j) {
    vars[j].integer = rng() % 2;
    vars[j].upper = rng() % 3 == 0 ? kUnbounded : double(1 + rng() % 3);
    vars[j].cost = rng() % 6 == 0 ? 0.0 : double(1 + rng() % 5);
    c[j] = vars[j].cost;
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
      const VarSpec& v = vars[pool[t]];
      double a = double(1 + rng() % 5);
      entries.push_back({pool[t], a, v.integer, v.upper});
      reach += a * v.upper;
    }
    double b = double(1 + rng() % 10);
    b = std::min(b, reach);
    rows.push_back(std::make_shared<CmipRow>("r" + std::to_string(i), std::move(entries), b));
  }
  return Instance::continuous(CostModel::linear(std::move(c)), std::move(rows));
}

const CmipRow& row_of(const Instance& inst, std::size_t i) {
  return dynamic_cast<const CmipRow&>(inst.constraint(i));
}

ConstraintPtr row(std::vector<CmipEntry> entries, double b) {
  return std::make_shared<CmipRow>("r", std::move(entries), b);
}

}  // namespace

TEST_SUITE("cmip") {
  TEST_CASE("stepsize with an empty prefix") {
    CmipRow r("r", {{0, 3.0, true, 1.0}, {1, 2.0, false, kUnbounded}}, 4.0);
    Point x{0.0, 0.0};
    auto s = cmip_stepsize(x, r, std::vector<double>{1.0, 1.0});
    CHECK(s.J.empty());
    CHECK(s.U.empty());
    CHECK(is_unbounded(s.beta_J));
    CHECK(s.beta_Jbar == doctest::Approx(4.0 / 3.0));
    CHECK(s.beta == s.beta_Jbar);
    Instance inst = Instance::continuous(CostModel::linear({1.0, 1.0}),
                                         {std::make_shared<CmipRow>(r)});
    CHECK(distance(inst, x, 0) == doctest::Approx(1.5));
  }

  TEST_CASE("stepsize of a single floored term") {
    CmipRow r("r", {{0, 1.0, true, kUnbounded}}, 1.0);
    Point x{0.25};
    auto s = cmip_stepsize(x, r, std::vector<double>{1.0});
    // J is empty here: the fully relaxed row x1 >= 1 already fails.
    CHECK(s.J.empty());
    CHECK(s.beta == doctest::Approx(0.75));
    CHECK(s.beta == s.beta_Jbar);
  }

  TEST_CASE("stepsize errors") {
    CmipRow r("r", {{0, 1.0, false, 1.0}, {1, 1.0, true, 1.0}}, 3.0);
    CHECK_THROWS_AS(cmip_stepsize(Point{1.0, 1.0}, r, std::vector<double>{1.0, 1.0}),
                    InfeasibleError);
    CHECK_THROWS_AS(cmip_stepsize(Point{1.0, 1.0}, CmipRow("s", {{0, 1.0, false, 1.0}}, 1.0),
                                  std::vector<double>{1.0, 1.0}),
                    Error);
  }

  TEST_CASE("rows reject bad data") {
    CHECK_THROWS_AS(CmipRow("r", {{0, 0.0, false, kUnbounded}}, 1.0), Error);
    CHECK_THROWS_AS(CmipRow("r", {{0, -1.0, false, kUnbounded}}, 1.0), Error);
    CHECK_THROWS_AS(CmipRow("r", {{0, 1.0, false, kUnbounded}, {0, 1.0, false, kUnbounded}}, 1.0),
                    Error);
  }

  TEST_CASE("integrality gap instance") {
    Instance inst = Instance::continuous(
        CostModel::linear({1.0, 0.0}),
        {row({{0, 10.0, false, kUnbounded}, {1, 10.0, false, 1.0}}, 11.0)});
    for (auto impl : {CmipImpl::kHeap, CmipImpl::kNaive}) {
      auto r = solve_cmip(inst, {impl, true});
      CHECK(inst.feasible(r.solution));
      CHECK(r.cost <= 0.2 + 1e-12);
    }
    CHECK(exact_opt(inst).value == doctest::Approx(0.1));
  }

  TEST_CASE("set multicover toy") {
    auto cover2 = [](std::vector<std::size_t> vars) {
      std::vector<CmipEntry> e;
      for (auto j : vars) e.push_back({j, 1.0, true, kUnbounded});
      return row(std::move(e), 2.0);
    };
    Instance inst = Instance::continuous(CostModel::linear({1.0, 1.0, 1.0, 1.0}),
                                         {cover2({0, 1}), cover2({1, 2, 3}), cover2({0, 3})});
    auto r = solve_cmip(inst);
    CHECK(inst.feasible(r.solution));
    double opt = kUnbounded;
    for (int code = 0; code < 81; ++code) {
      Point y(4);
      for (int j = 0, k = code; j < 4; ++j, k /= 3) y[j] = k % 3;
      if (inst.feasible(y)) opt = std::min(opt, y[0] + y[1] + y[2] + y[3]);
    }
    CHECK(opt == 3.0);
    CHECK(exact_opt(inst).value == opt);
    CHECK(r.cost <= double(inst.delta()) * opt + 1e-9);
  }

  TEST_CASE("empty row set") {
    Instance inst = Instance::continuous(CostModel::linear({1.0, 2.0}), {});
    auto r = solve_cmip(inst);
    CHECK(r.solution == Point{0.0, 0.0});
    CHECK(r.cost == 0.0);
  }

  TEST_CASE("infeasible row is reported") {
    Instance inst = Instance::continuous(CostModel::linear({1.0}),
                                         {row({{0, 1.0, true, 1.0}}, 2.0)});
    CHECK_THROWS_AS(solve_cmip(inst), InfeasibleError);
  }

  TEST_CASE("inconsistent variables are rejected") {
    Instance inst = Instance::continuous(
        CostModel::linear({1.0}),
        {row({{0, 1.0, true, 1.0}}, 1.0), row({{0, 1.0, false, 1.0}}, 1.0)});
    CHECK(!is_cmip_instance(inst));
    CHECK_THROWS_AS(solve_cmip(inst), Error);
  }

  TEST_CASE("step count and prefix/saturation growth") {
    std::mt19937_64 rng(21);
    for (int t = 0; t < 1000; ++t) {
      Instance inst = random_cmip(rng, 8, 4);
      auto r = solve_cmip(inst);
      const auto& c = *inst.cost().linear_coefficients();
      for (std::size_t i = 0; i < inst.size(); ++i) {
        CHECK(r.steps_per_row[i] <= 2 * inst.constraint(i).deps().size());
      }
      Point x = r.trace.start;
      for (const auto& rec : r.trace.steps) {
        const CmipRow& S = row_of(inst, rec.constraint);
        auto before = cmip_stepsize(x, S, c);
        CHECK(rec.beta == doctest::Approx(before.beta));
        for (const auto& rv : rec.raised) x[rv.var] = rv.new_value;
        if (S.satisfied(x)) continue;
        auto after = cmip_stepsize(x, S, c);
        bool grew = after.U.size() > before.U.size() || after.J.size() > before.J.size();
        CHECK(grew);
      }
    }
  }

  TEST_CASE("heap and naive traces coincide") {
    std::mt19937_64 rng(22);
    for (int t = 0; t < 1000; ++t) {
      Instance inst = random_cmip(rng, 12, 12);
      auto h = solve_cmip(inst, {CmipImpl::kHeap, true});
      auto n = solve_cmip(inst, {CmipImpl::kNaive, true});
      REQUIRE(h.trace.steps.size() == n.trace.steps.size());
      for (std::size_t s = 0; s < h.trace.steps.size(); ++s) {
        const auto& a = h.trace.steps[s];
        const auto& b = n.trace.steps[s];
        CHECK(a.constraint == b.constraint);
        CHECK(a.beta == b.beta);
        REQUIRE(a.raised.size() == b.raised.size());
        for (std::size_t k = 0; k < a.raised.size(); ++k) {
          CHECK(a.raised[k].var == b.raised[k].var);
          CHECK(a.raised[k].new_value == b.raised[k].new_value);
        }
      }
      CHECK(h.x == n.x);
      CHECK(h.solution == n.solution);
    }
  }

  TEST_CASE("stepsize never exceeds the distance") {
    std::mt19937_64 rng(23);
    for (int t = 0; t < 300; ++t) {
      Instance inst = random_cmip(rng, 6, 3);
      auto r = solve_cmip(inst);
      const auto& c = *inst.cost().linear_coefficients();
      Point x = r.trace.start;
      for (const auto& rec : r.trace.steps) {
        double d = distance(inst, x, rec.constraint);
        CHECK(cmip_stepsize(x, row_of(inst, rec.constraint), c).beta <= d + 1e-9);
        for (const auto& rv : rec.raised) x[rv.var] = rv.new_value;
      }
    }
  }

  TEST_CASE("approximation against the oracle") {
    std::mt19937_64 rng(24);
    for (int t = 0; t < 500; ++t) {
      Instance inst = random_cmip(rng, 8, 8);
      auto r = solve_cmip(inst);
      CHECK(inst.feasible(r.solution));
      auto opt = exact_opt(inst);
      REQUIRE(opt.exact);
      CHECK(r.cost <= double(inst.delta()) * opt.value + 1e-9);
    }
  }
}
