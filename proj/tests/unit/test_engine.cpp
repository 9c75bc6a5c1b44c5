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

#include <cmath>
#include <memory>

#include "doctest.h"
#include "monocover/cmip.hpp"
#include "monocover/engine.hpp"
#include "monocover/oracle.hpp"

using namespace monocover;

namespace {

ConstraintPtr linear_row(std::string id, std::vector<std::pair<std::size_t, double>> terms, double b) {
  std::vector<CmipEntry> entries;
  for (auto [j, a] : terms) entries.push_back({j, a, false, kUnbounded});
  return std::make_shared<CmipRow>(std::move(id), std::move(entries), b);
}

ConstraintPtr edge(std::size_t u, std::size_t w) {
  return std::make_shared<FloorSumConstraint>(
      "e" + std::to_string(u) + "_" + std::to_string(w),
      std::vector<FloorTerm>{{u, 1.0, 1.0, kUnbounded}, {w, 1.0, 1.0, kUnbounded}}, 1.0);
}

}  // namespace

TEST_SUITE("engine") {
  TEST_CASE("single step on the two-variable example") {
    auto S = linear_row("s", {{0, 1.0}, {1, 1.0}}, 1.0);
    Point x{0.0, 0.0};
    auto rec = step(x, *S, CostModel::linear({1.0, 2.0}), 1.0);
    CHECK(x[0] == 1.0);
    CHECK(x[1] == 0.5);
    CHECK(rec.cost_before == 0.0);
    CHECK(rec.cost_after == 2.0);
  }

  TEST_CASE("componentwise raise from a non-zero start") {
    auto S = linear_row("s", {{0, 1.0}, {1, 1.0}}, 5.0);
    Point x{0.5, 0.0};
    step(x, *S, CostModel::linear({2.0, 4.0}), 1.0);
    CHECK(x[0] == doctest::Approx(1.0));
    CHECK(x[1] == doctest::Approx(0.25));
  }

  TEST_CASE("zero step leaves x alone") {
    auto S = linear_row("s", {{0, 1.0}, {1, 1.0}}, 1.0);
    Point x{0.0, 0.0};
    auto rec = step(x, *S, CostModel::linear({1.0, 2.0}), 0.0);
    CHECK(x == Point{0.0, 0.0});
    CHECK(rec.raised.empty());
  }

  TEST_CASE("step rejects satisfied constraints and negative beta") {
    auto S = linear_row("s", {{0, 1.0}}, 1.0);
    Point x{2.0};
    CHECK_THROWS_AS(step(x, *S, CostModel::linear({1.0}), 1.0), Error);
    Point y{0.0};
    CHECK_THROWS_AS(step(y, *S, CostModel::linear({1.0}), -1.0), Error);
  }

  TEST_CASE("minimal beta") {
    auto S = linear_row("s", {{0, 1.0}, {1, 1.0}}, 1.0);
    Point x{0.0, 0.0};
    double beta = minimal_beta(x, *S, CostModel::linear({1.0, 2.0}));
    CHECK(beta == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    auto T = linear_row("t", {{0, 1.0}}, 5.0);
    CHECK(minimal_beta(x, *T, CostModel::linear({2.0, 1.0})) == doctest::Approx(10.0));
  }

  TEST_CASE("two-row overshoot instance with maximal steps costs 4 in either order") {
    auto inst = Instance::continuous(
        CostModel::linear({1.0, 1.0, 1.0}),
        {linear_row("a", {{0, 1.0}, {1, 1.0}}, 1.0), linear_row("b", {{0, 1.0}, {2, 1.0}}, 2.0)});
    for (auto perm : {std::vector<std::size_t>{0, 1}, std::vector<std::size_t>{1, 0}}) {
      SolveOptions opt;
      opt.policy = StepSizePolicy::maximal();
      opt.permutation = perm;
      auto res = solve(inst, opt);
      CHECK(res.cost == doctest::Approx(4.0));
    }
    auto opt = exact_opt(inst);
    CHECK(opt.value == doctest::Approx(2.0));
  }

  TEST_CASE("triangle vertex cover") {
    std::vector<Domain> doms(3, Domain::reals());
    Instance inst(doms, CostModel::linear({1.0, 1.0, 1.0}), {edge(0, 1), edge(1, 2), edge(0, 2)});
    auto res = solve(inst);
    CHECK(inst.feasible(res.mu));
    CHECK(res.cost <= 4.0);
    CHECK(exact_opt(inst).value == doctest::Approx(2.0));
    CHECK(replay(res.trace) == res.x);
  }

  TEST_CASE("an unreachable constraint is reported as infeasible") {
    std::vector<Domain> doms{Domain::binary()};
    auto S = std::make_shared<FloorSumConstraint>("s", std::vector<FloorTerm>{{0, 1.0, 1.0, kUnbounded}}, 2.0);
    Instance inst(doms, CostModel::linear({1.0}), {S});
    try {
      solve(inst);
      FAIL("expected InfeasibleError");
    } catch (const InfeasibleError& e) {
      CHECK(e.constraint() == 0);
    }
  }
}
