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

#include <random>
#include <sstream>

#include "doctest.h"
#include "monocover/classic.hpp"
#include "monocover/io.hpp"

using namespace monocover;

namespace {

std::string pointer_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const ParseError& e) {
    return e.pointer();
  }
  return "<no error>";
}

std::size_t line_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const ParseError& e) {
    return e.line();
  }
  return 0;
}

Json sample() {
  return parse_json_text(R"({
    "variables": [{"name": "a", "domain": "reals"}, {"domain": "integers"}, {"domain": "binary"},
                  {"domain": {"set": [0, 0.5, 2]}}, {"domain": {"grid": {"start": 0, "step": 0.5, "stop": 3}}}],
    "cost": {"linear": [1, 2, 3, 4, 5]},
    "constraints": [
      {"id": "f", "floor_sum": {"terms": [{"var": 0}, {"var": 1, "coeff": 2, "step": 1, "cap": "inf"}], "rhs": 2}},
      {"id": "c", "cmip": {"A": {"2": 3, "4": 2}, "b": 4, "I": [2], "u": {"2": 1}}}
    ],
    "meta": {"source": "hand"}
  })");
}

}  // namespace

TEST_SUITE("io") {
  TEST_CASE("instance round trip") {
    auto doc = instance_from_json(sample());
    CHECK(doc.instance.n() == 5);
    CHECK(doc.instance.size() == 2);
    CHECK(doc.meta["source"] == "hand");
    Json out = instance_to_json(doc.instance, doc.meta);
    auto again = instance_from_json(out);
    CHECK(instance_to_json(again.instance, again.meta) == out);
    CHECK(again.instance.domains() == doc.instance.domains());
    CHECK(out["constraints"][1]["cmip"]["I"] == Json::array({2}));
  }

  TEST_CASE("separable and facility costs round trip") {
    FacilityInstance fl;
    fl.opening = {3.0, 1.0};
    fl.customers = {{{0, 1.0}, {1, 2.0}}, {{1, 0.5}}};
    Instance inst = facility_to_instance(fl);
    Json j = instance_to_json(inst);
    CHECK(instance_to_json(instance_from_json(j).instance) == j);
    Instance sep = Instance::continuous(CostModel::separable({PiecewiseLinear{{0.0, 1.0}, {0.0, 2.0}, 1.0}}),
                                        {std::make_shared<FloorSumConstraint>("s", std::vector<FloorTerm>{{0, 1.0, 1.0, 3.0}}, 1.0)});
    Json k = instance_to_json(sep);
    CHECK(instance_to_json(instance_from_json(k).instance) == k);
  }

  TEST_CASE("random instances round trip") {
    std::mt19937_64 gen(1);
    for (int rep = 0; rep < 100; ++rep) {
      std::vector<ConstraintPtr> cs;
      for (int i = 0; i < 3; ++i) {
        std::vector<CmipEntry> es;
        for (std::size_t j = 0; j < 4; ++j) {
          if (gen() % 2) es.push_back({j, 0.25 * double(1 + gen() % 8), gen() % 2 == 0, gen() % 3 ? kUnbounded : double(1 + gen() % 3)});
        }
        if (es.empty()) es.push_back({0, 1.0, false, kUnbounded});
        cs.push_back(std::make_shared<CmipRow>("r" + std::to_string(i), es, double(gen() % 5)));
      }
      Instance inst = Instance::continuous(CostModel::linear({1.0, 0.1 * double(gen() % 30), 2.0, 3.0}), cs);
      Json j = instance_to_json(inst);
      Json k = instance_to_json(instance_from_json(parse_json_text(j.dump())).instance);
      CHECK(j == k);
    }
  }

  TEST_CASE("schema violations carry JSON pointers") {
    Json d = sample();
    d["extra"] = 1;
    CHECK(pointer_of([&] { instance_from_json(d); }) == "/extra");
    d = sample();
    d["constraints"][0]["floor_sum"]["terms"][1]["var"] = 9;
    CHECK(pointer_of([&] { instance_from_json(d); }) == "/constraints/0/floor_sum/terms/1/var");
    d = sample();
    d["variables"][3]["domain"] = "complex";
    CHECK(pointer_of([&] { instance_from_json(d); }) == "/variables/3/domain");
    d = sample();
    d["cost"]["linear"] = Json::array({1, 2});
    CHECK(pointer_of([&] { instance_from_json(d); }) == "/cost/linear");
    d = sample();
    d["constraints"][1]["cmip"]["A"]["x"] = 1;
    CHECK(pointer_of([&] { instance_from_json(d); }) == "/constraints/1/cmip/A/x");
    d = sample();
    d["constraints"][1]["cmip"]["I"] = Json::array({3});
    CHECK(pointer_of([&] { instance_from_json(d); }) == "/constraints/1/cmip/I/0");
    d = sample();
    d["constraints"][1]["id"] = "f";
    CHECK(pointer_of([&] { instance_from_json(d); }) == "/constraints/1/id");
    d = sample();
    d.erase("cost");
    CHECK(pointer_of([&] { instance_from_json(d); }) == "/cost");
    d = sample();
    d["variables"][0]["domain"] = Json{{"set", Json::array({1, 0})}};
    CHECK(pointer_of([&] { instance_from_json(d); }) == "/variables/0/domain/set");
    CHECK_THROWS_AS(parse_json_text("{\"a\": "), ParseError);
  }

  TEST_CASE("two-stage documents") {
    Json d = parse_json_text(R"({
      "variables": [{"domain": "reals"}, {"domain": "reals"}],
      "cost": {"linear": [1, 2]},
      "constraints": [{"id": "s", "cmip": {"A": {"0": 1, "1": 1}, "b": 1, "I": [0, 1], "u": {"0": 1, "1": 1}}},
                      {"id": "t", "cmip": {"A": {"1": 2}, "b": 2}}],
      "p": {"s": 0.5},
      "W": {"t": {"1": 3}}
    })");
    CHECK(is_two_stage(d));
    auto ts = two_stage_from_json(d);
    CHECK(ts.p == std::vector<double>{0.5, 1.0});
    CHECK(ts.w[1] == std::vector<double>{3.0});
    CHECK(ts.w[0] == std::vector<double>{0.0, 0.0});
    auto again = two_stage_from_json(two_stage_to_json(ts));
    CHECK(two_stage_to_json(again) == two_stage_to_json(ts));
    d["p"]["s"] = 1.5;
    CHECK(pointer_of([&] { two_stage_from_json(d); }) == "/p/s");
    d["p"] = Json{{"zz", 0.5}};
    CHECK(pointer_of([&] { two_stage_from_json(d); }) == "/p/zz");
    CHECK_THROWS_AS(instance_from_json(two_stage_to_json(ts)), ParseError);
  }

  TEST_CASE("trace round trip") {
    StepTrace t;
    t.start = {0.0, 0.0};
    t.steps.push_back({0, "s", 1.0, {{0, 0.0, 1.0}, {1, 0.0, 0.5}}, 0.0, 2.0});
    t.final_x = {1.0, 0.5};
    t.final_mu = {1.0, 0.5};
    Json j = trace_to_json(t);
    CHECK(trace_from_json(j) == t);
    j["steps"][0]["raised"][1]["var"] = 7;
    CHECK(pointer_of([&] { trace_from_json(j); }) == "/steps/0/raised/1/var");
  }

  TEST_CASE("upgradable scenarios") {
    Json d = parse_json_text(R"({"template": "conflict-pairs", "d": 1, "items": 3, "base_capacity": 2,
      "upgrades": [{"price": 1, "gain": 1}], "evict_cost": [1, 2, 3],
      "conflicts": [{"a": 0, "b": 1, "component": 0, "unlock": 2}], "requests": [0, 1, 2, 0]})");
    auto s = upgradable_from_json(d);
    CHECK(s.tmpl.kind == CacheTemplate::Kind::kConflictPairs);
    CHECK(s.requests.size() == 4);
    CHECK(upgradable_to_json(upgradable_from_json(upgradable_to_json(s))) == upgradable_to_json(s));
    d["requests"][2] = 5;
    CHECK(pointer_of([&] { upgradable_from_json(d); }) == "/requests/2");
    d["template"] = "magic";
    CHECK(pointer_of([&] { upgradable_from_json(d); }) == "/template");
  }

  TEST_CASE("text traces") {
    std::istringstream conn("# t u w cost\n0 1 2 1\n\n1 1 3 2.5\n");
    auto c = parse_connection_trace(conn);
    REQUIRE(c.size() == 2);
    CHECK(c[1].w == 3);
    CHECK(c[1].cost == 2.5);
    std::istringstream files("0 0 1 1\n1 2 2 3\n2 0 1 1\n");
    auto f = parse_file_trace(files);
    CHECK(f.requests == std::vector<std::size_t>{0, 2, 0});
    CHECK(f.sizes[2] == 2.0);
    CHECK(f.costs[2] == 3.0);
    CHECK(line_of([] {
            std::istringstream in("0 1 2 1\n1 1 x 1\n");
            parse_connection_trace(in);
          }) == 2);
    CHECK(line_of([] {
            std::istringstream in("0 1 2 1\n\n0 1 3 1\n");
            parse_connection_trace(in);
          }) == 3);
    CHECK(line_of([] {
            std::istringstream in("0 1 1 1\n1 1 2 1\n");
            parse_file_trace(in);
          }) == 2);
    CHECK(line_of([] {
            std::istringstream in("0 1 1\n");
            parse_file_trace(in);
          }) == 1);
  }
}
