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

#include "monocover/io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace monocover {

namespace {

std::string escape(const std::string& key) {
  std::string out;
  for (char ch : key) {
    if (ch == '~') {
      out += "~0";
    } else if (ch == '/') {
      out += "~1";
    } else {
      out += ch;
    }
  }
  return out;
}

std::string at(const std::string& p, const std::string& key) { return p + "/" + escape(key); }
std::string at(const std::string& p, std::size_t i) { return p + "/" + std::to_string(i); }

[[noreturn]] void bad(const std::string& p, const std::string& what) { throw ParseError(p, what); }

void object(const Json& j, const std::string& p) {
  if (!j.is_object()) bad(p, "expected an object");
}

void array(const Json& j, const std::string& p) {
  if (!j.is_array()) bad(p, "expected an array");
}

void allow(const Json& j, const std::string& p, std::initializer_list<const char*> keys) {
  object(j, p);
  for (const auto& [k, v] : j.items()) {
    if (std::none_of(keys.begin(), keys.end(), [&](const char* s) { return k == s; })) {
      bad(at(p, k), "unknown field");
    }
  }
}

const Json& need(const Json& j, const std::string& p, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) bad(at(p, key), "missing required field");
  return *it;
}

double number(const Json& j, const std::string& p, bool allow_inf = false) {
  if (allow_inf && j.is_string() && j.get<std::string>() == "inf") return kUnbounded;
  if (!j.is_number()) bad(p, allow_inf ? "expected a number or \"inf\"" : "expected a number");
  double v = j.get<double>();
  if (!std::isfinite(v)) bad(p, "expected a finite number");
  return v;
}

double nonneg(const Json& j, const std::string& p, bool allow_inf = false) {
  double v = number(j, p, allow_inf);
  if (v < 0.0) bad(p, "must be >= 0");
  return v;
}

double opt_number(const Json& j, const std::string& p, const char* key, double dflt, bool allow_inf = false) {
  auto it = j.find(key);
  return it == j.end() ? dflt : number(*it, at(p, key), allow_inf);
}

std::size_t index(const Json& j, const std::string& p) {
  if (!j.is_number_integer() || j.get<std::int64_t>() < 0) bad(p, "expected a non-negative integer");
  return j.get<std::size_t>();
}

std::size_t key_index(const std::string& key, const std::string& p) {
  if (key.empty() || key.size() > 18 || !std::all_of(key.begin(), key.end(), ::isdigit)) {
    bad(p, "expected a variable index as key");
  }
  return std::stoull(key);
}

std::string text(const Json& j, const std::string& p) {
  if (!j.is_string()) bad(p, "expected a string");
  return j.get<std::string>();
}

std::vector<double> numbers(const Json& j, const std::string& p, bool nonnegative = true) {
  array(j, p);
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    out.push_back(nonnegative ? nonneg(j[i], at(p, i)) : number(j[i], at(p, i)));
  }
  return out;
}

Json real(double v) { return is_unbounded(v) ? Json("inf") : Json(v); }

// Runs a library constructor and re-raises its validation errors at `p`.
template <typename Fn>
auto checked(const std::string& p, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    bad(p, e.what());
  }
}

Domain domain_from_json(const Json& j, const std::string& p) {
  if (j.is_string()) {
    std::string s = j.get<std::string>();
    if (s == "reals") return Domain::reals();
    if (s == "integers") return Domain::integers();
    if (s == "binary") return Domain::binary();
    bad(p, "unknown domain '" + s + "'");
  }
  object(j, p);
  if (j.size() != 1) bad(p, "domain object needs exactly one of \"set\", \"grid\"");
  if (j.contains("set")) {
    auto v = numbers(j["set"], at(p, "set"));
    return checked(at(p, "set"), [&] { return Domain::finite_set(v); });
  }
  if (j.contains("grid")) {
    const Json& g = j["grid"];
    std::string q = at(p, "grid");
    allow(g, q, {"start", "step", "stop"});
    double start = nonneg(need(g, q, "start"), at(q, "start"));
    double step = nonneg(need(g, q, "step"), at(q, "step"));
    double stop = opt_number(g, q, "stop", kUnbounded, true);
    return checked(q, [&] { return Domain::grid(start, step, stop); });
  }
  bad(at(p, j.begin().key()), "unknown domain kind");
}

Json domain_to_json(const Domain& d) {
  switch (d.kind()) {
    case Domain::Kind::kReals:
      return "reals";
    case Domain::Kind::kIntegers:
      return "integers";
    case Domain::Kind::kFiniteSet:
      if (d.values() == std::vector<double>{0.0, 1.0}) return "binary";
      return Json{{"set", d.values()}};
    case Domain::Kind::kGrid:
      return Json{{"grid", Json{{"start", d.grid_start()}, {"step", d.grid_step()}, {"stop", real(d.grid_stop())}}}};
  }
  return "reals";
}

PiecewiseLinear curve_from_json(const Json& j, const std::string& p) {
  allow(j, p, {"knots", "values", "tail_slope"});
  PiecewiseLinear c;
  c.knots = numbers(need(j, p, "knots"), at(p, "knots"));
  c.values = numbers(need(j, p, "values"), at(p, "values"));
  c.tail_slope = opt_number(j, p, "tail_slope", 0.0);
  if (c.tail_slope < 0.0) bad(at(p, "tail_slope"), "must be >= 0");
  return c;
}

CostModel cost_from_json(const Json& j, const std::string& p, std::size_t n) {
  object(j, p);
  if (j.size() != 1) bad(p, "cost needs exactly one of \"linear\", \"separable\", \"facility\"");
  const std::string kind = j.begin().key();
  const std::string q = at(p, kind);
  const Json& body = j.begin().value();
  CostModel cost;
  if (kind == "linear") {
    auto c = numbers(body, q);
    cost = checked(q, [&] { return CostModel::linear(c); });
  } else if (kind == "separable") {
    array(body, q);
    std::vector<PiecewiseLinear> curves;
    for (std::size_t i = 0; i < body.size(); ++i) curves.push_back(curve_from_json(body[i], at(q, i)));
    cost = checked(q, [&] { return CostModel::separable(curves); });
  } else if (kind == "facility") {
    allow(body, q, {"opening", "pairs"});
    auto opening = numbers(need(body, q, "opening"), at(q, "opening"));
    const Json& pairs = need(body, q, "pairs");
    array(pairs, at(q, "pairs"));
    std::vector<FacilityPair> fp;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      std::string r = at(at(q, "pairs"), i);
      allow(pairs[i], r, {"customer", "facility", "cost"});
      fp.push_back({index(need(pairs[i], r, "customer"), at(r, "customer")),
                    index(need(pairs[i], r, "facility"), at(r, "facility")),
                    nonneg(need(pairs[i], r, "cost"), at(r, "cost"))});
    }
    cost = checked(q, [&] { return CostModel::facility(opening, fp); });
  } else {
    bad(q, "unknown cost kind");
  }
  if (cost.dimension() != n) {
    bad(q, "cost covers " + std::to_string(cost.dimension()) + " variables, instance has " + std::to_string(n));
  }
  return cost;
}

Json cost_to_json(const CostModel& cost) {
  const CostFunction& f = cost.fn();
  if (auto* l = dynamic_cast<const LinearCost*>(&f)) return Json{{"linear", l->coefficients()}};
  if (auto* s = dynamic_cast<const SeparableCost*>(&f)) {
    Json curves = Json::array();
    for (const auto& c : s->curves()) {
      curves.push_back(Json{{"knots", c.knots}, {"values", c.values}, {"tail_slope", c.tail_slope}});
    }
    return Json{{"separable", curves}};
  }
  if (auto* fl = dynamic_cast<const FacilityCost*>(&f)) {
    Json pairs = Json::array();
    for (const auto& pr : fl->pairs()) {
      pairs.push_back(Json{{"customer", pr.customer}, {"facility", pr.facility}, {"cost", pr.assign_cost}});
    }
    return Json{{"facility", Json{{"opening", fl->opening()}, {"pairs", pairs}}}};
  }
  fail(ErrorCode::kUnsupported, "generic submodular costs have no JSON form");
}

ConstraintPtr constraint_from_json(const Json& j, const std::string& p, std::size_t n, bool cmip_only) {
  allow(j, p, {"id", "floor_sum", "cmip"});
  std::string id = text(need(j, p, "id"), at(p, "id"));
  if (j.contains("floor_sum") == j.contains("cmip")) bad(p, "constraint needs exactly one of \"floor_sum\", \"cmip\"");
  ConstraintPtr out;
  if (j.contains("floor_sum")) {
    if (cmip_only) bad(at(p, "floor_sum"), "only CMIP rows are allowed here");
    const Json& f = j["floor_sum"];
    std::string q = at(p, "floor_sum");
    allow(f, q, {"terms", "rhs"});
    const Json& terms = need(f, q, "terms");
    array(terms, at(q, "terms"));
    std::vector<FloorTerm> ts;
    for (std::size_t i = 0; i < terms.size(); ++i) {
      std::string r = at(at(q, "terms"), i);
      allow(terms[i], r, {"var", "coeff", "step", "cap"});
      FloorTerm t;
      t.var = index(need(terms[i], r, "var"), at(r, "var"));
      if (t.var >= n) bad(at(r, "var"), "variable index out of range");
      t.coeff = opt_number(terms[i], r, "coeff", 1.0);
      t.step = opt_number(terms[i], r, "step", 1.0);
      t.cap = opt_number(terms[i], r, "cap", kUnbounded, true);
      ts.push_back(t);
    }
    double rhs = number(need(f, q, "rhs"), at(q, "rhs"));
    out = checked(q, [&] { return std::make_shared<FloorSumConstraint>(id, ts, rhs); });
  } else {
    auto row = cmip_row_from_json(j["cmip"], id, at(p, "cmip"));
    for (const auto& e : row->entries()) {
      if (e.var >= n) bad(at(at(p, "cmip"), "A"), "variable index " + std::to_string(e.var) + " out of range");
    }
    out = row;
  }
  return out;
}

Json constraint_to_json(const Constraint& c) {
  if (auto* f = dynamic_cast<const FloorSumConstraint*>(&c)) {
    Json terms = Json::array();
    for (const auto& t : f->terms()) {
      terms.push_back(Json{{"var", t.var}, {"coeff", t.coeff}, {"step", t.step}, {"cap", real(t.cap)}});
    }
    return Json{{"id", c.id()}, {"floor_sum", Json{{"terms", terms}, {"rhs", f->rhs()}}}};
  }
  if (auto* r = dynamic_cast<const CmipRow*>(&c)) return Json{{"id", c.id()}, {"cmip", cmip_row_to_json(*r)}};
  fail(ErrorCode::kUnsupported, "constraint '" + c.id() + "' has no JSON form");
}

struct Parsed {
  std::vector<Domain> domains;
  CostModel cost;
  std::vector<ConstraintPtr> constraints;
  Json meta = Json::object();
};

Parsed parse_base(const Json& doc, bool two_stage) {
  if (two_stage) {
    allow(doc, "", {"variables", "cost", "constraints", "meta", "p", "W"});
  } else {
    allow(doc, "", {"variables", "cost", "constraints", "meta"});
  }
  Parsed out;
  const Json& vars = need(doc, "", "variables");
  array(vars, "/variables");
  for (std::size_t i = 0; i < vars.size(); ++i) {
    std::string p = at("/variables", i);
    allow(vars[i], p, {"name", "domain"});
    if (vars[i].contains("name")) text(vars[i]["name"], at(p, "name"));
    out.domains.push_back(domain_from_json(need(vars[i], p, "domain"), at(p, "domain")));
  }
  out.cost = cost_from_json(need(doc, "", "cost"), "/cost", out.domains.size());
  const Json& cs = need(doc, "", "constraints");
  array(cs, "/constraints");
  std::set<std::string> ids;
  for (std::size_t i = 0; i < cs.size(); ++i) {
    std::string p = at("/constraints", i);
    auto c = constraint_from_json(cs[i], p, out.domains.size(), two_stage);
    if (!ids.insert(c->id()).second) bad(at(p, "id"), "duplicate constraint id '" + c->id() + "'");
    out.constraints.push_back(std::move(c));
  }
  if (doc.contains("meta")) {
    object(doc["meta"], "/meta");
    out.meta = doc["meta"];
  }
  return out;
}

Json base_to_json(const std::vector<Domain>& domains, const CostModel& cost,
                  const std::vector<ConstraintPtr>& constraints, const Json& meta) {
  Json vars = Json::array();
  for (const auto& d : domains) vars.push_back(Json{{"domain", domain_to_json(d)}});
  Json cs = Json::array();
  for (const auto& c : constraints) cs.push_back(constraint_to_json(*c));
  Json doc{{"variables", vars}, {"cost", cost_to_json(cost)}, {"constraints", cs}};
  if (!meta.empty()) doc["meta"] = meta;
  return doc;
}

}  // namespace

Json parse_json_text(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError("", std::string("invalid JSON at byte ") + std::to_string(e.byte));
  }
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::kInvalidArgument, "cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_json_text(ss.str());
}

InstanceDocument instance_from_json(const Json& doc) {
  Parsed p = parse_base(doc, false);
  Instance inst = checked("", [&] { return Instance(p.domains, p.cost, p.constraints); });
  return {std::move(inst), std::move(p.meta)};
}

Json instance_to_json(const Instance& instance, const Json& meta) {
  return base_to_json(instance.domains(), instance.cost(), instance.constraints(), meta);
}

std::shared_ptr<CmipRow> cmip_row_from_json(const Json& j, std::string id, const std::string& p) {
  allow(j, p, {"A", "b", "I", "u"});
  const Json& A = need(j, p, "A");
  object(A, at(p, "A"));
  std::map<std::size_t, CmipEntry> entries;
  for (const auto& [k, v] : A.items()) {
    std::string q = at(at(p, "A"), k);
    std::size_t var = key_index(k, q);
    double a = number(v, q);
    if (!(a > 0.0)) bad(q, "coefficients must be > 0");
    entries[var] = {var, a, false, kUnbounded};
  }
  if (j.contains("I")) {
    const Json& I = j["I"];
    array(I, at(p, "I"));
    for (std::size_t i = 0; i < I.size(); ++i) {
      std::size_t var = index(I[i], at(at(p, "I"), i));
      auto it = entries.find(var);
      if (it == entries.end()) bad(at(at(p, "I"), i), "integer variable has no coefficient in A");
      it->second.integer = true;
    }
  }
  if (j.contains("u")) {
    const Json& U = j["u"];
    object(U, at(p, "u"));
    for (const auto& [k, v] : U.items()) {
      std::string q = at(at(p, "u"), k);
      auto it = entries.find(key_index(k, q));
      if (it == entries.end()) bad(q, "bound for a variable with no coefficient in A");
      it->second.upper = nonneg(v, q, true);
    }
  }
  double b = number(need(j, p, "b"), at(p, "b"));
  std::vector<CmipEntry> list;
  for (auto& [var, e] : entries) list.push_back(e);
  return checked(p, [&] { return std::make_shared<CmipRow>(std::move(id), list, b); });
}

Json cmip_row_to_json(const CmipRow& row) {
  Json A = Json::object(), I = Json::array(), U = Json::object();
  for (const auto& e : row.entries()) {
    A[std::to_string(e.var)] = e.coeff;
    if (e.integer) I.push_back(e.var);
    if (!is_unbounded(e.upper)) U[std::to_string(e.var)] = e.upper;
  }
  return Json{{"A", A}, {"b", row.b()}, {"I", I}, {"u", U}};
}

bool is_two_stage(const Json& doc) { return doc.is_object() && (doc.contains("p") || doc.contains("W")); }

TwoStageInstance two_stage_from_json(const Json& doc) {
  Parsed p = parse_base(doc, true);
  for (std::size_t j = 0; j < p.domains.size(); ++j) {
    if (!p.domains[j].unrestricted()) {
      bad(at(at("/variables", j), "domain"), "two-stage rows carry integrality; domains must be \"reals\"");
    }
  }
  TwoStageInstance out;
  const auto* c = p.cost.linear_coefficients();
  if (!c) bad("/cost", "two-stage instances need a linear cost");
  out.c = *c;
  std::map<std::string, std::size_t> by_id;
  for (const auto& cp : p.constraints) {
    by_id[cp->id()] = out.rows.size();
    out.rows.push_back(std::dynamic_pointer_cast<const CmipRow>(cp));
    out.w.push_back(std::vector<double>(out.rows.back()->entries().size(), 0.0));
  }
  out.p.assign(out.rows.size(), 1.0);
  if (doc.contains("p")) {
    object(doc["p"], "/p");
    for (const auto& [k, v] : doc["p"].items()) {
      std::string q = at("/p", k);
      auto it = by_id.find(k);
      if (it == by_id.end()) bad(q, "unknown constraint id");
      double prob = number(v, q);
      if (prob < 0.0 || prob > 1.0) bad(q, "probability outside [0, 1]");
      out.p[it->second] = prob;
    }
  }
  if (doc.contains("W")) {
    object(doc["W"], "/W");
    for (const auto& [k, v] : doc["W"].items()) {
      std::string q = at("/W", k);
      auto it = by_id.find(k);
      if (it == by_id.end()) bad(q, "unknown constraint id");
      object(v, q);
      const CmipRow& row = *out.rows[it->second];
      for (const auto& [vk, wv] : v.items()) {
        std::string r = at(q, vk);
        std::size_t var = key_index(vk, r);
        auto& entries = row.entries();
        auto pos = std::find_if(entries.begin(), entries.end(), [&](const CmipEntry& e) { return e.var == var; });
        if (pos == entries.end()) bad(r, "weight for a variable outside the row");
        out.w[it->second][std::size_t(pos - entries.begin())] = nonneg(wv, r);
      }
    }
  }
  checked("", [&] {
    out.validate();
    return 0;
  });
  return out;
}

Json two_stage_to_json(const TwoStageInstance& inst) {
  std::vector<ConstraintPtr> cs(inst.rows.begin(), inst.rows.end());
  Json doc = base_to_json(std::vector<Domain>(inst.n(), Domain::reals()), CostModel::linear(inst.c), cs, {});
  Json P = Json::object(), W = Json::object();
  for (std::size_t s = 0; s < inst.size(); ++s) {
    P[inst.rows[s]->id()] = inst.p[s];
    Json w = Json::object();
    for (std::size_t k = 0; k < inst.rows[s]->entries().size(); ++k) {
      if (inst.w[s][k] != 0.0) w[std::to_string(inst.rows[s]->entries()[k].var)] = inst.w[s][k];
    }
    if (!w.empty()) W[inst.rows[s]->id()] = w;
  }
  doc["p"] = P;
  doc["W"] = W;
  return doc;
}

Json trace_to_json(const StepTrace& trace) {
  auto vec = [](const Point& v) {
    Json a = Json::array();
    for (double x : v) a.push_back(real(x));
    return a;
  };
  Json steps = Json::array();
  for (const auto& s : trace.steps) {
    Json raised = Json::array();
    for (const auto& r : s.raised) raised.push_back(Json{{"var", r.var}, {"old", r.old_value}, {"new", r.new_value}});
    steps.push_back(Json{{"constraint", s.constraint},
                         {"id", s.constraint_id},
                         {"beta", s.beta},
                         {"raised", raised},
                         {"cost_before", s.cost_before},
                         {"cost_after", s.cost_after}});
  }
  return Json{{"start", vec(trace.start)}, {"steps", steps}, {"final_x", vec(trace.final_x)}, {"final_mu", vec(trace.final_mu)}};
}

StepTrace trace_from_json(const Json& j) {
  allow(j, "", {"start", "steps", "final_x", "final_mu"});
  StepTrace t;
  auto vec = [&](const char* key) {
    const Json& a = need(j, "", key);
    array(a, at("", key));
    Point out;
    for (std::size_t i = 0; i < a.size(); ++i) out.push_back(nonneg(a[i], at(at("", key), i), true));
    return out;
  };
  t.start = vec("start");
  t.final_x = vec("final_x");
  t.final_mu = vec("final_mu");
  const Json& steps = need(j, "", "steps");
  array(steps, "/steps");
  for (std::size_t i = 0; i < steps.size(); ++i) {
    std::string p = at("/steps", i);
    const Json& s = steps[i];
    allow(s, p, {"constraint", "id", "beta", "raised", "cost_before", "cost_after"});
    StepRecord r;
    r.constraint = index(need(s, p, "constraint"), at(p, "constraint"));
    r.constraint_id = text(need(s, p, "id"), at(p, "id"));
    r.beta = nonneg(need(s, p, "beta"), at(p, "beta"));
    r.cost_before = number(need(s, p, "cost_before"), at(p, "cost_before"));
    r.cost_after = number(need(s, p, "cost_after"), at(p, "cost_after"));
    const Json& raised = need(s, p, "raised");
    array(raised, at(p, "raised"));
    for (std::size_t k = 0; k < raised.size(); ++k) {
      std::string q = at(at(p, "raised"), k);
      allow(raised[k], q, {"var", "old", "new"});
      RaisedVar v;
      v.var = index(need(raised[k], q, "var"), at(q, "var"));
      if (v.var >= t.start.size()) bad(at(q, "var"), "variable index out of range");
      v.old_value = nonneg(need(raised[k], q, "old"), at(q, "old"));
      v.new_value = nonneg(need(raised[k], q, "new"), at(q, "new"));
      r.raised.push_back(v);
    }
    t.steps.push_back(std::move(r));
  }
  return t;
}

UpgradableScenario upgradable_from_json(const Json& doc) {
  allow(doc, "", {"template", "d", "items", "sizes", "base_capacity", "upgrades", "evict_cost", "evict_floor",
                  "discount_rate", "discount_component", "conflicts", "requests"});
  UpgradableScenario s;
  CacheTemplate& t = s.tmpl;
  std::string kind = text(need(doc, "", "template"), "/template");
  if (kind == "capacity-threshold") {
    t.kind = CacheTemplate::Kind::kCapacityThreshold;
  } else if (kind == "conflict-pairs") {
    t.kind = CacheTemplate::Kind::kConflictPairs;
  } else {
    bad("/template", "unknown template '" + kind + "'");
  }
  t.d = index(need(doc, "", "d"), "/d");
  t.items = index(need(doc, "", "items"), "/items");
  if (doc.contains("sizes")) t.sizes = numbers(doc["sizes"], "/sizes");
  t.base_capacity = opt_number(doc, "", "base_capacity", 1.0);
  const Json& ups = need(doc, "", "upgrades");
  array(ups, "/upgrades");
  for (std::size_t i = 0; i < ups.size(); ++i) {
    std::string p = at("/upgrades", i);
    allow(ups[i], p, {"price", "gain"});
    t.upgrades.push_back({nonneg(need(ups[i], p, "price"), at(p, "price")), nonneg(need(ups[i], p, "gain"), at(p, "gain"))});
  }
  if (doc.contains("evict_cost")) t.evict_cost = numbers(doc["evict_cost"], "/evict_cost");
  if (doc.contains("evict_floor")) t.evict_floor = numbers(doc["evict_floor"], "/evict_floor");
  t.discount_rate = opt_number(doc, "", "discount_rate", 0.0);
  if (doc.contains("discount_component")) t.discount_component = index(doc["discount_component"], "/discount_component");
  if (doc.contains("conflicts")) {
    const Json& cs = doc["conflicts"];
    array(cs, "/conflicts");
    for (std::size_t i = 0; i < cs.size(); ++i) {
      std::string p = at("/conflicts", i);
      allow(cs[i], p, {"a", "b", "component", "unlock"});
      CacheTemplate::Conflict c;
      c.a = index(need(cs[i], p, "a"), at(p, "a"));
      c.b = index(need(cs[i], p, "b"), at(p, "b"));
      if (cs[i].contains("component")) c.component = index(cs[i]["component"], at(p, "component"));
      c.unlock = opt_number(cs[i], p, "unlock", kUnbounded, true);
      t.conflicts.push_back(c);
    }
  }
  const Json& reqs = need(doc, "", "requests");
  array(reqs, "/requests");
  for (std::size_t i = 0; i < reqs.size(); ++i) {
    std::size_t r = index(reqs[i], at("/requests", i));
    if (r >= t.items) bad(at("/requests", i), "request for an unknown item");
    s.requests.push_back(r);
  }
  checked("", [&] {
    t.validate();
    return 0;
  });
  return s;
}

Json upgradable_to_json(const UpgradableScenario& s) {
  const CacheTemplate& t = s.tmpl;
  Json ups = Json::array();
  for (const auto& u : t.upgrades) ups.push_back(Json{{"price", u.price}, {"gain", u.gain}});
  Json doc{{"template", t.kind == CacheTemplate::Kind::kCapacityThreshold ? "capacity-threshold" : "conflict-pairs"},
           {"d", t.d},
           {"items", t.items}};
  if (!t.sizes.empty()) doc["sizes"] = t.sizes;
  doc["base_capacity"] = t.base_capacity;
  doc["upgrades"] = ups;
  if (!t.evict_cost.empty()) doc["evict_cost"] = t.evict_cost;
  if (!t.evict_floor.empty()) doc["evict_floor"] = t.evict_floor;
  if (t.discount_rate != 0.0) {
    doc["discount_rate"] = t.discount_rate;
    doc["discount_component"] = t.discount_component;
  }
  if (!t.conflicts.empty()) {
    Json cs = Json::array();
    for (const auto& c : t.conflicts) {
      Json o{{"a", c.a}, {"b", c.b}};
      if (c.component) o["component"] = *c.component;
      o["unlock"] = real(c.unlock);
      cs.push_back(o);
    }
    doc["conflicts"] = cs;
  }
  doc["requests"] = s.requests;
  return doc;
}

namespace {

// Splits the next request line into exactly `fields` tokens.
template <typename Fn>
void for_lines(std::istream& in, std::size_t fields, Fn&& fn) {
  std::string line;
  std::size_t no = 0;
  double last = -kUnbounded;
  while (std::getline(in, line)) {
    ++no;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ss(line);
    std::vector<std::string> tok;
    for (std::string t; ss >> t;) tok.push_back(t);
    if (tok.empty()) continue;
    if (tok.size() != fields) {
      throw ParseError("", "expected " + std::to_string(fields) + " fields, got " + std::to_string(tok.size()), no);
    }
    std::vector<double> v;
    for (const auto& t : tok) {
      std::size_t used = 0;
      double x = 0.0;
      try {
        x = std::stod(t, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != t.size() || !std::isfinite(x) || x < 0.0) {
        throw ParseError("", "'" + t + "' is not a non-negative number", no);
      }
      v.push_back(x);
    }
    if (!(v[0] > last)) throw ParseError("", "request times must be strictly increasing", no);
    last = v[0];
    fn(v, no);
  }
}

std::size_t whole(double v, std::size_t line, const char* what) {
  if (v != std::floor(v) || v > 1e15) throw ParseError("", std::string(what) + " must be a non-negative integer", line);
  return static_cast<std::size_t>(v);
}

}  // namespace

std::vector<ConnectionRequest> parse_connection_trace(std::istream& in) {
  std::vector<ConnectionRequest> out;
  for_lines(in, 4, [&](const std::vector<double>& v, std::size_t line) {
    ConnectionRequest r{whole(v[1], line, "node_u"), whole(v[2], line, "node_w"), v[3]};
    if (r.u == r.w) throw ParseError("", "a connection needs two distinct nodes", line);
    out.push_back(r);
  });
  return out;
}

FileTrace parse_file_trace(std::istream& in) {
  FileTrace out;
  std::vector<char> seen;
  for_lines(in, 4, [&](const std::vector<double>& v, std::size_t line) {
    std::size_t f = whole(v[1], line, "file");
    if (f > 1'000'000) throw ParseError("", "file id too large", line);
    if (!(v[2] > 0.0)) throw ParseError("", "file size must be > 0", line);
    if (f >= seen.size()) {
      seen.resize(f + 1, 0);
      out.sizes.resize(f + 1, 1.0);
      out.costs.resize(f + 1, 1.0);
    }
    if (seen[f] && (out.sizes[f] != v[2] || out.costs[f] != v[3])) {
      throw ParseError("", "file " + std::to_string(f) + " changes size or cost", line);
    }
    seen[f] = 1;
    out.sizes[f] = v[2];
    out.costs[f] = v[3];
    out.requests.push_back(f);
  });
  return out;
}

Json to_json(const LocalRatioReport& r) {
  return Json{{"passed", r.passed()},
              {"steps", r.steps},
              {"delta", r.delta},
              {"probes", r.probes},
              {"property_a", Json{{"pass", r.property_a}, {"max_gap", r.max_telescoping_gap}}},
              {"property_b", Json{{"pass", r.property_b}, {"min_slack", real(r.min_slack_b)}}},
              {"beta_chain", Json{{"pass", r.chain}, {"min_slack", real(r.min_chain_slack)}}},
              {"property_c", Json{{"pass", r.property_c}}},
              {"linear_closed_form", Json{{"pass", r.linear_closed_form}, {"max_gap", r.max_closed_form_gap}}},
              {"conclusion",
               Json{{"pass", r.conclusion},
                    {"lhs", r.conclusion_lhs},
                    {"rhs", r.conclusion_rhs},
                    {"greedy_cost", r.greedy_cost},
                    {"opt_cost", r.opt_cost}}},
              {"weight_view", Json{{"checked", r.weight_view_checked}, {"pass", r.weight_view}}}};
}

}  // namespace monocover
