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

// monocover command-line front end.
//
// Exit codes: 0 success, 1 malformed input, 2 infeasible instance,
// 3 oracle unavailable (--verify), 4 other solver failure, 64 usage error.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
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

namespace fs = std::filesystem;
using namespace monocover;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitInfeasible = 2;
constexpr int kExitOracle = 3;
constexpr int kExitFailure = 4;
constexpr int kExitUsage = 64;

// Finite numbers as-is; infinities as the "inf" strings the input accepts.
Json num(double v) {
  if (std::isnan(v)) return nullptr;
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

Json nums(const std::vector<double>& v) {
  Json a = Json::array();
  for (double d : v) a.push_back(num(d));
  return a;
}

double ratio_of(double cost, double opt) {
  if (opt > 0.0) return cost / opt;
  return cost <= 1e-12 ? 1.0 : kUnbounded;
}

void print_text(const Json& j, const std::string& prefix = "") {
  for (auto it = j.begin(); it != j.end(); ++it) {
    const Json& v = it.value();
    std::string key = prefix + it.key();
    if (v.is_object()) {
      print_text(v, key + ".");
    } else if (v.is_string()) {
      std::cout << key << ": " << v.get<std::string>() << "\n";
    } else {
      std::cout << key << ": " << v.dump() << "\n";
    }
  }
}

void emit(const Json& report, bool json) {
  if (json) {
    std::cout << report.dump(2) << "\n";
  } else {
    print_text(report);
  }
}

int report_error(const std::string& kind, const std::string& message, bool json, int code,
                 const Json& extra = Json::object()) {
  if (json) {
    Json e = Json::object();
    e["error"] = kind;
    e["message"] = message;
    for (auto it = extra.begin(); it != extra.end(); ++it) e[it.key()] = it.value();
    e["exit_code"] = code;
    std::cout << e.dump(2) << "\n";
  }
  std::cerr << "monocover: " << kind << ": " << message << "\n";
  return code;
}

// Maps a library failure to an exit code and a diagnostic.
int handle(const std::exception& ex, bool json) {
  if (const auto* pe = dynamic_cast<const ParseError*>(&ex)) {
    Json extra = Json::object();
    if (pe->line()) {
      extra["line"] = pe->line();
    } else {
      extra["pointer"] = pe->pointer().empty() ? "/" : pe->pointer();
    }
    return report_error("parse", pe->what(), json, kExitInput, extra);
  }
  if (const auto* e = dynamic_cast<const Error*>(&ex)) {
    switch (e->code()) {
      case ErrorCode::kInfeasible:
        return report_error("infeasible", e->what(), json, kExitInfeasible);
      case ErrorCode::kOracleUnavailable:
        return report_error("oracle-unavailable", e->what(), json, kExitOracle);
      case ErrorCode::kParse:
      case ErrorCode::kInvalidArgument:
      case ErrorCode::kDimensionMismatch:
      case ErrorCode::kDomain:
      case ErrorCode::kUnsupported:
        return report_error("invalid-input", e->what(), json, kExitInput);
      default:
        return report_error(error_code_name(e->code()), e->what(), json, kExitFailure);
    }
  }
  return report_error("internal", ex.what(), json, kExitFailure);
}

bool has_extension(const std::string& path, std::initializer_list<const char*> exts) {
  std::string ext = fs::path(path).extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char ch) { return std::tolower(ch); });
  return std::any_of(exts.begin(), exts.end(), [&](const char* e) { return ext == e; });
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::kInvalidArgument, "cannot open " + path);
  return in;
}

// An instance file in any accepted format.
struct Loaded {
  std::string problem;  // "monotone-covering", "vertex-cover" or "two-stage"
  std::optional<Instance> instance;
  std::optional<TwoStageInstance> two_stage;
  Json meta = Json::object();
};

Loaded load(const std::string& path, const std::string& format) {
  Loaded out;
  bool dimacs = format == "dimacs" || (format == "auto" && has_extension(path, {".col", ".dimacs"}));
  if (dimacs) {
    std::ifstream in = open_input(path);
    Graph g = parse_dimacs(in);
    out.problem = "vertex-cover";
    out.instance = vertex_cover_to_instance(g);
    return out;
  }
  Json doc = read_json_file(path);
  if (is_two_stage(doc)) {
    out.problem = "two-stage";
    out.two_stage = two_stage_from_json(doc);
    return out;
  }
  InstanceDocument d = instance_from_json(doc);
  out.problem = "monotone-covering";
  out.instance = std::move(d.instance);
  out.meta = std::move(d.meta);
  return out;
}

StepSizePolicy policy_from(const std::string& name) {
  if (name == "maximal") return StepSizePolicy::maximal();
  if (name == "structural") return StepSizePolicy::structural();
  return StepSizePolicy::minimal();
}

void write_trace(const std::string& path, const StepTrace& trace) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::kInvalidArgument, "cannot write " + path);
  out << trace_to_json(trace).dump(2) << "\n";
}

// ---------------------------------------------------------------- solve

struct SolveArgs {
  std::string file;
  std::string format = "auto";
  std::string policy = "minimal";
  std::string order = "round-robin";
  std::string engine = "auto";
  std::string trace_out;
  bool verify = false;
  bool local_ratio = false;
  std::size_t probes = 100;
  std::size_t budget = 10'000'000;
  std::uint64_t seed = 0;
  bool json = false;
  bool policy_set = false;
  bool order_set = false;
};

Json verify_block(double cost, double opt, std::size_t delta) {
  Json v = Json::object();
  v["opt"] = num(opt);
  v["ratio"] = num(ratio_of(cost, opt));
  v["delta"] = delta;
  v["within_bound"] = cost <= double(delta) * opt + 1e-9;
  return v;
}

Json solve_two_stage(const SolveArgs& a, const TwoStageInstance& ts) {
  ts.validate();
  ProbabilisticResult r = solve_probabilistic_cmip(ts);
  if (!a.trace_out.empty()) write_trace(a.trace_out, r.trace);
  Json out = Json::object();
  out["problem"] = "two-stage";
  out["engine"] = "probabilistic-cmip";
  out["n"] = ts.n();
  out["constraints"] = ts.size();
  out["delta"] = ts.delta();
  out["steps"] = r.trace.steps.size();
  out["cost"] = num(r.cost);
  out["ops"] = r.ops;
  Json xs = Json::array();
  for (const auto& row : r.solution.values) xs.push_back(nums(row));
  out["first_stage"] = xs;
  if (a.verify) {
    TwoStageOptimum opt = two_stage_opt(ts);
    out["verify"] = verify_block(r.cost, opt.cost, ts.delta());
  }
  return out;
}

Json solve_instance(const SolveArgs& a, const Loaded& L) {
  const Instance& inst = *L.instance;
  bool use_cmip = a.engine == "cmip" ||
                  (a.engine == "auto" && !a.policy_set && !a.order_set && is_cmip_instance(inst) &&
                   inst.size() > 0);
  if (a.engine == "cmip" && !is_cmip_instance(inst)) {
    fail(ErrorCode::kUnsupported, "--engine cmip needs CMIP rows over real domains with a linear cost");
  }
  Json out = Json::object();
  out["problem"] = L.problem;
  out["engine"] = use_cmip ? "cmip" : "generic";
  StepTrace trace;
  Point solution, x;
  double cost = 0.0;
  Json extra = Json::object();
  if (use_cmip) {
    CmipResult r = solve_cmip(inst);
    trace = std::move(r.trace);
    solution = std::move(r.solution);
    x = std::move(r.x);
    cost = r.cost;
    Json counters = Json::object();
    counters["preprocessing"] = r.counters.preprocessing;
    counters["stepsize"] = r.counters.stepsize_ops;
    counters["step"] = r.counters.step_ops;
    counters["total"] = r.counters.total();
    extra["counters"] = counters;
    std::size_t worst = 0;
    for (std::size_t i = 0; i < inst.size(); ++i) {
      std::size_t deps = inst.constraint(i).deps().size();
      if (deps) worst = std::max(worst, (r.steps_per_row[i] + deps - 1) / deps);
    }
    extra["max_steps_per_dep"] = worst;
  } else {
    SolveOptions opts;
    opts.policy = policy_from(a.policy);
    opts.order = a.order == "sequential" ? ConstraintOrder::kSequential : ConstraintOrder::kRoundRobin;
    SolveResult r = solve(inst, opts);
    trace = std::move(r.trace);
    solution = std::move(r.mu);
    x = std::move(r.x);
    cost = r.cost;
    out["policy"] = a.policy;
    out["order"] = a.order;
  }
  if (!a.trace_out.empty()) write_trace(a.trace_out, trace);
  out["n"] = inst.n();
  out["constraints"] = inst.size();
  out["delta"] = inst.delta();
  out["steps"] = trace.steps.size();
  out["cost"] = num(cost);
  out["solution"] = nums(solution);
  out["x"] = nums(x);
  for (auto it = extra.begin(); it != extra.end(); ++it) out[it.key()] = it.value();
  std::optional<OracleResult> opt;
  if (a.verify) {
    OracleOptions o;
    o.budget = a.budget;
    opt = exact_opt(inst, o);
    if (!opt->exact) fail(ErrorCode::kOracleUnavailable, "oracle value is not a certificate for this instance");
    out["verify"] = verify_block(cost, opt->value, inst.delta());
  }
  if (a.local_ratio) {
    LocalRatioReport lr = local_ratio_report(inst, trace, a.probes, a.seed, opt ? &opt->x : nullptr);
    out["local_ratio"] = to_json(lr);
  }
  return out;
}

int cmd_solve(const SolveArgs& a) {
  try {
    Loaded L = load(a.file, a.format);
    Json out = L.two_stage ? solve_two_stage(a, *L.two_stage) : solve_instance(a, L);
    emit(out, a.json);
    return kExitOk;
  } catch (const std::exception& ex) {
    return handle(ex, a.json);
  }
}

// ---------------------------------------------------------------- online

struct OnlineArgs {
  std::string file;
  std::string problem = "paging";
  double k = 0.0;
  std::optional<std::size_t> d;
  std::uint64_t seed = 0;
  bool events = false;
  bool json = false;
};

Json events_json(const std::vector<CacheEvent>& events,
                 const std::vector<std::pair<std::size_t, std::size_t>>* names = nullptr) {
  Json a = Json::array();
  for (const CacheEvent& e : events) {
    Json j = Json::object();
    j["time"] = e.time;
    j["hit"] = e.hit;
    Json ev = Json::array();
    for (std::size_t s : e.evicted) {
      if (names) {
        ev.push_back(Json::array({(*names)[s].first, (*names)[s].second}));
      } else {
        ev.push_back(s);
      }
    }
    j["evicted"] = ev;
    j["charge"] = num(e.charge);
    a.push_back(j);
  }
  return a;
}

void add_competitive(Json& out, double cost, std::optional<double> opt, std::string method,
                     std::size_t delta) {
  if (!opt) {
    out["opt"] = nullptr;
    out["opt_method"] = "unavailable";
    return;
  }
  out["opt"] = num(*opt);
  out["opt_method"] = method;
  out["ratio"] = num(ratio_of(cost, *opt));
  out["within_bound"] = cost <= double(delta) * *opt + 1e-9;
}

std::size_t require_k(double k) {
  if (!(k >= 1.0) || k != std::floor(k)) fail(ErrorCode::kInvalidArgument, "--k must be a positive integer");
  return std::size_t(k);
}

Json online_paging(const OnlineArgs& a) {
  std::ifstream in = open_input(a.file);
  FileTrace ft = parse_file_trace(in);
  if (!(a.k > 0.0)) fail(ErrorCode::kInvalidArgument, "--k must be > 0");
  CachingResult r = simulate_paging(ft.requests, a.k, ft.sizes, ft.costs);
  bool unit = std::all_of(ft.sizes.begin(), ft.sizes.end(), [](double s) { return s == 1.0; }) &&
              std::all_of(ft.costs.begin(), ft.costs.end(), [](double c) { return c == 1.0; });
  Json out = Json::object();
  out["problem"] = "paging";
  out["k"] = num(a.k);
  out["seed"] = a.seed;
  out["requests"] = ft.requests.size();
  out["faults"] = r.faults;
  out["evictions"] = r.evictions;
  out["cost"] = num(r.cost);
  out["delta"] = r.delta;
  out["steps"] = r.steps;
  std::optional<double> opt;
  std::string method;
  if (unit && a.k == std::floor(a.k)) {
    OfflineCaching b = belady(ft.requests, std::size_t(a.k));
    opt = b.cost;
    method = "belady";
    out["opt_faults"] = b.faults;
  } else {
    try {
      opt = caching_opt(ft.requests, a.k, ft.sizes, ft.costs);
      method = "exhaustive";
    } catch (const OracleUnavailableError&) {
    }
  }
  add_competitive(out, r.cost, opt, method, r.delta);
  if (a.events) out["events"] = events_json(r.events);
  return out;
}

Json online_connection(const OnlineArgs& a) {
  std::ifstream in = open_input(a.file);
  std::vector<ConnectionRequest> reqs = parse_connection_trace(in);
  std::size_t k = require_k(a.k);
  CachingResult r = simulate_connection_caching(reqs, k);
  auto names = distinct_connections(reqs);
  Json out = Json::object();
  out["problem"] = "connection";
  out["k"] = k;
  out["seed"] = a.seed;
  out["requests"] = reqs.size();
  out["connections"] = names.size();
  out["evictions"] = r.evictions;
  out["cost"] = num(r.cost);
  out["delta"] = r.delta;
  out["steps"] = r.steps;
  std::optional<double> opt;
  try {
    opt = connection_caching_opt(reqs, k);
  } catch (const OracleUnavailableError&) {
  }
  add_competitive(out, r.cost, opt, "exhaustive", r.delta);
  if (a.events) out["events"] = events_json(r.events, &names);
  return out;
}

Json online_upgradable(const OnlineArgs& a) {
  UpgradableScenario s = upgradable_from_json(read_json_file(a.file));
  if (a.d && *a.d != s.tmpl.d) {
    fail(ErrorCode::kInvalidArgument, "--d " + std::to_string(*a.d) + " disagrees with the scenario's d = " +
                                          std::to_string(s.tmpl.d));
  }
  UpgradableResult r = simulate_upgradable_caching(s.requests, s.tmpl.model());
  Json out = Json::object();
  out["problem"] = "upgradable";
  out["d"] = s.tmpl.d;
  out["seed"] = a.seed;
  out["requests"] = s.requests.size();
  out["y"] = nums(r.y);
  out["evictions"] = r.evictions.size();
  out["eviction_cost"] = num(r.eviction_cost);
  out["cost"] = num(r.total);
  out["delta"] = r.delta;
  out["steps"] = r.steps;
  std::optional<double> opt;
  try {
    opt = upgradable_opt(s.requests, s.tmpl);
  } catch (const OracleUnavailableError&) {
  }
  add_competitive(out, r.total, opt, "exhaustive", r.delta);
  if (a.events) {
    Json ev = Json::array();
    for (const Eviction& e : r.evictions) {
      ev.push_back(Json::object({{"time", e.time}, {"item", e.item}, {"charge", num(e.charge)}}));
    }
    out["events"] = ev;
  }
  return out;
}

Json online_segments(const OnlineArgs& a) {
  std::ifstream in = open_input(a.file);
  FileTrace ft = parse_file_trace(in);
  std::size_t k = require_k(a.k);
  std::vector<std::size_t> sizes;
  for (double s : ft.sizes) {
    if (s != std::floor(s) || s < 1.0) fail(ErrorCode::kInvalidArgument, "segment counts must be positive integers");
    sizes.push_back(std::size_t(s));
  }
  SegmentCachingResult r = simulate_segment_caching(ft.requests, sizes, ft.costs, k);
  Json out = Json::object();
  out["problem"] = "segments";
  out["k"] = k;
  out["seed"] = a.seed;
  out["requests"] = ft.requests.size();
  double segs = 0.0;
  for (double e : r.evicted) segs += e;
  out["evicted_segments"] = num(segs);
  out["cost"] = num(r.cost);
  out["delta"] = r.delta;
  out["steps"] = r.steps;
  std::optional<double> opt;
  try {
    OracleResult o = exact_opt(r.instance());
    if (o.exact) opt = o.value;
  } catch (const OracleUnavailableError&) {
  }
  add_competitive(out, r.cost, opt, "exhaustive", r.delta);
  if (a.events) out["evicted"] = nums(r.evicted);
  return out;
}

int cmd_online(const OnlineArgs& a) {
  try {
    Json out;
    if (a.problem == "paging") {
      out = online_paging(a);
    } else if (a.problem == "connection") {
      out = online_connection(a);
    } else if (a.problem == "upgradable") {
      out = online_upgradable(a);
    } else {
      out = online_segments(a);
    }
    emit(out, a.json);
    return kExitOk;
  } catch (const std::exception& ex) {
    return handle(ex, a.json);
  }
}

// ---------------------------------------------------------------- randomized

struct RandomizedArgs {
  std::string file;
  std::string format = "auto";
  std::string variant = "stateless";
  std::string correlation = "independent";
  std::size_t trials = 1000;
  std::uint64_t seed = 0;
  std::optional<double> p;
  std::optional<double> opt;
  bool json = false;
};

int cmd_randomized(const RandomizedArgs& a) {
  try {
    Loaded L = load(a.file, a.format);
    if (!L.instance) fail(ErrorCode::kUnsupported, "randomized: two-stage documents are not supported");
    // Vertex cover picks are 0/1; the stateless variant needs that domain.
    if (L.problem == "vertex-cover") {
      L.instance = Instance(std::vector<Domain>(L.instance->n(), Domain::binary()), L.instance->cost(),
                            L.instance->constraints());
    }
    const Instance& inst = *L.instance;
    RandomizedOptions opts;
    opts.variant = a.variant == "rstep" ? RandomVariant::kRstep : RandomVariant::kStateless;
    opts.correlation = a.correlation == "single-pick" ? Correlation::kSinglePick : Correlation::kIndependent;
    if (a.p) {
      if (opts.variant != RandomVariant::kRstep) fail(ErrorCode::kInvalidArgument, "--p applies to --variant rstep");
      opts.p.assign(inst.n(), *a.p);
    }
    MonteCarloReport r = montecarlo_ratio(inst, opts, a.trials, a.seed, a.opt);
    Json out = Json::object();
    out["problem"] = L.problem;
    out["variant"] = variant_name(r.variant);
    out["correlation"] = a.correlation;
    out["trials"] = r.trials;
    out["seed"] = r.seed;
    out["mean"] = num(r.mean);
    out["standard_error"] = num(r.standard_error);
    out["min_cost"] = num(r.min_cost);
    out["max_cost"] = num(r.max_cost);
    out["opt"] = num(r.opt);
    out["ratio"] = num(r.ratio);
    out["delta"] = r.delta;
    out["within_bound"] = r.within_bound;
    emit(out, a.json);
    return kExitOk;
  } catch (const std::exception& ex) {
    return handle(ex, a.json);
  }
}

// ---------------------------------------------------------------- bench

struct BenchArgs {
  std::string dir;
  std::size_t repeat = 1;
  bool families = false;
  std::vector<std::size_t> sizes{100, 1000, 10000};
  std::uint64_t seed = 0;
  std::size_t budget = 200'000;
  bool json = false;
};

template <class F>
double timed(std::size_t repeat, F&& body) {
  double total = 0.0;
  for (std::size_t r = 0; r < repeat; ++r) {
    auto t0 = std::chrono::steady_clock::now();
    body();
    total += std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }
  return total / double(repeat);
}

// Oracle value when it is exact and within budget.
std::optional<double> try_opt(const Instance& inst, std::size_t budget) {
  try {
    OracleOptions o;
    o.budget = budget;
    OracleResult r = exact_opt(inst, o);
    if (r.feasible && r.exact) return r.value;
  } catch (const OracleUnavailableError&) {
  }
  return std::nullopt;
}

Json bench_fixture(const fs::path& path, const BenchArgs& a) {
  Json row = Json::object();
  row["fixture"] = path.filename().string();
  std::string p = path.string();
  if (!has_extension(p, {".json", ".col", ".dimacs"})) {
    row["kind"] = "other";
    row["status"] = "skipped";
    return row;
  }
  try {
    if (has_extension(p, {".json"})) {
      Json doc = read_json_file(p);
      if (doc.is_object() && doc.contains("template")) {
        UpgradableScenario s = upgradable_from_json(doc);
        CacheModel model = s.tmpl.model();
        UpgradableResult r;
        row["kind"] = "upgradable";
        row["seconds"] = timed(a.repeat, [&] { r = simulate_upgradable_caching(s.requests, model); });
        row["delta"] = r.delta;
        row["steps"] = r.steps;
        row["cost"] = num(r.total);
        double opt = upgradable_opt(s.requests, s.tmpl);
        row["opt"] = num(opt);
        row["ratio"] = num(ratio_of(r.total, opt));
        row["within_bound"] = r.total <= double(r.delta) * opt + 1e-9;
        row["status"] = "ok";
        return row;
      }
    }
    Loaded L = load(p, "auto");
    row["kind"] = L.problem;
    if (L.two_stage) {
      const TwoStageInstance& ts = *L.two_stage;
      ts.validate();
      ProbabilisticResult r;
      row["seconds"] = timed(a.repeat, [&] { r = solve_probabilistic_cmip(ts); });
      row["n"] = ts.n();
      row["constraints"] = ts.size();
      row["delta"] = ts.delta();
      row["steps"] = r.trace.steps.size();
      row["ops"] = r.ops;
      row["cost"] = num(r.cost);
      try {
        double opt = two_stage_opt(ts).cost;
        row["opt"] = num(opt);
        row["ratio"] = num(ratio_of(r.cost, opt));
        row["within_bound"] = r.cost <= double(ts.delta()) * opt + 1e-9;
      } catch (const OracleUnavailableError&) {
        row["opt"] = nullptr;
      }
      row["status"] = "ok";
      return row;
    }
    const Instance& inst = *L.instance;
    row["n"] = inst.n();
    row["constraints"] = inst.size();
    row["delta"] = inst.delta();
    double cost = 0.0;
    if (is_cmip_instance(inst) && inst.size() > 0) {
      CmipResult r;
      row["engine"] = "cmip";
      row["seconds"] = timed(a.repeat, [&] { r = solve_cmip(inst, {CmipImpl::kHeap, false}); });
      row["steps"] = r.steps;
      row["ops"] = r.counters.total();
      double lg = std::max(1.0, std::log2(double(inst.delta())));
      row["ops_per_N_log_delta"] = num(double(r.counters.total()) / (double(inst.total_deps()) * lg));
      cost = r.cost;
    } else {
      SolveResult r;
      row["engine"] = "generic";
      row["seconds"] = timed(a.repeat, [&] { r = solve(inst); });
      row["steps"] = r.trace.steps.size();
      cost = r.cost;
    }
    row["cost"] = num(cost);
    std::optional<double> opt = try_opt(inst, a.budget);
    row["opt"] = opt ? num(*opt) : Json(nullptr);
    if (opt) {
      row["ratio"] = num(ratio_of(cost, *opt));
      row["within_bound"] = cost <= double(inst.delta()) * *opt + 1e-9;
    }
    row["status"] = "ok";
  } catch (const std::exception& ex) {
    row["status"] = "error";
    row["error"] = ex.what();
  }
  return row;
}

Json bench_families(const BenchArgs& a) {
  Json fam = Json::object();
  CounterFamilyReport c = cmip_counter_family(a.sizes, 8, a.seed);
  Json cm = Json::object();
  Json pts = Json::array();
  for (const CounterPoint& p : c.points) {
    pts.push_back(Json::object({{"n", p.n},
                                {"N", p.N},
                                {"delta", p.delta},
                                {"ops", p.ops},
                                {"steps", p.steps},
                                {"ops_per_N_log_delta", num(p.normalized)},
                                {"seconds", p.seconds}}));
  }
  cm["points"] = pts;
  cm["C"] = num(c.C);
  cm["slope"] = num(c.slope);
  cm["max_pair_slope"] = num(c.max_pair_slope);
  cm["threshold"] = c.threshold;
  cm["ok"] = c.ok();
  fam["cmip"] = cm;
  Json fl = Json::array();
  for (const FacilityCounterPoint& p : facility_counter_family(a.sizes, 3, a.seed)) {
    fl.push_back(Json::object({{"customers", p.customers},
                               {"facilities", p.facilities},
                               {"pairs", p.pairs},
                               {"touches", p.touches},
                               {"bound", 2 * p.pairs},
                               {"ok", p.ok()},
                               {"seconds", p.seconds}}));
  }
  fam["facility"] = fl;
  return fam;
}

std::string cell(const Json& row, const char* key) {
  if (!row.contains(key) || row[key].is_null()) return "-";
  const Json& v = row[key];
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_float()) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", v.get<double>());
    return buf;
  }
  return v.dump();
}

void print_bench_table(const Json& out) {
  const char* cols[] = {"fixture", "kind", "status", "delta", "steps", "ops", "cost", "opt", "ratio", "seconds"};
  std::printf("%-28s %-18s %-8s %6s %8s %10s %10s %10s %8s %10s\n", cols[0], cols[1], cols[2], cols[3],
              cols[4], cols[5], cols[6], cols[7], cols[8], cols[9]);
  for (const Json& row : out["fixtures"]) {
    std::printf("%-28s %-18s %-8s %6s %8s %10s %10s %10s %8s %10s\n", cell(row, "fixture").c_str(),
                cell(row, "kind").c_str(), cell(row, "status").c_str(), cell(row, "delta").c_str(),
                cell(row, "steps").c_str(), cell(row, "ops").c_str(), cell(row, "cost").c_str(),
                cell(row, "opt").c_str(), cell(row, "ratio").c_str(), cell(row, "seconds").c_str());
    if (row.contains("error")) std::printf("  error: %s\n", row["error"].get<std::string>().c_str());
  }
  if (!out.contains("families")) return;
  const Json& cm = out["families"]["cmip"];
  std::printf("\ncmip family: C = %s, slope = %s, max pair slope = %s (threshold %s) %s\n",
              cell(cm, "C").c_str(), cell(cm, "slope").c_str(), cell(cm, "max_pair_slope").c_str(),
              cell(cm, "threshold").c_str(), cm["ok"].get<bool>() ? "ok" : "FAIL");
  for (const Json& p : cm["points"]) {
    std::printf("  n=%-7s N=%-8s ops=%-10s ops/(N log2 delta)=%s\n", cell(p, "n").c_str(), cell(p, "N").c_str(),
                cell(p, "ops").c_str(), cell(p, "ops_per_N_log_delta").c_str());
  }
  std::printf("facility family:\n");
  for (const Json& p : out["families"]["facility"]) {
    std::printf("  customers=%-7s touches=%-8s bound=%-8s %s\n", cell(p, "customers").c_str(),
                cell(p, "touches").c_str(), cell(p, "bound").c_str(), p["ok"].get<bool>() ? "ok" : "FAIL");
  }
}

int cmd_bench(const BenchArgs& a) {
  try {
    if (!fs::is_directory(a.dir)) fail(ErrorCode::kInvalidArgument, a.dir + " is not a directory");
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(a.dir)) {
      if (e.is_regular_file()) files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());
    Json out = Json::object();
    out["directory"] = a.dir;
    out["repeat"] = a.repeat;
    Json rows = Json::array();
    for (const fs::path& f : files) rows.push_back(bench_fixture(f, a));
    out["fixtures"] = rows;
    if (a.families) out["families"] = bench_families(a);
    if (a.json) {
      std::cout << out.dump(2) << "\n";
    } else {
      print_bench_table(out);
    }
    return kExitOk;
  } catch (const std::exception& ex) {
    return handle(ex, a.json);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Greedy approximation for monotone covering problems"};
  app.require_subcommand(1);

  SolveArgs sa;
  auto* solve_cmd = app.add_subcommand("solve", "Solve an instance file");
  solve_cmd->add_option("file", sa.file, "Instance (JSON, two-stage JSON, or DIMACS)")->required();
  solve_cmd->add_option("--format", sa.format, "Input format")
      ->check(CLI::IsMember({"auto", "json", "dimacs"}));
  auto* policy_opt = solve_cmd->add_option("--policy", sa.policy, "Step size policy")
                         ->check(CLI::IsMember({"minimal", "maximal", "structural"}));
  auto* order_opt = solve_cmd->add_option("--order", sa.order, "Constraint visiting order")
                        ->check(CLI::IsMember({"round-robin", "sequential"}));
  solve_cmd->add_option("--engine", sa.engine, "auto picks the CMIP engine for plain CMIP input")
      ->check(CLI::IsMember({"auto", "generic", "cmip"}));
  solve_cmd->add_option("--trace", sa.trace_out, "Write the step trace as JSON");
  solve_cmd->add_flag("--verify", sa.verify, "Compare against the exact oracle");
  solve_cmd->add_option("--budget", sa.budget, "Oracle search-node budget");
  solve_cmd->add_flag("--local-ratio", sa.local_ratio, "Report the local-ratio decomposition");
  solve_cmd->add_option("--probes", sa.probes, "Probe points for --local-ratio");
  solve_cmd->add_option("--seed", sa.seed, "Seed for probe sampling");
  solve_cmd->add_flag("--json", sa.json, "JSON output");

  OnlineArgs oa;
  auto* online_cmd = app.add_subcommand("online", "Replay an online caching trace");
  online_cmd->add_option("trace", oa.file, "Trace file (text, or JSON for upgradable)")->required();
  online_cmd->add_option("--problem", oa.problem, "Problem")
      ->check(CLI::IsMember({"paging", "connection", "upgradable", "segments"}));
  online_cmd->add_option("--k", oa.k, "Cache capacity");
  online_cmd->add_option("--d", oa.d, "Expected number of upgrade components");
  online_cmd->add_option("--seed", oa.seed, "Recorded in the report; replay is deterministic");
  online_cmd->add_flag("--events", oa.events, "Include per-request events");
  online_cmd->add_flag("--json", oa.json, "JSON output");

  RandomizedArgs ra;
  auto* rand_cmd = app.add_subcommand("randomized", "Monte Carlo run of the randomized variants");
  rand_cmd->add_option("file", ra.file, "Instance file")->required();
  rand_cmd->add_option("--format", ra.format, "Input format")->check(CLI::IsMember({"auto", "json", "dimacs"}));
  rand_cmd->add_option("--variant", ra.variant, "Variant")->check(CLI::IsMember({"stateless", "rstep"}));
  rand_cmd->add_option("--correlation", ra.correlation, "Draw correlation")
      ->check(CLI::IsMember({"independent", "single-pick"}));
  rand_cmd->add_option("--trials", ra.trials, "Trials")->check(CLI::PositiveNumber);
  rand_cmd->add_option("--seed", ra.seed, "Seed");
  rand_cmd->add_option("--p", ra.p, "Raise probability for every variable (rstep)")->check(CLI::Range(0.0, 1.0));
  rand_cmd->add_option("--opt", ra.opt, "Known optimum; skips the oracle");
  rand_cmd->add_flag("--json", ra.json, "JSON output");

  BenchArgs ba;
  auto* bench_cmd = app.add_subcommand("bench", "Run every fixture in a directory");
  bench_cmd->add_option("dir", ba.dir, "Fixture directory")->required();
  bench_cmd->add_option("--repeat", ba.repeat, "Timed repetitions per fixture")->check(CLI::PositiveNumber);
  bench_cmd->add_flag("--families", ba.families, "Also run the generated counter families");
  bench_cmd->add_option("--sizes", ba.sizes, "Family sizes")->delimiter(',');
  bench_cmd->add_option("--seed", ba.seed, "Family seed");
  bench_cmd->add_option("--budget", ba.budget, "Oracle search-node budget per fixture");
  bench_cmd->add_flag("--json", ba.json, "JSON output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }
  sa.policy_set = policy_opt->count() > 0;
  sa.order_set = order_opt->count() > 0;

  if (*solve_cmd) return cmd_solve(sa);
  if (*online_cmd) return cmd_online(oa);
  if (*rand_cmd) return cmd_randomized(ra);
  return cmd_bench(ba);
}
