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

#include "monocover/classic.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <sstream>
#include <string>

namespace monocover {

void FacilityInstance::validate() const {
  for (double f : opening) {
    if (!(f >= 0.0) || std::isinf(f)) fail(ErrorCode::kInvalidArgument, "opening costs must be >= 0");
  }
  for (std::size_t i = 0; i < customers.size(); ++i) {
    if (customers[i].empty()) {
      fail(ErrorCode::kInvalidArgument, "customer " + std::to_string(i) + " has no eligible facility");
    }
    std::vector<char> seen(opening.size(), 0);
    for (const auto& o : customers[i]) {
      if (o.facility >= opening.size() || seen[o.facility]) {
        fail(ErrorCode::kInvalidArgument,
             "customer " + std::to_string(i) + " lists an unknown or repeated facility");
      }
      seen[o.facility] = 1;
      if (!(o.cost >= 0.0) || std::isinf(o.cost)) {
        fail(ErrorCode::kInvalidArgument, "assignment costs must be >= 0");
      }
    }
  }
}

std::size_t FacilityInstance::delta() const {
  std::size_t d = 0;
  for (const auto& c : customers) d = std::max(d, c.size());
  return d;
}

std::vector<FacilityPair> FacilityInstance::pairs() const {
  std::vector<FacilityPair> out;
  for (std::size_t i = 0; i < customers.size(); ++i) {
    for (const auto& o : customers[i]) out.push_back({i, o.facility, o.cost});
  }
  return out;
}

FacilityResult solve_facility_location(const FacilityInstance& inst) {
  inst.validate();
  FacilityResult out;
  std::vector<double> level(inst.opening.size(), 0.0);
  std::size_t total = 0;
  for (const auto& c : inst.customers) total += c.size();
  out.x.assign(total, 0.0);
  out.trace.start = out.x;
  out.assignment.assign(inst.customers.size(), 0);
  out.open.assign(inst.opening.size(), 0);
  double running = 0.0;

  std::size_t base = 0;
  for (std::size_t i = 0; i < inst.customers.size(); ++i) {
    const auto& options = inst.customers[i];
    double beta = kUnbounded;
    for (const auto& o : options) {
      ++out.touches;
      beta = std::min(beta, o.cost + inst.opening[o.facility] * (1.0 - level[o.facility]));
    }
    StepRecord rec;
    rec.constraint = i;
    rec.constraint_id = "customer" + std::to_string(i);
    rec.beta = beta;
    rec.cost_before = running;
    bool assigned = false;
    for (std::size_t k = 0; k < options.size(); ++k) {
      ++out.touches;
      const auto& o = options[k];
      double d = o.cost;
      double f = inst.opening[o.facility];
      double m = level[o.facility];
      double v;
      if (d == 0.0 && f == 0.0) {
        v = 1.0;
      } else if (d == 0.0) {
        v = (beta + f * m) / f;
      } else {
        v = std::min(beta / d, (beta + f * m) / (d + f));
      }
      // The cheapest option lands on 1 up to rounding.
      if (v >= 1.0 - kEps) v = std::max(v, 1.0);
      double& xk = out.x[base + k];
      if (v > xk) {
        running += d * (v - xk) + f * (std::max(m, v) - m);
        rec.raised.push_back({base + k, xk, v});
        xk = v;
        level[o.facility] = std::max(m, v);
      }
      if (!assigned && xk >= 1.0) {
        out.assignment[i] = o.facility;
        assigned = true;
      }
    }
    rec.cost_after = running;
    out.trace.steps.push_back(std::move(rec));
    base += options.size();
  }
  for (std::size_t f : out.assignment) out.open[f] = 1;
  out.cost = facility_cost(inst, out.assignment);
  out.trace.final_x = out.x;
  out.trace.final_mu.resize(out.x.size());
  for (std::size_t k = 0; k < out.x.size(); ++k) out.trace.final_mu[k] = floor_eps(out.x[k]);
  return out;
}

Instance facility_to_instance(const FacilityInstance& inst) {
  inst.validate();
  auto pairs = inst.pairs();
  std::vector<ConstraintPtr> constraints;
  std::size_t base = 0;
  for (std::size_t i = 0; i < inst.customers.size(); ++i) {
    std::vector<FloorTerm> terms;
    for (std::size_t k = 0; k < inst.customers[i].size(); ++k) {
      terms.push_back({base + k, 1.0, 1.0, kUnbounded});
    }
    constraints.push_back(
        std::make_shared<FloorSumConstraint>("customer" + std::to_string(i), std::move(terms), 1.0));
    base += inst.customers[i].size();
  }
  std::vector<Domain> domains(pairs.size(), Domain::reals());
  return Instance(std::move(domains), CostModel::facility(inst.opening, std::move(pairs)),
                  std::move(constraints));
}

double facility_cost(const FacilityInstance& inst, const std::vector<std::size_t>& assignment) {
  std::vector<char> open(inst.opening.size(), 0);
  double total = 0.0;
  for (std::size_t i = 0; i < inst.customers.size(); ++i) {
    bool found = false;
    for (const auto& o : inst.customers[i]) {
      if (o.facility == assignment[i]) {
        total += o.cost;
        found = true;
      }
    }
    if (!found) fail(ErrorCode::kInvalidArgument, "customer assigned to an ineligible facility");
    open[assignment[i]] = 1;
  }
  for (std::size_t j = 0; j < open.size(); ++j) {
    if (open[j]) total += inst.opening[j];
  }
  return total;
}

FacilityOptimum facility_opt(const FacilityInstance& inst) {
  inst.validate();
  const std::size_t m = inst.opening.size();
  if (m > 20) fail(ErrorCode::kOracleUnavailable, "facility_opt: too many facilities to enumerate");
  FacilityOptimum best;
  if (inst.customers.empty()) {
    best.cost = 0.0;
    return best;
  }
  for (std::uint32_t mask = 1; mask < (1u << m); ++mask) {
    double total = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      if (mask >> j & 1u) total += inst.opening[j];
    }
    std::vector<std::size_t> assignment(inst.customers.size());
    bool ok = true;
    for (std::size_t i = 0; i < inst.customers.size() && ok; ++i) {
      double cheapest = kUnbounded;
      for (const auto& o : inst.customers[i]) {
        if ((mask >> o.facility & 1u) && o.cost < cheapest) {
          cheapest = o.cost;
          assignment[i] = o.facility;
        }
      }
      ok = std::isfinite(cheapest);
      total += cheapest;
    }
    if (ok && total < best.cost) {
      best.cost = total;
      best.assignment = std::move(assignment);
    }
  }
  return best;
}

double facility_residual(const FacilityInstance& inst, std::span<const double> x) {
  inst.validate();
  const std::size_t m = inst.opening.size();
  if (m > 20) fail(ErrorCode::kOracleUnavailable, "facility_residual: too many facilities");
  std::vector<double> level(m, 0.0);
  std::vector<std::size_t> offset(inst.customers.size());
  std::size_t base = 0;
  for (std::size_t i = 0; i < inst.customers.size(); ++i) {
    offset[i] = base;
    for (std::size_t k = 0; k < inst.customers[i].size(); ++k) {
      level[inst.customers[i][k].facility] =
          std::max(level[inst.customers[i][k].facility], x[base + k]);
    }
    base += inst.customers[i].size();
  }
  std::vector<std::size_t> unmet;
  for (std::size_t i = 0; i < inst.customers.size(); ++i) {
    bool met = false;
    for (std::size_t k = 0; k < inst.customers[i].size(); ++k) {
      if (floor_eps(x[offset[i] + k]) >= 1.0) met = true;
    }
    if (!met) unmet.push_back(i);
  }
  if (unmet.empty()) return 0.0;
  double best = kUnbounded;
  for (std::uint32_t mask = 1; mask < (1u << m); ++mask) {
    double total = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      if (mask >> j & 1u) total += inst.opening[j] * std::max(0.0, 1.0 - level[j]);
    }
    for (std::size_t i : unmet) {
      double cheapest = kUnbounded;
      for (std::size_t k = 0; k < inst.customers[i].size(); ++k) {
        const auto& o = inst.customers[i][k];
        if (mask >> o.facility & 1u) {
          cheapest = std::min(cheapest, o.cost * std::max(0.0, 1.0 - x[offset[i] + k]));
        }
      }
      total += cheapest;
    }
    best = std::min(best, total);
  }
  return best;
}

void SetCoverInstance::validate() const {
  for (double w : weights) {
    if (!(w >= 0.0) || std::isinf(w)) fail(ErrorCode::kInvalidArgument, "set weights must be >= 0");
  }
  for (std::size_t e = 0; e < element_sets.size(); ++e) {
    if (element_sets[e].empty()) {
      fail(ErrorCode::kInvalidArgument, "element " + std::to_string(e) + " is in no set");
    }
    for (std::size_t s : element_sets[e]) {
      if (s >= weights.size()) fail(ErrorCode::kInvalidArgument, "element references unknown set");
    }
  }
}

std::size_t SetCoverInstance::delta() const {
  std::size_t d = 0;
  for (const auto& sets : element_sets) d = std::max(d, sets.size());
  return d;
}

SetCoverResult solve_set_cover(const SetCoverInstance& inst) {
  inst.validate();
  FacilityInstance fl;
  fl.opening = inst.weights;
  for (const auto& sets : inst.element_sets) {
    std::vector<FacilityInstance::Option> options;
    for (std::size_t s : sets) options.push_back({s, 0.0});
    fl.customers.push_back(std::move(options));
  }
  FacilityResult r = solve_facility_location(fl);
  SetCoverResult out;
  out.touches = r.touches;
  for (std::size_t s = 0; s < r.open.size(); ++s) {
    if (r.open[s]) {
      out.chosen.push_back(s);
      out.cost += inst.weights[s];
    }
  }
  return out;
}

Instance set_cover_to_instance(const SetCoverInstance& inst) {
  inst.validate();
  std::vector<ConstraintPtr> constraints;
  for (std::size_t e = 0; e < inst.element_sets.size(); ++e) {
    std::vector<FloorTerm> terms;
    for (std::size_t s : inst.element_sets[e]) terms.push_back({s, 1.0, 1.0, kUnbounded});
    constraints.push_back(
        std::make_shared<FloorSumConstraint>("element" + std::to_string(e), std::move(terms), 1.0));
  }
  return Instance::continuous(CostModel::linear(inst.weights), std::move(constraints));
}

void Graph::validate() const {
  if (!weights.empty() && weights.size() != n) {
    fail(ErrorCode::kDimensionMismatch, "graph: one weight per vertex expected");
  }
  for (double w : weights) {
    if (!(w >= 0.0) || std::isinf(w)) fail(ErrorCode::kInvalidArgument, "vertex weights must be >= 0");
  }
  for (auto [u, w] : edges) {
    if (u >= n || w >= n || u == w) {
      fail(ErrorCode::kInvalidArgument, "graph: bad edge (" + std::to_string(u) + ", " +
                                            std::to_string(w) + ")");
    }
  }
}

Instance vertex_cover_to_instance(const Graph& g) {
  g.validate();
  std::vector<double> c(g.n);
  for (std::size_t v = 0; v < g.n; ++v) c[v] = g.weight(v);
  std::vector<ConstraintPtr> constraints;
  for (auto [u, w] : g.edges) {
    constraints.push_back(std::make_shared<FloorSumConstraint>(
        "edge" + std::to_string(u) + "_" + std::to_string(w),
        std::vector<FloorTerm>{{u, 1.0, 1.0, kUnbounded}, {w, 1.0, 1.0, kUnbounded}}, 1.0));
  }
  return Instance::continuous(CostModel::linear(std::move(c)), std::move(constraints));
}

VertexCoverResult solve_vertex_cover(const Graph& g, const StepSizePolicy& policy) {
  Instance inst = vertex_cover_to_instance(g);
  VertexCoverResult out;
  SolveOptions options;
  options.policy = policy;
  out.run = solve(inst, options);
  for (std::size_t v = 0; v < g.n; ++v) {
    if (floor_eps(out.run.x[v]) >= 1.0) {
      out.cover.push_back(v);
      out.cost += g.weight(v);
    }
  }
  return out;
}

Graph parse_dimacs(std::istream& in) {
  Graph g;
  bool header = false;
  std::string line;
  for (std::size_t lineno = 1; std::getline(in, line); ++lineno) {
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag) || tag == "c") continue;
    auto bad = [&](const std::string& why) {
      fail(ErrorCode::kParse, "DIMACS line " + std::to_string(lineno) + ": " + why);
    };
    if (tag == "p") {
      std::string format;
      std::size_t m = 0;
      if (!(ls >> format >> g.n >> m) || header) bad("expected a single 'p edge N M'");
      header = true;
    } else if (tag == "e") {
      std::size_t u = 0, w = 0;
      if (!header) bad("edge before the problem line");
      if (!(ls >> u >> w) || u == 0 || w == 0 || u > g.n || w > g.n) bad("bad edge");
      g.edges.emplace_back(u - 1, w - 1);
    } else {
      bad("unknown line type '" + tag + "'");
    }
  }
  if (!header) fail(ErrorCode::kParse, "DIMACS input has no problem line");
  return g;
}

}  // namespace monocover
