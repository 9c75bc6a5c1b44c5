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

#include "monocover/cmip.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <queue>
#include <unordered_map>

namespace monocover {

namespace {

std::vector<CmipEntry> sorted_entries(std::vector<CmipEntry> entries) {
  std::sort(entries.begin(), entries.end(),
            [](const CmipEntry& a, const CmipEntry& b) { return a.var < b.var; });
  return entries;
}

std::vector<std::size_t> vars_of(const std::vector<CmipEntry>& entries) {
  std::vector<std::size_t> out;
  out.reserve(entries.size());
  for (const auto& e : entries) out.push_back(e.var);
  std::sort(out.begin(), out.end());
  return out;
}

std::uint64_t log_cost(std::size_t size) {
  return 1 + static_cast<std::uint64_t>(std::bit_width(size));
}

}  // namespace

CmipRow::CmipRow(std::string id, std::vector<CmipEntry> entries, double b)
    : Constraint(std::move(id), vars_of(entries)), entries_(sorted_entries(std::move(entries))), b_(b) {
  if (!std::isfinite(b_)) fail(ErrorCode::kInvalidArgument, "row '" + this->id() + "': b must be finite");
  for (std::size_t k = 0; k < entries_.size(); ++k) {
    const auto& e = entries_[k];
    if (!(e.coeff > 0.0) || !std::isfinite(e.coeff)) {
      fail(ErrorCode::kInvalidArgument, "row '" + this->id() + "': coefficient of variable " +
                                            std::to_string(e.var) + " must be finite and > 0");
    }
    if (!(e.upper >= 0.0)) {
      fail(ErrorCode::kInvalidArgument, "row '" + this->id() + "': upper bound of variable " +
                                            std::to_string(e.var) + " must be >= 0");
    }
    if (e.integer) {
      integer_order_.push_back(k);
    } else {
      all_integer_ = false;
    }
  }
  std::stable_sort(integer_order_.begin(), integer_order_.end(), [&](std::size_t a, std::size_t b) {
    if (entries_[a].coeff != entries_[b].coeff) return entries_[a].coeff > entries_[b].coeff;
    return entries_[a].var < entries_[b].var;
  });
}

const CmipEntry* CmipRow::entry_for(std::size_t j) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), j,
                             [](const CmipEntry& e, std::size_t v) { return e.var < v; });
  if (it == entries_.end() || it->var != j) return nullptr;
  return &*it;
}

double CmipRow::term(const CmipEntry& e, double v, bool floored) {
  double capped = std::min(v, e.upper);
  return e.coeff * (floored ? floor_eps(capped) : capped);
}

double CmipRow::lhs(std::span<const double> x) const {
  double total = 0.0;
  for (const auto& e : entries_) total += term(e, x[e.var], e.integer);
  return total;
}

bool CmipRow::satisfied(std::span<const double> x) const { return lhs(x) >= b_ - kEps; }

std::optional<double> CmipRow::shortfall(std::span<const double> x) const { return b_ - lhs(x); }

double CmipRow::raise_cap(std::span<const double> x, std::size_t j) const {
  const CmipEntry* e = entry_for(j);
  if (e == nullptr) return x[j];
  double gap = b_ - lhs(x);
  if (gap <= kEps) return x[j];
  double target;
  if (e->integer) {
    double current = floor_eps(std::min(x[j], e->upper));
    target = current + std::ceil(gap / e->coeff - kEps);
  } else {
    target = std::min(x[j], e->upper) + gap / e->coeff;
  }
  return std::max(x[j], std::min(e->upper, target));
}

std::vector<double> CmipRow::breakpoints(std::span<const double> x, std::size_t j) const {
  std::vector<double> out;
  const CmipEntry* e = entry_for(j);
  if (e == nullptr) return out;
  double cap = raise_cap(x, j);
  if (e->integer) {
    for (double k = floor_eps(x[j]) + 1.0; k <= cap + kEps && out.size() < kMaxBreakpoints; k += 1.0) {
      if (k > x[j]) out.push_back(k);
    }
  }
  if (!is_unbounded(e->upper) && e->upper > x[j] &&
      (out.empty() || std::abs(out.back() - e->upper) > kEps)) {
    out.push_back(e->upper);
    std::sort(out.begin(), out.end());
  }
  return out;
}

StepsizeBreakdown cmip_stepsize(std::span<const double> x, const CmipRow& row,
                                std::span<const double> c) {
  if (row.satisfied(x)) {
    fail(ErrorCode::kPrecondition, "cmip_stepsize: row '" + row.id() + "' is already satisfied");
  }
  const auto& entries = row.entries();
  const auto& order = row.integer_order();
  StepsizeBreakdown out;

  // Relax every floor, then restore them in prefix order until x leaves the
  // relaxed row.
  double lhs = 0.0;
  for (const auto& e : entries) lhs += CmipRow::term(e, x[e.var], false);
  std::vector<char> in_j(entries.size(), 0);
  std::size_t p = 0;
  while (lhs >= row.b() - kEps && p < order.size()) {
    const auto& e = entries[order[p]];
    lhs += CmipRow::term(e, x[e.var], true) - CmipRow::term(e, x[e.var], false);
    in_j[order[p]] = 1;
    out.J.push_back(e.var);
    ++p;
  }
  out.slack = row.b() - lhs;
  if (out.slack <= 0.0) {
    fail(ErrorCode::kPrecondition, "cmip_stepsize: relaxed row '" + row.id() + "' has no slack");
  }

  for (std::size_t k = 0; k < entries.size(); ++k) {
    const auto& e = entries[k];
    double xj = x[e.var];
    if (CmipRow::saturated(e, xj)) {
      out.U.push_back(e.var);
      continue;
    }
    if (in_j[k]) {
      out.beta_J = std::min(out.beta_J, (1.0 - xj + floor_eps(xj)) * c[e.var]);
    } else {
      out.beta_Jbar = std::min(out.beta_Jbar, out.slack * (c[e.var] / e.coeff));
    }
  }
  out.beta = std::min(out.beta_J, out.beta_Jbar);
  if (is_unbounded(out.beta)) {
    throw InfeasibleError("row '" + row.id() + "' cannot be satisfied: every variable is at its bound");
  }
  return out;
}

StepsizeBreakdown cmip_stepsize(std::span<const double> x, const CmipRow& row,
                                const CostModel& cost) {
  const auto* c = cost.linear_coefficients();
  if (c == nullptr) fail(ErrorCode::kUnsupported, "cmip_stepsize needs a linear cost");
  return cmip_stepsize(x, row, *c);
}

bool is_cmip_instance(const Instance& instance) {
  if (instance.cost().linear_coefficients() == nullptr) return false;
  for (const auto& d : instance.domains()) {
    if (!d.unrestricted()) return false;
  }
  std::unordered_map<std::size_t, std::pair<bool, double>> seen;
  for (const auto& c : instance.constraints()) {
    const auto* row = dynamic_cast<const CmipRow*>(c.get());
    if (row == nullptr) return false;
    for (const auto& e : row->entries()) {
      auto [it, fresh] = seen.emplace(e.var, std::make_pair(e.integer, e.upper));
      if (!fresh && (it->second.first != e.integer || it->second.second != e.upper)) return false;
    }
  }
  return true;
}

namespace {

// Runs the greedy loop with CMIP step sizes on a single row. Every raised variable
// is represented as x_j = x0_j + B / c_j where B is the cumulative step size
// spent on the row, so a step is O(1) apart from the events it triggers.
// Both implementations share this arithmetic and differ only in how minima
// and events are located (heaps versus linear scans), which keeps their
// outputs identical.
//
// Event thresholds sit kEps below the integer or bound they announce, the
// same tolerance the row itself uses, so an event can never be missed by one
// ulp of B.
class RowRunner {
 public:
  RowRunner(const CmipRow& row, std::size_t index, std::span<const double> c, Point& x,
            bool use_heap, CmipCounters& counters, StepTrace* trace)
      : row_(row), index_(index), x_(x), heap_(use_heap), counters_(counters), trace_(trace) {
    const auto& entries = row.entries();
    const std::size_t d = entries.size();
    st_.resize(d);
    for (std::size_t k = 0; k < d; ++k) {
      const auto& e = entries[k];
      State& s = st_[k];
      s.a = e.coeff;
      s.c = c[e.var];
      s.x0 = x[e.var];
      s.u = e.upper;
      s.integer = e.integer;
      s.frozen = s.c == 0.0;
      s.sat = s.frozen || CmipRow::saturated(e, s.x0);
      s.key_sat = is_unbounded(s.u) ? kUnbounded : (s.u - kEps - s.x0) * s.c;
      if (!s.frozen) s.rate = s.c / s.a;
      if (!s.frozen && !s.sat) {
        l0_ += s.a * s.x0;
        r_ += s.a / s.c;
        if (heap_) {
          push(rate_heap_, {s.rate, k}, counters_.stepsize_ops);
          if (!is_unbounded(s.u)) push(sat_heap_, {s.key_sat, k}, counters_.step_ops);
        }
      } else {
        f_ += contribution(k);
      }
      ++counters_.step_ops;
    }
    counters_.preprocessing += row.integer_order().size() * log_cost(row.integer_order().size());
    advance();
  }

  bool satisfied() const {
    return p_ == row_.integer_order().size() && lhs() >= row_.b() - kEps;
  }

  // Returns false when the row is satisfied.
  bool step() {
    if (satisfied()) return false;
    auto [e_min, owner] = min_integer_key();
    // The event key sits kEps early; the step itself goes to the integer.
    if (!is_unbounded(e_min)) e_min += kEps * st_[owner].c;
    double beta_j = is_unbounded(e_min) ? kUnbounded : e_min - b_;
    double slack = row_.b() - lhs();
    if (slack <= 0.0) {
      fail(ErrorCode::kPrecondition, "solve_cmip: relaxed row '" + row_.id() + "' lost its slack");
    }
    double rate = min_rate();
    double beta_jbar = is_unbounded(rate) ? kUnbounded : slack * rate;
    double beta = std::min(beta_j, beta_jbar);
    if (is_unbounded(beta)) {
      throw InfeasibleError("row '" + row_.id() + "' cannot be satisfied: every variable is at its bound",
                            static_cast<std::ptrdiff_t>(index_));
    }
    double next = b_ + beta;
    if (beta_j <= beta_jbar) next = std::max(next, e_min);
    ++counters_.step_ops;
    std::vector<double> before;
    if (trace_ != nullptr) before = snapshot();
    beta = next - b_;
    b_ = next;
    apply_events();
    advance();
    if (trace_ != nullptr) record(beta, before);
    return true;
  }

  void write_back() {
    const auto& entries = row_.entries();
    for (std::size_t k = 0; k < st_.size(); ++k) {
      if (!st_[k].frozen) x_[entries[k].var] = shown(k);
    }
  }

 private:
  struct State {
    double a = 0, c = 0, x0 = 0, u = kUnbounded, rate = kUnbounded, key_sat = kUnbounded;
    double next_int = kUnbounded;
    double m = 0;  // floor count while in J
    bool integer = false, frozen = false, sat = false, in_j = false;
  };
  using Item = std::pair<double, std::size_t>;
  using MinHeap = std::priority_queue<Item, std::vector<Item>, std::greater<Item>>;

  double value(std::size_t k, double b) const { return st_[k].x0 + b / st_[k].c; }
  double lhs() const { return f_ + l0_ + b_ * r_; }

  // value() with the kEps-early events rounded onto the integer or bound
  // they announced.
  double shown(std::size_t k) const {
    const State& s = st_[k];
    double v = value(k, b_);
    if (s.sat && !s.frozen) return std::max(v, s.u);
    if (s.in_j && s.integer) return std::max(v, s.m);
    return v;
  }

  std::vector<double> snapshot() const {
    std::vector<double> out(st_.size());
    for (std::size_t k = 0; k < st_.size(); ++k) out[k] = shown(k);
    return out;
  }

  // Constant contribution of a frozen or saturated term.
  double contribution(std::size_t k) const {
    const State& s = st_[k];
    double v = s.frozen ? std::min(s.x0, s.u) : s.u;
    return s.a * (s.in_j && s.integer ? floor_eps(v) : v);
  }

  void push(MinHeap& h, Item item, std::uint64_t& ctr) {
    h.push(item);
    ctr += log_cost(h.size());
  }
  void pop(MinHeap& h, std::uint64_t& ctr) {
    ctr += log_cost(h.size());
    h.pop();
  }

  bool int_valid(const Item& it) const {
    const State& s = st_[it.second];
    return s.in_j && !s.sat && s.next_int == it.first;
  }
  bool rate_valid(const Item& it) const {
    const State& s = st_[it.second];
    return !s.in_j && !s.sat;
  }

  // Smallest integer event and its owner.
  Item min_integer_key() {
    if (heap_) {
      while (!int_heap_.empty() && !int_valid(int_heap_.top())) pop(int_heap_, counters_.stepsize_ops);
      ++counters_.stepsize_ops;
      return int_heap_.empty() ? Item{kUnbounded, 0} : int_heap_.top();
    }
    Item best{kUnbounded, 0};
    for (std::size_t k = 0; k < st_.size(); ++k) {
      const State& s = st_[k];
      ++counters_.stepsize_ops;
      if (s.in_j && !s.sat) best = std::min(best, Item{s.next_int, k});
    }
    return best;
  }

  double min_rate() {
    if (heap_) {
      while (!rate_heap_.empty() && !rate_valid(rate_heap_.top())) pop(rate_heap_, counters_.stepsize_ops);
      ++counters_.stepsize_ops;
      return rate_heap_.empty() ? kUnbounded : rate_heap_.top().first;
    }
    double best = kUnbounded;
    for (const State& s : st_) {
      ++counters_.stepsize_ops;
      if (!s.in_j && !s.sat) best = std::min(best, s.rate);
    }
    return best;
  }

  void record(double beta, const std::vector<double>& before) {
    StepRecord rec;
    rec.constraint = index_;
    rec.constraint_id = row_.id();
    rec.beta = beta;
    rec.cost_before = cost_;
    const auto& entries = row_.entries();
    for (std::size_t k = 0; k < st_.size(); ++k) {
      if (st_[k].frozen) continue;
      double after = shown(k);
      if (after > before[k]) {
        rec.raised.push_back({entries[k].var, before[k], after});
        cost_ += st_[k].c * (after - before[k]);
      }
    }
    rec.cost_after = cost_;
    trace_->steps.push_back(std::move(rec));
  }

 public:
  void set_cost(double cost) { cost_ = cost; }
  double cost() const { return cost_; }

 private:
  void apply_events() {
    std::vector<std::size_t> sat_events;
    std::vector<std::size_t> int_events;
    if (heap_) {
      while (!sat_heap_.empty() && sat_heap_.top().first <= b_) {
        std::size_t k = sat_heap_.top().second;
        pop(sat_heap_, counters_.step_ops);
        if (!st_[k].sat) sat_events.push_back(k);
      }
      while (!int_heap_.empty()) {
        const Item& top = int_heap_.top();
        if (!int_valid(top)) {
          pop(int_heap_, counters_.step_ops);
          continue;
        }
        if (top.first > b_) break;
        std::size_t k = top.second;
        pop(int_heap_, counters_.step_ops);
        if (st_[k].key_sat > b_) int_events.push_back(k);
      }
      std::sort(sat_events.begin(), sat_events.end());
      std::sort(int_events.begin(), int_events.end());
    } else {
      for (std::size_t k = 0; k < st_.size(); ++k) {
        ++counters_.step_ops;
        const State& s = st_[k];
        if (s.frozen || s.sat) continue;
        if (s.key_sat <= b_) {
          sat_events.push_back(k);
        } else if (s.in_j && s.next_int <= b_) {
          int_events.push_back(k);
        }
      }
    }
    for (std::size_t k : sat_events) {
      State& s = st_[k];
      ++counters_.step_ops;
      if (s.in_j) {
        f_ -= s.a * s.m;
      } else {
        l0_ -= s.a * s.x0;
        r_ -= s.a / s.c;
      }
      s.sat = true;
      f_ += contribution(k);
    }
    for (std::size_t k : int_events) {
      State& s = st_[k];
      ++counters_.step_ops;
      double m = std::max(s.m + 1.0, floor_eps(value(k, b_)));
      f_ += s.a * (m - s.m);
      s.m = m;
      s.next_int = (m + 1.0 - kEps - s.x0) * s.c;
      if (heap_) push(int_heap_, {s.next_int, k}, counters_.step_ops);
    }
  }

  // Grows J while x still satisfies the relaxed row S(J).
  void advance() {
    const auto& order = row_.integer_order();
    while (p_ < order.size() && lhs() >= row_.b() - kEps) {
      std::size_t k = order[p_++];
      State& s = st_[k];
      ++counters_.stepsize_ops;
      if (s.sat) {
        f_ -= contribution(k);
        s.in_j = true;
        f_ += contribution(k);
        continue;
      }
      l0_ -= s.a * s.x0;
      r_ -= s.a / s.c;
      s.in_j = true;
      s.m = floor_eps(value(k, b_));
      f_ += s.a * s.m;
      s.next_int = (s.m + 1.0 - kEps - s.x0) * s.c;
      if (heap_) push(int_heap_, {s.next_int, k}, counters_.stepsize_ops);
    }
  }

  const CmipRow& row_;
  std::size_t index_;
  Point& x_;
  bool heap_;
  CmipCounters& counters_;
  StepTrace* trace_;
  std::vector<State> st_;
  MinHeap rate_heap_, sat_heap_, int_heap_;
  double f_ = 0.0, l0_ = 0.0, r_ = 0.0, b_ = 0.0;
  std::size_t p_ = 0;
  double cost_ = 0.0;
};

struct VarInfo {
  bool integer = false;
  double upper = kUnbounded;
};

}  // namespace

CmipResult solve_cmip(const Instance& instance, const CmipOptions& options) {
  const auto* c = instance.cost().linear_coefficients();
  if (c == nullptr) fail(ErrorCode::kUnsupported, "solve_cmip needs a linear cost");
  for (std::size_t j = 0; j < instance.n(); ++j) {
    if (!instance.domains()[j].unrestricted()) {
      fail(ErrorCode::kUnsupported, "solve_cmip expects real domains; integrality belongs in the rows");
    }
  }
  std::vector<const CmipRow*> rows;
  std::vector<VarInfo> info(instance.n());
  std::vector<char> seen(instance.n(), 0);
  for (std::size_t i = 0; i < instance.size(); ++i) {
    const auto* row = dynamic_cast<const CmipRow*>(&instance.constraint(i));
    if (row == nullptr) {
      fail(ErrorCode::kUnsupported,
           "solve_cmip: constraint '" + instance.constraint(i).id() + "' is not a CMIP row");
    }
    for (const auto& e : row->entries()) {
      if (seen[e.var] && (info[e.var].integer != e.integer || info[e.var].upper != e.upper)) {
        fail(ErrorCode::kInvalidArgument, "solve_cmip: variable " + std::to_string(e.var) +
                                              " has inconsistent integrality or bound across rows");
      }
      seen[e.var] = 1;
      info[e.var] = {e.integer, e.upper};
    }
    rows.push_back(row);
  }

  CmipResult out;
  Point x = instance.start();
  out.trace.start = x;
  StepTrace* trace = options.record_trace ? &out.trace : nullptr;
  out.steps_per_row.assign(rows.size(), 0);
  const std::size_t limit = 10 * (instance.total_deps() + instance.n());
  double running_cost = trace != nullptr ? instance.cost()(x) : 0.0;

  for (std::size_t i = 0; i < rows.size(); ++i) {
    const CmipRow& row = *rows[i];
    if (row.satisfied(x)) continue;
    // Zero-cost variables take the stepsize beta = 0 once; the free raise is
    // clamped at the row's cap, which saturates them or satisfies the row.
    bool free_raise = false;
    for (const auto& e : row.entries()) {
      if ((*c)[e.var] == 0.0 && !CmipRow::saturated(e, x[e.var])) free_raise = true;
    }
    if (free_raise) {
      StepRecord rec = step(x, row, instance.cost(), 0.0, i);
      out.counters.step_ops += row.entries().size();
      ++out.steps_per_row[i];
      ++out.steps;
      running_cost = rec.cost_after;
      if (trace != nullptr) trace->steps.push_back(std::move(rec));
      if (row.satisfied(x)) continue;
    }
    RowRunner runner(row, i, *c, x, options.impl == CmipImpl::kHeap, out.counters, trace);
    runner.set_cost(running_cost);
    while (runner.step()) {
      ++out.steps_per_row[i];
      if (++out.steps > limit) {
        fail(ErrorCode::kStepLimit, "solve_cmip: step limit exceeded on row '" + row.id() + "'");
      }
    }
    runner.write_back();
    running_cost = runner.cost();
  }

  out.x = x;
  out.solution.resize(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) {
    double capped = std::min(x[j], info[j].upper);
    out.solution[j] = info[j].integer ? floor_eps(capped) : capped;
  }
  out.cost = instance.cost()(out.solution);
  out.trace.final_x = out.x;
  out.trace.final_mu = out.solution;
  return out;
}

}  // namespace monocover
