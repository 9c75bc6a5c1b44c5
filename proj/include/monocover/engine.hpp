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

#ifndef MONOCOVER_ENGINE_HPP_
#define MONOCOVER_ENGINE_HPP_

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "monocover/common.hpp"
#include "monocover/constraint.hpp"
#include "monocover/cost.hpp"
#include "monocover/instance.hpp"

namespace monocover {

struct RaisedVar {
  std::size_t var = 0;
  double old_value = 0.0;
  double new_value = 0.0;
  bool operator==(const RaisedVar&) const = default;
};

struct StepRecord {
  std::size_t constraint = 0;  // index into the instance
  std::string constraint_id;
  double beta = 0.0;
  std::vector<RaisedVar> raised;
  double cost_before = 0.0;
  double cost_after = 0.0;
  bool operator==(const StepRecord&) const = default;
};

struct StepTrace {
  Point start;
  std::vector<StepRecord> steps;
  Point final_x;
  Point final_mu;
  bool operator==(const StepTrace&) const = default;
};

// Re-applies every record to trace.start. Throws kPrecondition when a
// record's old value does not match the replayed state.
Point replay(const StepTrace& trace);

// One call of step(x, S): every x_j, j in deps(S), is raised to the largest
// value costing at most beta more than the pre-step x. Free raises are
// clamped at S.raise_cap. `index` is stored in the record.
StepRecord step(Point& x, const Constraint& S, const CostModel& cost, double beta,
                std::size_t index = 0);

// The vector step() would produce, without the precondition checks.
Point step_target(std::span<const double> x, const Constraint& S, const CostModel& cost,
                  double beta);

// Smallest beta for which step(x, S, beta) lands in S.
double minimal_beta(std::span<const double> x, const Constraint& S, const CostModel& cost);

// Lower bound on distance_c(x, S) derived from the constraint's structure:
// the cheapest single move to the next breakpoint for floored/rounded
// constraints, the CMIP stepsize for linear rows. Falls back to
// minimal_beta when no such bound applies.
double structural_beta(std::span<const double> x, const Constraint& S, const CostModel& cost);

struct StepContext {
  const Instance& instance;
  std::size_t constraint;
  std::span<const double> x;
};

struct StepSizePolicy {
  enum class Kind {
    kMinimal,        // minimal_beta
    kMaximal,        // exact distance_c(x, S) from the oracle
    kStructural,     // structural_beta
    kCustom,         // caller-supplied lower bound on the distance
    kFixedFraction,  // fraction * minimal_beta, for tests
  };
  Kind kind = Kind::kMinimal;
  double fraction = 0.5;
  std::function<double(const StepContext&)> custom;

  static StepSizePolicy minimal() { return {}; }
  static StepSizePolicy maximal() { return {Kind::kMaximal, 0.5, {}}; }
  static StepSizePolicy structural() { return {Kind::kStructural, 0.5, {}}; }
  static StepSizePolicy fixed_fraction(double f) { return {Kind::kFixedFraction, f, {}}; }
  static StepSizePolicy custom_bound(std::function<double(const StepContext&)> fn) {
    return {Kind::kCustom, 0.5, std::move(fn)};
  }
};

const char* policy_name(StepSizePolicy::Kind kind);

enum class ConstraintOrder {
  kRoundRobin,  // one step per unmet constraint per pass
  kSequential,  // satisfy each constraint fully before moving on
};

struct SolveOptions {
  StepSizePolicy policy;
  ConstraintOrder order = ConstraintOrder::kRoundRobin;
  // Visiting order of constraint indices; empty means input order.
  std::vector<std::size_t> permutation;
  // 0 selects 10 * (sum |deps(S)| + n).
  std::size_t max_steps = 0;
};

struct SolveResult {
  Point x;
  Point mu;
  double cost = 0.0;  // c(mu(x))
  StepTrace trace;
};

class StepLimitError : public Error {
 public:
  StepLimitError(const std::string& what, StepTrace partial)
      : Error(ErrorCode::kStepLimit, what), partial_(std::move(partial)) {}
  const StepTrace& partial() const { return partial_; }

 private:
  StepTrace partial_;
};

// Greedy main loop. Throws InfeasibleError when no finite raise meets some
// constraint.
SolveResult solve(const Instance& instance, const SolveOptions& options = {});

// Chooses beta for constraint `i` at x according to `policy`.
double choose_beta(const Instance& instance, std::size_t i, std::span<const double> x,
                   const StepSizePolicy& policy);

}  // namespace monocover

#endif  // MONOCOVER_ENGINE_HPP_
