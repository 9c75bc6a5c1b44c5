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

#ifndef MONOCOVER_INSTANCE_HPP_
#define MONOCOVER_INSTANCE_HPP_

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "monocover/common.hpp"
#include "monocover/constraint.hpp"
#include "monocover/cost.hpp"
#include "monocover/domain.hpp"

namespace monocover {

// A monotone covering problem: min c(x) subject to mu(x) in S for every S.
// Immutable once built.
class Instance {
 public:
  Instance(std::vector<Domain> domains, CostModel cost, std::vector<ConstraintPtr> constraints);

  // Convenience: every variable ranges over the non-negative reals.
  static Instance continuous(CostModel cost, std::vector<ConstraintPtr> constraints);

  std::size_t n() const { return domains_->size(); }
  std::size_t size() const { return constraints_.size(); }
  const std::vector<Domain>& domains() const { return *domains_; }
  const CostModel& cost() const { return cost_; }

  // Constraints as supplied.
  const std::vector<ConstraintPtr>& constraints() const { return constraints_; }
  const Constraint& constraint(std::size_t i) const { return *constraints_[i]; }
  // The constraint the solver works against: `constraint(i)` read through mu
  // when some dependency has a restricted domain.
  const Constraint& effective(std::size_t i) const { return *effective_[i]; }
  const ConstraintPtr& effective_ptr(std::size_t i) const { return effective_[i]; }

  // Max |deps(S)| (0 with no constraints).
  std::size_t delta() const { return delta_; }
  // Max number of constraints any variable appears in.
  std::size_t delta_hat() const { return delta_hat_; }
  std::size_t total_deps() const { return total_deps_; }
  bool restricted() const { return restricted_; }

  // x_j = min U_j.
  Point start() const;
  Point mu(std::span<const double> x) const { return mu_round(domains(), x); }
  bool feasible(std::span<const double> x) const;
  // Index of the first unmet constraint, or -1.
  std::ptrdiff_t first_violated(std::span<const double> x) const;

 private:
  std::shared_ptr<const std::vector<Domain>> domains_;
  CostModel cost_;
  std::vector<ConstraintPtr> constraints_;
  std::vector<ConstraintPtr> effective_;
  std::size_t delta_ = 0;
  std::size_t delta_hat_ = 0;
  std::size_t total_deps_ = 0;
  bool restricted_ = false;
};

}  // namespace monocover

#endif  // MONOCOVER_INSTANCE_HPP_
