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

#include "monocover/instance.hpp"

#include <algorithm>

namespace monocover {

Instance::Instance(std::vector<Domain> domains, CostModel cost,
                   std::vector<ConstraintPtr> constraints)
    : domains_(std::make_shared<const std::vector<Domain>>(std::move(domains))),
      cost_(std::move(cost)),
      constraints_(std::move(constraints)) {
  const std::size_t n = domains_->size();
  if (cost_.dimension() != n) {
    fail(ErrorCode::kDimensionMismatch, "cost has dimension " + std::to_string(cost_.dimension()) +
                                            " but the instance has " + std::to_string(n) +
                                            " variables");
  }
  std::vector<std::size_t> appearances(n, 0);
  for (const auto& c : constraints_) {
    if (!c) fail(ErrorCode::kInvalidArgument, "null constraint");
    bool touches_restricted = false;
    for (std::size_t j : c->deps()) {
      if (j >= n) {
        fail(ErrorCode::kDimensionMismatch,
             "constraint '" + c->id() + "' depends on variable " + std::to_string(j) +
                 " of an instance with " + std::to_string(n));
      }
      ++appearances[j];
      if (!(*domains_)[j].unrestricted()) touches_restricted = true;
    }
    delta_ = std::max(delta_, c->deps().size());
    total_deps_ += c->deps().size();
    if (touches_restricted) {
      restricted_ = true;
      effective_.push_back(std::make_shared<RoundedConstraint>(c, domains_));
    } else {
      effective_.push_back(c);
    }
  }
  for (std::size_t a : appearances) delta_hat_ = std::max(delta_hat_, a);
}

Instance Instance::continuous(CostModel cost, std::vector<ConstraintPtr> constraints) {
  std::vector<Domain> domains(cost.dimension(), Domain::reals());
  return Instance(std::move(domains), std::move(cost), std::move(constraints));
}

Point Instance::start() const {
  Point x(n());
  for (std::size_t j = 0; j < n(); ++j) x[j] = (*domains_)[j].min_value();
  return x;
}

bool Instance::feasible(std::span<const double> x) const { return first_violated(x) < 0; }

std::ptrdiff_t Instance::first_violated(std::span<const double> x) const {
  for (std::size_t i = 0; i < effective_.size(); ++i) {
    if (!effective_[i]->satisfied(x)) return static_cast<std::ptrdiff_t>(i);
  }
  return -1;
}

}  // namespace monocover
