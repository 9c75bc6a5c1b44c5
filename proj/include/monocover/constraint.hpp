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

#ifndef MONOCOVER_CONSTRAINT_HPP_
#define MONOCOVER_CONSTRAINT_HPP_

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "monocover/common.hpp"
#include "monocover/domain.hpp"

namespace monocover {

enum class ConstraintKind { kFloorSum, kCmipRow, kCachability, kGeneric };

const char* constraint_kind_name(ConstraintKind kind);

// An upward-closed set S of vectors. Membership may only read the
// coordinates listed in deps().
class Constraint {
 public:
  virtual ~Constraint() = default;

  const std::string& id() const { return id_; }
  const std::vector<std::size_t>& deps() const { return deps_; }
  virtual ConstraintKind kind() const = 0;

  virtual bool satisfied(std::span<const double> x) const = 0;

  // Values above x_j where raising x_j alone may change membership or the
  // slope of shortfall(). Ascending. May be truncated for huge ranges.
  virtual std::vector<double> breakpoints(std::span<const double> x, std::size_t j) const;

  // True when membership can only flip as a coordinate reaches one of its
  // breakpoints (every term is floored or rounded).
  virtual bool piecewise_constant() const { return false; }
  // Same, restricted to moves of x_j alone.
  virtual bool piecewise_constant_in(std::size_t) const { return piecewise_constant(); }

  // How far x is from S in the constraint's own units (b - lhs for linear
  // rows). Affine in every coordinate between consecutive breakpoints.
  virtual std::optional<double> shortfall(std::span<const double> x) const;

  // A finite value beyond which raising x_j (others fixed) no longer changes
  // membership: either x_j alone satisfies S there, or its term saturates.
  // Used to clamp free raises. The default searches by doubling.
  virtual double raise_cap(std::span<const double> x, std::size_t j) const;

 protected:
  Constraint(std::string id, std::vector<std::size_t> deps);

 private:
  std::string id_;
  std::vector<std::size_t> deps_;
};

using ConstraintPtr = std::shared_ptr<const Constraint>;

// sum_k coeff_k * min(cap_k, floor(x_{var_k} / step_k)) >= rhs.
struct FloorTerm {
  std::size_t var = 0;
  double coeff = 1.0;
  double step = 1.0;
  double cap = kUnbounded;
  bool operator==(const FloorTerm&) const = default;
};

class FloorSumConstraint final : public Constraint {
 public:
  FloorSumConstraint(std::string id, std::vector<FloorTerm> terms, double rhs);

  ConstraintKind kind() const override { return ConstraintKind::kFloorSum; }
  bool satisfied(std::span<const double> x) const override;
  std::vector<double> breakpoints(std::span<const double> x, std::size_t j) const override;
  bool piecewise_constant() const override { return true; }
  std::optional<double> shortfall(std::span<const double> x) const override;
  double raise_cap(std::span<const double> x, std::size_t j) const override;

  const std::vector<FloorTerm>& terms() const { return terms_; }
  double rhs() const { return rhs_; }
  double lhs(std::span<const double> x) const;

 private:
  const FloorTerm* term_for(std::size_t j) const;
  // Number of steps of term `t` needed for the term alone to close the gap.
  double count_to_satisfy(std::span<const double> x, const FloorTerm& t) const;

  std::vector<FloorTerm> terms_;
  double rhs_;
};

// Arbitrary monotone predicate. Optional hooks supply breakpoints and caps;
// without them the engine falls back to bisection.
class GenericConstraint final : public Constraint {
 public:
  using Predicate = std::function<bool(std::span<const double>)>;
  using Breakpoints = std::function<std::vector<double>(std::span<const double>, std::size_t)>;
  using Cap = std::function<double(std::span<const double>, std::size_t)>;

  GenericConstraint(std::string id, std::vector<std::size_t> deps, Predicate predicate,
                    ConstraintKind kind = ConstraintKind::kGeneric, Breakpoints breakpoints = {},
                    Cap cap = {});

  ConstraintKind kind() const override { return kind_; }
  bool satisfied(std::span<const double> x) const override { return predicate_(x); }
  std::vector<double> breakpoints(std::span<const double> x, std::size_t j) const override;
  double raise_cap(std::span<const double> x, std::size_t j) const override;

 private:
  Predicate predicate_;
  ConstraintKind kind_;
  Breakpoints breakpoints_;
  Cap cap_;
};

// The constraint {x : mu(x) in inner} for variables with restricted domains.
class RoundedConstraint final : public Constraint {
 public:
  RoundedConstraint(ConstraintPtr inner, std::shared_ptr<const std::vector<Domain>> domains);

  ConstraintKind kind() const override { return inner_->kind(); }
  bool satisfied(std::span<const double> x) const override;
  std::vector<double> breakpoints(std::span<const double> x, std::size_t j) const override;
  bool piecewise_constant() const override;
  bool piecewise_constant_in(std::size_t j) const override;
  std::optional<double> shortfall(std::span<const double> x) const override;
  double raise_cap(std::span<const double> x, std::size_t j) const override;

  const Constraint& inner() const { return *inner_; }
  const ConstraintPtr& inner_ptr() const { return inner_; }

 private:
  // Copy of x with every dependency rounded into its domain; nullopt when
  // some coordinate lies below its domain.
  std::optional<Point> rounded(std::span<const double> x) const;

  ConstraintPtr inner_;
  std::shared_ptr<const std::vector<Domain>> domains_;
  bool all_discrete_ = true;
};

// Upper limit on how many breakpoints a single query returns.
inline constexpr std::size_t kMaxBreakpoints = 1u << 14;

}  // namespace monocover

#endif  // MONOCOVER_CONSTRAINT_HPP_
