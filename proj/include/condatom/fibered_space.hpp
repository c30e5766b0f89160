/*
 * Copyright 2026 The condatom Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *   http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

// The probability space is modelled as a finite weighted list of fibers.
// Each fiber is one atom of the conditioning algebra F1 and carries its own
// probability measure on [0,1]: finitely many point masses plus a
// piecewise-constant density. The fiber-indexed family of measures is the
// regular conditional probability (the kernel K), so every conditional
// expectation given F1 reduces to an exact per-fiber integral.
//
// Point masses live on separate "atom sites" that are not covered by the
// intervals of an event; an event selects them explicitly. This keeps the
// diffuse and the atomic part of every fiber independent of each other.

#include <algorithm>
#include <cstddef>
#include <optional>
#include <vector>

#include "condatom/errors.hpp"
#include "condatom/piecewise_linear.hpp"
#include "condatom/scalar.hpp"

namespace condatom {

struct Atom {
  Scalar location;
  Scalar weight;

  friend bool operator==(const Atom&, const Atom&) = default;
};

/// One conditional measure K(i, .) on [0,1].
class FiberMeasure {
 public:
  FiberMeasure(std::vector<Atom> atoms, std::vector<Scalar> breakpoints, std::vector<Scalar> densities)
      : atoms_(std::move(atoms)), breakpoints_(std::move(breakpoints)), densities_(std::move(densities)) {
    validate();
    cumulative_.reserve(breakpoints_.size());
    cumulative_.emplace_back(0);
    for (std::size_t j = 0; j < densities_.size(); ++j) {
      cumulative_.push_back(cumulative_.back() + densities_[j] * (breakpoints_[j + 1] - breakpoints_[j]));
    }
  }

  /// Uniform density on [0,1].
  static FiberMeasure lebesgue() { return FiberMeasure({}, {0, 1}, {1}); }

  const std::vector<Atom>& atoms() const noexcept { return atoms_; }
  const std::vector<Scalar>& breakpoints() const noexcept { return breakpoints_; }
  const std::vector<Scalar>& densities() const noexcept { return densities_; }
  std::size_t piece_count() const noexcept { return densities_.size(); }
  bool has_atoms() const noexcept { return !atoms_.empty(); }

  /// Piece j with breakpoints[j] <= x < breakpoints[j+1]; x = 1 maps to the last piece.
  std::size_t piece_of(const Scalar& x) const {
    auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), x);
    auto j = static_cast<std::size_t>(std::distance(breakpoints_.begin(), it));
    if (j == 0) return 0;
    return std::min(j - 1, densities_.size() - 1);
  }

  const Scalar& density_at(const Scalar& x) const { return densities_[piece_of(x)]; }

  /// Diffuse mass of [0, x).
  Scalar diffuse_cdf(const Scalar& x) const {
    if (x <= 0) return 0;
    if (x >= 1) return cumulative_.back();
    std::size_t j = piece_of(x);
    return cumulative_[j] + densities_[j] * (x - breakpoints_[j]);
  }

  /// Diffuse mass of [a, b).
  Scalar diffuse_mass(const Scalar& a, const Scalar& b) const {
    if (b <= a) return 0;
    return diffuse_cdf(b) - diffuse_cdf(a);
  }

  const Scalar& diffuse_total() const noexcept { return cumulative_.back(); }

  /// The diffuse CDF y -> mass([0, y)) as a piecewise-linear function.
  PiecewiseLinear diffuse_cdf_function() const { return {breakpoints_, cumulative_}; }

  /// Smallest x >= from with mass([from, x)) >= mass. Requires mass <= mass([from, 1)).
  Scalar diffuse_quantile_from(const Scalar& from, const Scalar& mass) const {
    Scalar target = diffuse_cdf(from) + mass;
    if (mass <= 0) return from;
    if (target > cumulative_.back()) {
      throw PreconditionViolation("requested diffuse mass " + to_string(mass) + " exceeds what remains after " +
                                  to_string(from));
    }
    auto it = std::lower_bound(cumulative_.begin(), cumulative_.end(), target);
    auto j = static_cast<std::size_t>(std::distance(cumulative_.begin(), it));
    // cumulative_[j-1] < target <= cumulative_[j], hence densities_[j-1] > 0.
    Scalar x = breakpoints_[j - 1] + (target - cumulative_[j - 1]) / densities_[j - 1];
    return std::max(x, from);
  }

  std::optional<Scalar> atom_weight(const Scalar& location) const {
    auto it = std::lower_bound(atoms_.begin(), atoms_.end(), location,
                               [](const Atom& a, const Scalar& loc) { return a.location < loc; });
    if (it == atoms_.end() || it->location != location) return std::nullopt;
    return it->weight;
  }

  Scalar total_mass() const {
    Scalar total = cumulative_.back();
    for (const auto& a : atoms_) total += a.weight;
    return total;
  }

  friend bool operator==(const FiberMeasure& a, const FiberMeasure& b) {
    return a.atoms_ == b.atoms_ && a.breakpoints_ == b.breakpoints_ && a.densities_ == b.densities_;
  }

 private:
  void validate() const {
    if (breakpoints_.size() < 2) throw InvariantViolation("fiber measure needs breakpoints 0 and 1");
    if (densities_.size() + 1 != breakpoints_.size()) {
      throw InvariantViolation("fiber measure has " + std::to_string(breakpoints_.size()) + " breakpoints but " +
                               std::to_string(densities_.size()) + " densities, expected one fewer density");
    }
    if (breakpoints_.front() != 0) throw InvariantViolation("first breakpoint is " + to_string(breakpoints_.front()) + ", expected 0");
    if (breakpoints_.back() != 1) throw InvariantViolation("last breakpoint is " + to_string(breakpoints_.back()) + ", expected 1");
    for (std::size_t j = 1; j < breakpoints_.size(); ++j) {
      if (breakpoints_[j - 1] >= breakpoints_[j]) throw InvariantViolation("breakpoints must be strictly increasing");
    }
    for (const auto& d : densities_) {
      if (d < 0) throw InvariantViolation("density " + to_string(d) + " is negative");
    }
    for (std::size_t k = 0; k < atoms_.size(); ++k) {
      const auto& a = atoms_[k];
      if (!in_unit_interval(a.location)) throw InvariantViolation("atom location " + to_string(a.location) + " outside [0,1]");
      if (a.weight <= 0) throw InvariantViolation("atom weight " + to_string(a.weight) + " is not positive");
      if (k > 0 && atoms_[k - 1].location >= a.location) {
        throw InvariantViolation("atom locations must be distinct and strictly increasing");
      }
    }
    Scalar total = 0;
    for (std::size_t j = 0; j < densities_.size(); ++j) total += densities_[j] * (breakpoints_[j + 1] - breakpoints_[j]);
    for (const auto& a : atoms_) total += a.weight;
    if (total != 1) throw InvariantViolation("fiber mass is " + to_string(total) + ", expected 1");
  }

  std::vector<Atom> atoms_;
  std::vector<Scalar> breakpoints_;
  std::vector<Scalar> densities_;
  std::vector<Scalar> cumulative_;  // diffuse mass of [0, breakpoints_[j])
};

struct Fiber {
  Scalar weight;
  FiberMeasure measure;

  friend bool operator==(const Fiber&, const Fiber&) = default;
};

/// (Omega, F1, F2, P, K): fiber weights are P on F1, fiber measures are K.
class FiberedSpace {
 public:
  explicit FiberedSpace(std::vector<Fiber> fibers) : fibers_(std::move(fibers)) {
    if (fibers_.empty()) throw InvariantViolation("space needs at least one fiber");
    Scalar total = 0;
    for (std::size_t i = 0; i < fibers_.size(); ++i) {
      if (fibers_[i].weight <= 0) {
        throw InvariantViolation("fiber " + std::to_string(i) + " weight " + to_string(fibers_[i].weight) + " is not positive");
      }
      total += fibers_[i].weight;
    }
    if (total != 1) throw InvariantViolation("fiber weights sum to " + to_string(total) + ", expected 1");
  }

  /// Equal-weight fibers over the given measures.
  static FiberedSpace uniform_over(std::vector<FiberMeasure> measures) {
    std::vector<Fiber> fibers;
    Scalar w(Integer(1), Integer(measures.size()));
    for (auto& m : measures) fibers.push_back({w, std::move(m)});
    return FiberedSpace(std::move(fibers));
  }

  std::size_t size() const noexcept { return fibers_.size(); }
  const std::vector<Fiber>& fibers() const noexcept { return fibers_; }
  const Fiber& fiber(std::size_t i) const { return fibers_.at(i); }
  const FiberMeasure& measure(std::size_t i) const { return fibers_.at(i).measure; }
  const Scalar& weight(std::size_t i) const { return fibers_.at(i).weight; }

  friend bool operator==(const FiberedSpace&, const FiberedSpace&) = default;

 private:
  std::vector<Fiber> fibers_;
};

}  // namespace condatom
