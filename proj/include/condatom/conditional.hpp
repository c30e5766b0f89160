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

#include <algorithm>
#include <cstddef>
#include <vector>

#include "condatom/errors.hpp"
#include "condatom/event_set.hpp"
#include "condatom/fibered_space.hpp"
#include "condatom/scalar.hpp"

namespace condatom {

/// An F1-measurable simple function: one value per fiber.
class FiberFunction {
 public:
  FiberFunction() = default;
  explicit FiberFunction(std::vector<Scalar> values) : values_(std::move(values)) {}

  static FiberFunction constant(std::size_t fibers, const Scalar& value) {
    return FiberFunction(std::vector<Scalar>(fibers, value));
  }

  std::size_t size() const noexcept { return values_.size(); }
  const Scalar& operator[](std::size_t i) const { return values_.at(i); }
  const std::vector<Scalar>& values() const noexcept { return values_; }

  bool within_unit_interval() const {
    return std::all_of(values_.begin(), values_.end(), [](const Scalar& v) { return in_unit_interval(v); });
  }

  friend FiberFunction operator+(const FiberFunction& a, const FiberFunction& b) {
    check_same_size(a, b);
    std::vector<Scalar> out(a.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = a.values_[i] + b.values_[i];
    return FiberFunction(std::move(out));
  }

  /// Componentwise product.
  friend FiberFunction operator*(const FiberFunction& a, const FiberFunction& b) {
    check_same_size(a, b);
    std::vector<Scalar> out(a.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = a.values_[i] * b.values_[i];
    return FiberFunction(std::move(out));
  }

  friend bool operator==(const FiberFunction&, const FiberFunction&) = default;

 private:
  static void check_same_size(const FiberFunction& a, const FiberFunction& b) {
    if (a.size() != b.size()) {
      throw StructuralMismatch("fiber functions of length " + std::to_string(a.size()) + " and " +
                               std::to_string(b.size()));
    }
  }

  std::vector<Scalar> values_;
};

inline Scalar diffuse_slice_measure(const FiberMeasure& mu, const FiberSlice& slice) {
  Scalar total = 0;
  for (const auto& iv : slice.intervals) total += mu.diffuse_mass(iv.lo, iv.hi);
  return total;
}

inline Scalar atomic_slice_measure(const FiberMeasure& mu, const FiberSlice& slice, std::size_t fiber = 0) {
  Scalar total = 0;
  for (const auto& loc : slice.atom_picks) {
    auto w = mu.atom_weight(loc);
    if (!w) {
      throw InvariantViolation("fiber " + std::to_string(fiber) + ": atom pick " + to_string(loc) +
                               " is not an atom location of that fiber");
    }
    total += *w;
  }
  return total;
}

/// mu(slice): picked atom weights plus diffuse mass of the intervals.
inline Scalar slice_measure(const FiberMeasure& mu, const FiberSlice& slice, std::size_t fiber = 0) {
  return diffuse_slice_measure(mu, slice) + atomic_slice_measure(mu, slice, fiber);
}

namespace detail {

inline void check_fiber_count(const FiberedSpace& space, const EventSet& a) {
  if (a.fiber_count() != space.size()) {
    throw StructuralMismatch("event has " + std::to_string(a.fiber_count()) + " fibers, space has " +
                             std::to_string(space.size()));
  }
}

}  // namespace detail

/// E[1_A | F1]: the value on fiber i is K(i, A).
inline FiberFunction cond_expectation(const FiberedSpace& space, const EventSet& a) {
  detail::check_fiber_count(space, a);
  std::vector<Scalar> values(space.size());
  for (std::size_t i = 0; i < space.size(); ++i) values[i] = slice_measure(space.measure(i), a.slice(i), i);
  return FiberFunction(std::move(values));
}

/// P[A] = sum_i p_i K(i, A).
inline Scalar measure(const FiberedSpace& space, const EventSet& a) {
  FiberFunction ce = cond_expectation(space, a);
  Scalar total = 0;
  for (std::size_t i = 0; i < space.size(); ++i) total += space.weight(i) * ce[i];
  return total;
}

/// Left-fill of the diffuse part: sweeps the intervals of `slice` from left to
/// right and keeps the shortest prefix carrying diffuse mass `target`. Atom
/// picks are never included. Requires target <= diffuse mass of the slice.
inline std::vector<Interval> left_fill(const FiberMeasure& mu, const FiberSlice& slice, const Scalar& target) {
  std::vector<Interval> out;
  if (target <= 0) return out;
  Scalar filled = 0;
  for (const auto& iv : slice.intervals) {
    Scalar need = target - filled;
    Scalar mass = mu.diffuse_mass(iv.lo, iv.hi);
    if (mass >= need) {
      Scalar cut = mu.diffuse_quantile_from(iv.lo, need);
      if (cut > iv.lo) out.push_back({iv.lo, std::move(cut)});
      return out;
    }
    out.push_back(iv);
    filled += mass;
  }
  throw PreconditionViolation("left-fill target " + to_string(target) + " exceeds the slice's diffuse mass " +
                              to_string(filled));
}

}  // namespace condatom
