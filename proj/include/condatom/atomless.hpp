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

// Conditional atomlessness and the constructive splitting machinery.
//
// F2 is atomless conditionally to F1 when every A contains some B with
// 0 < E[1_B|F1] < E[1_A|F1] on {E[1_A|F1] > 0}. With a finite fiber model the
// question is decided per fiber: a slice can be split strictly iff it has
// positive mass that is not all sitting on one point mass.
//
// `split` realizes the conditional Sierpinski property E[1_B|F1] = h E[1_C|F1].
// With piecewise-constant densities no limiting argument is needed: a
// deterministic left-to-right sweep hits every target exactly.

#include <cstddef>
#include <optional>
#include <set>
#include <vector>

#include "condatom/conditional.hpp"
#include "condatom/errors.hpp"
#include "condatom/event_set.hpp"
#include "condatom/fibered_space.hpp"
#include "condatom/scalar.hpp"

namespace condatom {

/// A set of fiber indices, i.e. an F1-measurable set.
using FiberSet = std::set<std::size_t>;

struct AtomWitness {
  std::size_t fiber;
  Scalar location;
  Scalar weight;

  friend bool operator==(const AtomWitness&, const AtomWitness&) = default;
};

struct AtomlessVerdict {
  std::optional<AtomWitness> witness;

  bool atomless() const noexcept { return !witness.has_value(); }
};

/// Atomless iff no fiber carries a point mass; otherwise the first atom found.
inline AtomlessVerdict is_conditionally_atomless(const FiberedSpace& space) {
  for (std::size_t i = 0; i < space.size(); ++i) {
    const auto& atoms = space.measure(i).atoms();
    if (!atoms.empty()) return {AtomWitness{i, atoms.front().location, atoms.front().weight}};
  }
  return {};
}

/// A slice splits strictly iff it has diffuse mass or at least two picked atoms.
inline bool slice_strictly_splittable(const FiberMeasure& mu, const FiberSlice& slice) {
  return diffuse_slice_measure(mu, slice) > 0 || slice.atom_picks.size() >= 2;
}

struct StrictSplit {
  EventSet subset;
  FiberSet fibers;  // exactly { i : 0 < K(i, subset) < K(i, A) }
};

/// Some B inside A with 0 < E[1_B|F1] < E[1_A|F1] on the largest possible set of
/// fibers, or nullopt when no slice of A can be split strictly.
inline std::optional<StrictSplit> strict_split_witness(const FiberedSpace& space, const EventSet& a) {
  a.check_against(space);
  std::vector<FiberSlice> slices(space.size());
  FiberSet fibers;
  for (std::size_t i = 0; i < space.size(); ++i) {
    const auto& mu = space.measure(i);
    const auto& s = a.slice(i);
    Scalar diffuse = diffuse_slice_measure(mu, s);
    if (diffuse > 0) {
      slices[i].intervals = left_fill(mu, s, diffuse / 2);
      fibers.insert(i);
    } else if (s.atom_picks.size() >= 2) {
      slices[i].atom_picks.push_back(s.atom_picks.front());
      fibers.insert(i);
    }
  }
  if (fibers.empty()) return std::nullopt;
  return StrictSplit{EventSet(std::move(slices)), std::move(fibers)};
}

/// The largest F1-set on which A splits strictly: every fiber with a splittable slice.
/// Equals { E[1_A|F1] > 0 } exactly when the atomlessness condition holds for A.
inline FiberSet maximal_split_region(const FiberedSpace& space, const EventSet& a) {
  a.check_against(space);
  FiberSet out;
  for (std::size_t i = 0; i < space.size(); ++i) {
    if (slice_strictly_splittable(space.measure(i), a.slice(i))) out.insert(i);
  }
  return out;
}

/// B inside C with E[1_B|F1] = h E[1_C|F1] exactly.
///
/// On each fiber the diffuse part of C is swept left to right until mass h_i K(i,C)
/// is collected; the last interval is cut at the rational point solving the linear
/// mass equation in its density piece. h_i = 0 gives the empty slice and h_i = 1
/// the whole slice, even when it carries atoms. Any other h_i on a slice with atom
/// picks throws AtomObstruction.
inline EventSet split(const FiberedSpace& space, const EventSet& c, const FiberFunction& h) {
  c.check_against(space);
  if (h.size() != space.size()) {
    throw StructuralMismatch("coefficient has " + std::to_string(h.size()) + " values, space has " +
                             std::to_string(space.size()) + " fibers");
  }
  std::vector<FiberSlice> slices(space.size());
  for (std::size_t i = 0; i < space.size(); ++i) {
    const Scalar& hi = h[i];
    if (!in_unit_interval(hi)) {
      throw PreconditionViolation("coefficient " + to_string(hi) + " on fiber " + std::to_string(i) + " outside [0,1]");
    }
    const auto& s = c.slice(i);
    if (hi == 0) continue;
    if (hi == 1) {
      slices[i] = s;
      continue;
    }
    const auto& mu = space.measure(i);
    if (!s.atom_picks.empty()) throw AtomObstruction(i, to_string(s.atom_picks.front()));
    slices[i].intervals = left_fill(mu, s, hi * diffuse_slice_measure(mu, s));
  }
  return EventSet(std::move(slices));
}

/// B_0 = C and B_{k+1} = split(B_k, 1/2 on `fibers`, 1 elsewhere), so that
/// E[1_{B_k}|F1] = 2^-k E[1_C|F1] on `fibers`: a decreasing chain with
/// 0 < E[1_{B_k}|F1] <= 2^-k there.
inline std::vector<EventSet> shrink_sequence(const FiberedSpace& space, const EventSet& c, const FiberSet& fibers,
                                             std::size_t n) {
  c.check_against(space);
  FiberFunction mass = cond_expectation(space, c);
  std::vector<Scalar> h(space.size(), Scalar(1));
  for (std::size_t i : fibers) {
    if (i >= space.size()) throw PreconditionViolation("fiber index " + std::to_string(i) + " out of range");
    if (mass[i] <= 0) {
      throw PreconditionViolation("slice of C on fiber " + std::to_string(i) + " has zero mass");
    }
    h[i] = Scalar(1, 2);
  }
  FiberFunction half(std::move(h));
  std::vector<EventSet> chain;
  chain.reserve(n + 1);
  chain.push_back(c);
  for (std::size_t k = 0; k < n; ++k) chain.push_back(split(space, chain.back(), half));
  return chain;
}

}  // namespace condatom
