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
#include <iterator>
#include <vector>

#include "condatom/errors.hpp"
#include "condatom/fibered_space.hpp"
#include "condatom/scalar.hpp"

namespace condatom {

/// Half-open [lo, hi).
struct Interval {
  Scalar lo;
  Scalar hi;

  bool contains(const Scalar& x) const { return lo <= x && x < hi; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

/// The part of an event lying in one fiber.
struct FiberSlice {
  std::vector<Interval> intervals;  // sorted, disjoint, non-adjacent, nonempty
  std::vector<Scalar> atom_picks;   // sorted, distinct

  bool empty() const noexcept { return intervals.empty() && atom_picks.empty(); }

  bool contains_point(const Scalar& y) const {
    auto it = std::upper_bound(intervals.begin(), intervals.end(), y,
                               [](const Scalar& v, const Interval& iv) { return v < iv.lo; });
    return it != intervals.begin() && std::prev(it)->contains(y);
  }

  friend bool operator==(const FiberSlice&, const FiberSlice&) = default;
};

namespace detail {

/// Merges touching intervals and drops empty ones. Input must be sorted by lo and non-overlapping.
inline std::vector<Interval> merge_adjacent(std::vector<Interval> in) {
  std::vector<Interval> out;
  out.reserve(in.size());
  for (auto& iv : in) {
    if (iv.lo >= iv.hi) continue;
    if (!out.empty() && out.back().hi == iv.lo) {
      out.back().hi = std::move(iv.hi);
    } else {
      out.push_back(std::move(iv));
    }
  }
  return out;
}

inline void validate_slice(const FiberSlice& s, std::size_t fiber) {
  const std::string where = "fiber " + std::to_string(fiber) + ": ";
  for (std::size_t k = 0; k < s.intervals.size(); ++k) {
    const auto& iv = s.intervals[k];
    if (iv.lo < 0 || iv.hi > 1) {
      throw InvariantViolation(where + "interval [" + to_string(iv.lo) + "," + to_string(iv.hi) + ") not within [0,1]");
    }
    if (iv.lo >= iv.hi) {
      throw InvariantViolation(where + "interval [" + to_string(iv.lo) + "," + to_string(iv.hi) + ") is empty");
    }
    if (k > 0 && s.intervals[k - 1].hi > iv.lo) {
      throw InvariantViolation(where + "intervals must be sorted and pairwise disjoint");
    }
  }
  for (std::size_t k = 1; k < s.atom_picks.size(); ++k) {
    if (s.atom_picks[k - 1] >= s.atom_picks[k]) throw InvariantViolation(where + "atom picks must be sorted and distinct");
  }
}

}  // namespace detail

/// An F2-measurable set: one slice per fiber, kept in canonical form.
class EventSet {
 public:
  EventSet() = default;

  /// Validates the slices (sorted, disjoint, nonempty intervals inside [0,1]) and merges adjacent intervals.
  explicit EventSet(std::vector<FiberSlice> slices) : slices_(std::move(slices)) {
    for (std::size_t i = 0; i < slices_.size(); ++i) {
      detail::validate_slice(slices_[i], i);
      slices_[i].intervals = detail::merge_adjacent(std::move(slices_[i].intervals));
    }
  }

  static EventSet empty(std::size_t fibers) { return EventSet(std::vector<FiberSlice>(fibers)); }

  /// Omega: [0,1) on every fiber plus every atom site.
  static EventSet full(const FiberedSpace& space) {
    std::vector<FiberSlice> slices(space.size());
    for (std::size_t i = 0; i < space.size(); ++i) {
      slices[i].intervals.push_back({0, 1});
      for (const auto& a : space.measure(i).atoms()) slices[i].atom_picks.push_back(a.location);
    }
    return EventSet(std::move(slices));
  }

  /// The same interval list on every fiber, no atom picks.
  static EventSet uniform_intervals(std::size_t fibers, std::vector<Interval> intervals) {
    return EventSet(std::vector<FiberSlice>(fibers, FiberSlice{std::move(intervals), {}}));
  }

  std::size_t fiber_count() const noexcept { return slices_.size(); }
  const std::vector<FiberSlice>& slices() const noexcept { return slices_; }
  const FiberSlice& slice(std::size_t i) const { return slices_.at(i); }

  bool is_empty() const {
    return std::all_of(slices_.begin(), slices_.end(), [](const FiberSlice& s) { return s.empty(); });
  }

  /// Throws unless the fiber count matches and every atom pick is an atom of that fiber.
  void check_against(const FiberedSpace& space) const {
    if (slices_.size() != space.size()) {
      throw StructuralMismatch("event has " + std::to_string(slices_.size()) + " fibers, space has " +
                               std::to_string(space.size()));
    }
    for (std::size_t i = 0; i < slices_.size(); ++i) {
      for (const auto& loc : slices_[i].atom_picks) {
        if (!space.measure(i).atom_weight(loc)) {
          throw InvariantViolation("fiber " + std::to_string(i) + ": atom pick " + to_string(loc) +
                                   " is not an atom location of that fiber");
        }
      }
    }
  }

  friend bool operator==(const EventSet&, const EventSet&) = default;

 private:
  std::vector<FiberSlice> slices_;
};

enum class SetOp { union_, intersect, difference };

namespace detail {

inline bool keep(SetOp op, bool in_a, bool in_b) {
  switch (op) {
    case SetOp::union_: return in_a || in_b;
    case SetOp::intersect: return in_a && in_b;
    case SetOp::difference: return in_a && !in_b;
  }
  return false;
}

/// Endpoint sweep over the elementary segments cut out by both interval lists.
inline std::vector<Interval> combine_intervals(SetOp op, const std::vector<Interval>& a, const std::vector<Interval>& b) {
  std::vector<Scalar> cuts;
  cuts.reserve(2 * (a.size() + b.size()));
  for (const auto& iv : a) { cuts.push_back(iv.lo); cuts.push_back(iv.hi); }
  for (const auto& iv : b) { cuts.push_back(iv.lo); cuts.push_back(iv.hi); }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  std::vector<Interval> out;
  std::size_t ia = 0, ib = 0;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    const Scalar& lo = cuts[k];
    while (ia < a.size() && a[ia].hi <= lo) ++ia;
    while (ib < b.size() && b[ib].hi <= lo) ++ib;
    bool in_a = ia < a.size() && a[ia].lo <= lo;
    bool in_b = ib < b.size() && b[ib].lo <= lo;
    if (keep(op, in_a, in_b)) out.push_back({lo, cuts[k + 1]});
  }
  return merge_adjacent(std::move(out));
}

inline std::vector<Scalar> combine_picks(SetOp op, const std::vector<Scalar>& a, const std::vector<Scalar>& b) {
  std::vector<Scalar> out;
  switch (op) {
    case SetOp::union_: std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out)); break;
    case SetOp::intersect: std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out)); break;
    case SetOp::difference: std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out)); break;
  }
  return out;
}

}  // namespace detail

inline EventSet combine(SetOp op, const EventSet& a, const EventSet& b) {
  if (a.fiber_count() != b.fiber_count()) {
    throw StructuralMismatch("cannot combine events over " + std::to_string(a.fiber_count()) + " and " +
                             std::to_string(b.fiber_count()) + " fibers");
  }
  std::vector<FiberSlice> out(a.fiber_count());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i].intervals = detail::combine_intervals(op, a.slice(i).intervals, b.slice(i).intervals);
    out[i].atom_picks = detail::combine_picks(op, a.slice(i).atom_picks, b.slice(i).atom_picks);
  }
  return EventSet(std::move(out));
}

inline EventSet set_union(const EventSet& a, const EventSet& b) { return combine(SetOp::union_, a, b); }
inline EventSet set_intersect(const EventSet& a, const EventSet& b) { return combine(SetOp::intersect, a, b); }
inline EventSet set_difference(const EventSet& a, const EventSet& b) { return combine(SetOp::difference, a, b); }

/// A is covered by B on every fiber, intervals and atom picks alike.
inline bool is_subset(const EventSet& a, const EventSet& b) { return set_difference(a, b).is_empty(); }

}  // namespace condatom
