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

// A uniform random variable independent of F1, built two ways.
//
// build_dyadic_family halves level by level: B_0 = {}, B_1 = Omega and
// B_{(2k+1)/2^{n+1}} = B_{k/2^n} u split(B_{(k+1)/2^n} \ B_{k/2^n}, 1/2).
// Every stored set has E[1_{B_t}|F1] = t on every fiber, which is both
// uniformity and independence from F1.
//
// build_uniform takes the direct route: on each fiber U is the conditional
// diffuse CDF, so {U < t} is the left-fill of mass t. The two routes agree
// up to null sets and are cross-checked against each other in the tests.

#include <algorithm>
#include <cstddef>
#include <optional>
#include <vector>

#include "condatom/atomless.hpp"
#include "condatom/conditional.hpp"
#include "condatom/errors.hpp"
#include "condatom/event_set.hpp"
#include "condatom/fibered_space.hpp"
#include "condatom/piecewise_linear.hpp"
#include "condatom/scalar.hpp"

namespace condatom {

namespace detail {

inline void require_atomless(const FiberedSpace& space) {
  if (auto v = is_conditionally_atomless(space); !v.atomless()) {
    throw AtomObstruction(v.witness->fiber, to_string(v.witness->location));
  }
}

}  // namespace detail

/// The increasing family (B_t) at dyadic levels t = k 2^-depth.
class DyadicFamily {
 public:
  DyadicFamily(unsigned depth, std::vector<EventSet> sets) : depth_(depth), sets_(std::move(sets)) {
    if (sets_.size() != (std::size_t{1} << depth_) + 1) {
      throw InvariantViolation("dyadic family of depth " + std::to_string(depth_) + " needs " +
                               std::to_string((std::size_t{1} << depth_) + 1) + " sets");
    }
  }

  unsigned depth() const noexcept { return depth_; }
  std::size_t size() const noexcept { return sets_.size(); }
  /// B_{k 2^-depth}.
  const EventSet& at(std::size_t k) const { return sets_.at(k); }
  Scalar level(std::size_t k) const { return dyadic(k, depth_); }
  const std::vector<EventSet>& sets() const noexcept { return sets_; }

 private:
  unsigned depth_;
  std::vector<EventSet> sets_;
};

/// Repeated halving with split(., 1/2), exactly as in the dyadic construction.
inline DyadicFamily build_dyadic_family(const FiberedSpace& space, unsigned depth) {
  detail::require_atomless(space);
  if (depth > 24) throw PreconditionViolation("dyadic depth " + std::to_string(depth) + " exceeds 24");
  const auto half = FiberFunction::constant(space.size(), Scalar(1, 2));
  std::vector<EventSet> level{EventSet::empty(space.size()), EventSet::full(space)};
  for (unsigned n = 0; n < depth; ++n) {
    std::vector<EventSet> next;
    next.reserve(2 * level.size() - 1);
    for (std::size_t k = 0; k + 1 < level.size(); ++k) {
      EventSet gap = set_difference(level[k + 1], level[k]);
      next.push_back(level[k]);
      next.push_back(set_union(level[k], split(space, gap, half)));
    }
    next.push_back(level.back());
    level = std::move(next);
  }
  return DyadicFamily(depth, std::move(level));
}

/// B_t for any rational t in [0,1]: the left-fill of mass t on every fiber.
inline EventSet set_at_level(const FiberedSpace& space, const Scalar& t) {
  detail::require_atomless(space);
  if (!in_unit_interval(t)) throw PreconditionViolation("level " + to_string(t) + " outside [0,1]");
  return split(space, EventSet::full(space), FiberFunction::constant(space.size(), t));
}

/// U as one nondecreasing piecewise-linear map per fiber: the conditional CDF y -> K(i, [0,y)).
class UniformRV {
 public:
  explicit UniformRV(std::vector<PiecewiseLinear> maps) : maps_(std::move(maps)) {
    for (std::size_t i = 0; i < maps_.size(); ++i) {
      const auto& u = maps_[i];
      if (u.values().front() != 0 || u.values().back() > 1 || !u.is_nondecreasing()) {
        throw InvariantViolation("uniform map on fiber " + std::to_string(i) +
                                 " must be nondecreasing with u(0) = 0 and u(1) <= 1");
      }
    }
  }

  std::size_t size() const noexcept { return maps_.size(); }
  const PiecewiseLinear& map(std::size_t i) const { return maps_.at(i); }
  const std::vector<PiecewiseLinear>& maps() const noexcept { return maps_; }

  friend bool operator==(const UniformRV&, const UniformRV&) = default;

 private:
  std::vector<PiecewiseLinear> maps_;
};

inline UniformRV build_uniform(const FiberedSpace& space) {
  detail::require_atomless(space);
  std::vector<PiecewiseLinear> maps;
  maps.reserve(space.size());
  for (const auto& f : space.fibers()) maps.push_back(f.measure.diffuse_cdf_function());
  return UniformRV(std::move(maps));
}

/// {y : u_i(y) < t} on every fiber, read off the piecewise-linear maps.
inline EventSet sublevel_set(const UniformRV& u, const Scalar& t) {
  std::vector<FiberSlice> slices(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (t <= 0) continue;
    const auto& map = u.map(i);
    Scalar edge = map.values().back() < t ? Scalar(1) : map.first_reaching(t);
    if (edge > 0) slices[i].intervals.push_back({0, std::move(edge)});
  }
  return EventSet(std::move(slices));
}

/// The level-n staircase U_n = sum_k k 2^-n 1_{B_k \ B_{k-1}} evaluated at y on one fiber.
/// Points outside every B_t (only possible in null sets) map to 1.
inline Scalar staircase_value(const DyadicFamily& family, std::size_t fiber, const Scalar& y) {
  for (std::size_t k = 0; k < family.size(); ++k) {
    if (family.at(k).slice(fiber).contains_point(y)) return family.level(k);
  }
  return 1;
}

/// g_i(t) = K(i, A n B_t) as a piecewise-linear function of t.
///
/// B_t = [0, q(t)) with q the generalized inverse of the diffuse CDF F. Between
/// consecutive values F(x) taken at density breakpoints and at interval ends of A,
/// both q and the A-part are affine, so those values are the only nodes needed.
inline PiecewiseLinear intersection_profile(const FiberedSpace& space, const EventSet& a, std::size_t fiber) {
  detail::require_atomless(space);
  a.check_against(space);
  const auto& mu = space.measure(fiber);
  const auto& slice = a.slice(fiber);
  std::vector<Scalar> xs(mu.breakpoints());
  for (const auto& iv : slice.intervals) {
    xs.push_back(iv.lo);
    xs.push_back(iv.hi);
  }
  std::vector<Scalar> ts;
  ts.reserve(xs.size() + 2);
  ts.emplace_back(0);
  ts.emplace_back(1);
  for (const auto& x : xs) ts.push_back(mu.diffuse_cdf(x));
  std::sort(ts.begin(), ts.end());
  ts.erase(std::unique(ts.begin(), ts.end()), ts.end());

  std::vector<Scalar> gs;
  gs.reserve(ts.size());
  for (const auto& t : ts) {
    FiberSlice prefix{left_fill(mu, FiberSlice{{Interval{0, 1}}, {}}, t), {}};
    FiberSlice both{detail::combine_intervals(SetOp::intersect, slice.intervals, prefix.intervals), {}};
    gs.push_back(diffuse_slice_measure(mu, both));
  }
  return PiecewiseLinear(std::move(ts), std::move(gs));
}

struct SplittingLevel {
  Scalar t;
  FiberSet fibers;  // { i : 0 < K(i, A n B_t) < K(i, A) }, nonempty
};

/// A level t in (0,1) at which A n B_t splits A strictly on a nonempty set of fibers.
///
/// Collects the nodes of every g_i, then returns the midpoint of the first gap between
/// consecutive nodes where some g_i sits strictly between 0 and K(i, A). nullopt iff
/// E[1_A|F1] = 0 on every fiber.
inline std::optional<SplittingLevel> splitting_level_scan(const FiberedSpace& space, const EventSet& a) {
  detail::require_atomless(space);
  a.check_against(space);
  FiberFunction total = cond_expectation(space, a);
  std::vector<PiecewiseLinear> profiles;
  std::vector<Scalar> nodes;
  for (std::size_t i = 0; i < space.size(); ++i) {
    profiles.push_back(intersection_profile(space, a, i));
    const auto& ns = profiles.back().nodes();
    nodes.insert(nodes.end(), ns.begin(), ns.end());
  }
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());

  for (std::size_t j = 0; j + 1 < nodes.size(); ++j) {
    Scalar mid = (nodes[j] + nodes[j + 1]) / 2;
    EventSet level = set_at_level(space, mid);
    FiberFunction inside = cond_expectation(space, set_intersect(a, level));
    FiberSet fibers;
    for (std::size_t i = 0; i < space.size(); ++i) {
      if (inside[i] > 0 && inside[i] < total[i]) fibers.insert(i);
    }
    if (!fibers.empty()) return SplittingLevel{std::move(mid), std::move(fibers)};
  }
  return std::nullopt;
}

}  // namespace condatom
