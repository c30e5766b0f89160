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

// Seeded random instances for the property suites. Only std::mt19937_64 is
// used, whose output sequence is fixed by the standard, and every bounded draw
// is done here rather than through <random> distributions, whose algorithms
// vary between standard libraries. Random masses are renormalized by exact
// division, so every instance satisfies its invariants by construction.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "condatom/conditional.hpp"
#include "condatom/event_set.hpp"
#include "condatom/fibered_space.hpp"
#include "condatom/multi_measure.hpp"
#include "condatom/scalar.hpp"

namespace condatom {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform-ish integer in [0, n).
  std::uint64_t below(std::uint64_t n) { return n == 0 ? 0 : engine_() % n; }
  std::uint64_t between(std::uint64_t lo, std::uint64_t hi) { return lo + below(hi - lo + 1); }

  /// True with probability p (p in [0,1]).
  bool chance(const Scalar& p) {
    if (p <= 0) return false;
    if (p >= 1) return true;
    const auto den = static_cast<std::uint64_t>(boost::multiprecision::denominator(p));
    const auto num = static_cast<std::uint64_t>(boost::multiprecision::numerator(p));
    return below(den) < num;
  }

  /// `count` distinct integers from [lo, hi], sorted.
  std::vector<std::uint64_t> distinct_sorted(std::uint64_t count, std::uint64_t lo, std::uint64_t hi) {
    std::vector<std::uint64_t> pool;
    for (auto v = lo; v <= hi; ++v) pool.push_back(v);
    count = std::min<std::uint64_t>(count, pool.size());
    for (std::uint64_t j = 0; j < count; ++j) {
      auto pick = j + below(pool.size() - j);
      std::swap(pool[j], pool[pick]);
    }
    pool.resize(count);
    std::sort(pool.begin(), pool.end());
    return pool;
  }

 private:
  std::mt19937_64 engine_;
};

/// SplitMix64 finalizer; derives independent per-instance seeds.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1) + 0xbf58476d1ce4e5b9ULL * index;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

struct GeneratorParams {
  std::size_t max_fibers = 8;   // <= 8
  std::size_t max_pieces = 16;  // density pieces per fiber, <= 16
  Scalar atom_probability = 0;  // per fiber
  std::size_t measure_count = 0;  // 0 = no measure family, otherwise <= 4
  std::size_t event_count = 1;
  std::uint64_t grid = 64;  // breakpoints and interval ends are multiples of 1/grid
};

struct MeasureSpec {
  std::vector<Scalar> lambdas;
  std::vector<FiberedSpace> components;

  MeasureFamily family() const { return family_from_spaces(components, lambdas); }

  friend bool operator==(const MeasureSpec&, const MeasureSpec&) = default;
};

struct Instance {
  FiberedSpace space;
  std::vector<EventSet> events;
  std::optional<MeasureSpec> measures;
};

namespace detail {

inline Scalar grid_point(std::uint64_t k, std::uint64_t grid) { return Scalar(Integer(k), Integer(grid)); }

}  // namespace detail

inline FiberMeasure random_fiber_measure(Rng& rng, const GeneratorParams& params, const Scalar& zero_density_chance) {
  const std::uint64_t grid = params.grid;
  const auto pieces = static_cast<std::uint64_t>(rng.between(1, std::max<std::size_t>(1, params.max_pieces)));
  std::vector<Scalar> breakpoints{0};
  for (auto k : rng.distinct_sorted(pieces - 1, 1, grid - 1)) breakpoints.push_back(detail::grid_point(k, grid));
  breakpoints.emplace_back(1);

  std::vector<Atom> atoms;
  if (rng.chance(params.atom_probability)) {
    for (auto k : rng.distinct_sorted(rng.between(1, 3), 0, grid)) {
      atoms.push_back({detail::grid_point(k, grid), Scalar(rng.between(1, 9))});
    }
  }

  std::vector<Scalar> densities;
  Scalar diffuse = 0;
  for (std::size_t j = 0; j + 1 < breakpoints.size(); ++j) {
    Scalar d = rng.chance(zero_density_chance) ? Scalar(0) : Scalar(rng.between(1, 9));
    diffuse += d * (breakpoints[j + 1] - breakpoints[j]);
    densities.push_back(std::move(d));
  }
  if (atoms.empty() && diffuse == 0) {
    auto j = rng.below(densities.size());
    densities[j] = rng.between(1, 9);
    diffuse = densities[j] * (breakpoints[j + 1] - breakpoints[j]);
  }

  Scalar total = diffuse;
  for (const auto& a : atoms) total += a.weight;
  for (auto& d : densities) d /= total;
  for (auto& a : atoms) a.weight /= total;
  return FiberMeasure(std::move(atoms), std::move(breakpoints), std::move(densities));
}

inline std::vector<Scalar> random_weights(Rng& rng, std::size_t n) {
  std::vector<Scalar> w;
  Scalar total = 0;
  for (std::size_t i = 0; i < n; ++i) {
    w.emplace_back(rng.between(1, 9));
    total += w.back();
  }
  for (auto& x : w) x /= total;
  return w;
}

inline FiberedSpace random_space(Rng& rng, const GeneratorParams& params, std::size_t fibers,
                                 const Scalar& zero_density_chance = Scalar(1, 8)) {
  auto weights = random_weights(rng, fibers);
  std::vector<Fiber> out;
  for (std::size_t i = 0; i < fibers; ++i) out.push_back({weights[i], random_fiber_measure(rng, params, zero_density_chance)});
  return FiberedSpace(std::move(out));
}

inline FiberSlice random_slice(Rng& rng, const FiberMeasure& mu, std::uint64_t grid) {
  FiberSlice s;
  auto ends = rng.distinct_sorted(2 * rng.between(0, 3), 0, grid);
  for (std::size_t j = 0; j + 1 < ends.size(); j += 2) {
    s.intervals.push_back({detail::grid_point(ends[j], grid), detail::grid_point(ends[j + 1], grid)});
  }
  for (const auto& a : mu.atoms()) {
    if (rng.chance(Scalar(1, 2))) s.atom_picks.push_back(a.location);
  }
  return s;
}

/// A random event in canonical form.
inline EventSet random_event(Rng& rng, const FiberedSpace& space, std::uint64_t grid = 64) {
  std::vector<FiberSlice> slices;
  for (const auto& f : space.fibers()) slices.push_back(random_slice(rng, f.measure, grid));
  return EventSet(std::move(slices));
}

/// A random event whose slice has positive mass on every fiber (resampled per fiber).
inline EventSet random_positive_event(Rng& rng, const FiberedSpace& space, std::uint64_t grid = 64) {
  std::vector<FiberSlice> slices;
  for (const auto& f : space.fibers()) {
    FiberSlice s;
    for (int attempt = 0; attempt < 64; ++attempt) {
      s = random_slice(rng, f.measure, grid);
      if (slice_measure(f.measure, s) > 0) break;
    }
    if (slice_measure(f.measure, s) == 0) s = FiberSlice{{Interval{0, 1}}, {}};
    slices.push_back(std::move(s));
  }
  return EventSet(std::move(slices));
}

/// Coefficients k/16 with k uniform in 0..16, endpoints included.
inline FiberFunction random_coefficient(Rng& rng, std::size_t fibers) {
  std::vector<Scalar> h;
  for (std::size_t i = 0; i < fibers; ++i) h.emplace_back(Integer(rng.between(0, 16)), Integer(16));
  return FiberFunction(std::move(h));
}

inline MeasureSpec random_measure_spec(Rng& rng, const GeneratorParams& params, std::size_t fibers) {
  MeasureSpec spec;
  const std::size_t n = std::clamp<std::size_t>(params.measure_count, 1, 4);
  for (std::size_t k = 0; k < n; ++k) spec.components.push_back(random_space(rng, params, fibers, Scalar(1, 3)));
  spec.lambdas = random_weights(rng, n);
  return spec;
}

/// Deterministic function of (seed, params).
inline Instance generate_instance(std::uint64_t seed, const GeneratorParams& params) {
  Rng rng(seed);
  const auto fibers = static_cast<std::size_t>(rng.between(1, std::clamp<std::size_t>(params.max_fibers, 1, 8)));
  GeneratorParams p = params;
  p.max_pieces = std::clamp<std::size_t>(params.max_pieces, 1, 16);
  FiberedSpace space = random_space(rng, p, fibers);
  std::vector<EventSet> events;
  for (std::size_t e = 0; e < params.event_count; ++e) events.push_back(random_event(rng, space, p.grid));
  std::optional<MeasureSpec> measures;
  if (params.measure_count > 0) measures = random_measure_spec(rng, p, fibers);
  return {std::move(space), std::move(events), std::move(measures)};
}

}  // namespace condatom
