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

// Seeded property checks. Each check builds its own random instance from a
// single 64-bit seed and verifies one structural identity with exact
// equality. The selftest command and the acceptance suite run them in bulk.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "condatom/atomless.hpp"
#include "condatom/conditional.hpp"
#include "condatom/event_set.hpp"
#include "condatom/generator.hpp"
#include "condatom/kernel.hpp"
#include "condatom/multi_measure.hpp"
#include "condatom/scenario.hpp"
#include "condatom/uniform.hpp"

namespace condatom {

struct CheckResult {
  bool ok = true;
  std::string failure;

  static CheckResult fail(std::string why) { return {false, std::move(why)}; }
};

namespace props {

inline GeneratorParams atomless_params() {
  GeneratorParams p;
  p.atom_probability = 0;
  return p;
}

/// A random event of positive probability (resampled a few times, else Omega).
inline EventSet nonnull_event(Rng& rng, const FiberedSpace& space) {
  for (int attempt = 0; attempt < 32; ++attempt) {
    EventSet a = random_event(rng, space);
    if (measure(space, a) > 0) return a;
  }
  return EventSet::full(space);
}

/// cond_expectation(split(C, h)) = h * cond_expectation(C), with split(C, h) inside C.
inline CheckResult split_exactness(std::uint64_t seed) {
  Instance inst = generate_instance(seed, atomless_params());
  Rng rng(mix_seed(seed, 1, 0));
  const auto& s = inst.space;
  const EventSet& c = inst.events.front();
  FiberFunction h = random_coefficient(rng, s.size());
  EventSet b = split(s, c, h);
  if (!is_subset(b, c)) return CheckResult::fail("split result is not inside C");
  if (cond_expectation(s, b) != h * cond_expectation(s, c)) return CheckResult::fail("E[1_B|F1] != h E[1_C|F1]");
  return {};
}

/// E[1_{B_t}|F1] = t on every fiber for every dyadic t, and B_s inside B_t for s <= t.
inline CheckResult dyadic_family(std::uint64_t seed, unsigned depth) {
  Instance inst = generate_instance(seed, atomless_params());
  const auto& s = inst.space;
  DyadicFamily family = build_dyadic_family(s, depth);
  for (std::size_t k = 0; k < family.size(); ++k) {
    if (cond_expectation(s, family.at(k)) != FiberFunction::constant(s.size(), family.level(k))) {
      return CheckResult::fail("E[1_B_t|F1] != t at t = " + to_string(family.level(k)));
    }
    if (k > 0 && !is_subset(family.at(k - 1), family.at(k))) {
      return CheckResult::fail("family not monotone at t = " + to_string(family.level(k)));
    }
  }
  return {};
}

/// K(i, {u_i < t}) = t on a grid of levels, and zero pushforward residuals for the standard test family.
inline CheckResult uniform_pushforward(std::uint64_t seed, unsigned grid_levels) {
  Instance inst = generate_instance(seed, atomless_params());
  const auto& s = inst.space;
  UniformRV u = build_uniform(s);
  for (unsigned j = 1; j <= grid_levels; ++j) {
    Scalar t = Scalar(Integer(j), Integer(grid_levels));
    if (cond_expectation(s, sublevel_set(u, t)) != FiberFunction::constant(s.size(), t)) {
      return CheckResult::fail("K(i, {u < t}) != t at t = " + to_string(t));
    }
  }
  auto residuals = pushforward_uniformity_check(s, u, standard_test_family(s, u));
  for (std::size_t i = 0; i < residuals.size(); ++i) {
    for (std::size_t j = 0; j < residuals[i].size(); ++j) {
      if (residuals[i][j] != 0) {
        return CheckResult::fail("nonzero pushforward residual " + to_string(residuals[i][j]) + " on fiber " +
                                 std::to_string(i) + ", test " + std::to_string(j));
      }
    }
  }
  return {};
}

/// Kernel scan and atomlessness verdict agree; on atomless spaces strict splits exist
/// exactly on { E[1_A|F1] > 0 } for `sets` random events of positive probability.
inline CheckResult kernel_agreement(std::uint64_t seed, std::size_t sets) {
  GeneratorParams gp;
  gp.atom_probability = Scalar(1, 2);
  Instance inst = generate_instance(seed, gp);
  const auto& s = inst.space;
  KernelReport report = kernel_atom_scan(s);
  AtomlessVerdict verdict = is_conditionally_atomless(s);
  if (report.atomless() != verdict.atomless()) return CheckResult::fail("kernel scan and atomless verdict disagree");
  if (!verdict.atomless()) {
    const auto& w = *verdict.witness;
    const auto& atoms = report.atoms.at(w.fiber);
    if (std::find(atoms.begin(), atoms.end(), Atom{w.location, w.weight}) == atoms.end()) {
      return CheckResult::fail("witness atom missing from the kernel report");
    }
    return {};
  }
  Rng rng(mix_seed(seed, 4, 0));
  for (std::size_t k = 0; k < sets; ++k) {
    EventSet a = nonnull_event(rng, s);
    FiberFunction ce = cond_expectation(s, a);
    FiberSet positive;
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (ce[i] > 0) positive.insert(i);
    }
    auto witness = strict_split_witness(s, a);
    if (!witness) return CheckResult::fail("no strict split on an atomless space");
    if (witness->fibers != positive) return CheckResult::fail("strict split region != {E[1_A|F1] > 0}");
    if (!is_subset(witness->subset, a)) return CheckResult::fail("strict split witness not inside A");
    FiberFunction inner = cond_expectation(s, witness->subset);
    for (std::size_t i : positive) {
      if (!(inner[i] > 0 && inner[i] < ce[i])) return CheckResult::fail("strict sandwich fails on fiber " + std::to_string(i));
    }
  }
  return {};
}

/// Strictly decreasing chain with 0 < E[1_{B_k}|F1] <= 2^-k on the designated fibers.
inline CheckResult shrink_chain(std::uint64_t seed, std::size_t n) {
  Instance inst = generate_instance(seed, atomless_params());
  const auto& s = inst.space;
  Rng rng(mix_seed(seed, 5, 0));
  EventSet c = random_positive_event(rng, s);
  FiberSet fibers;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (rng.chance(Scalar(1, 2))) fibers.insert(i);
  }
  if (fibers.empty()) fibers.insert(rng.below(s.size()));
  auto chain = shrink_sequence(s, c, fibers, n);
  if (chain.size() != n + 1 || chain.front() != c) return CheckResult::fail("chain must start at C and have n + 1 sets");
  for (std::size_t k = 0; k < chain.size(); ++k) {
    if (k > 0 && (!is_subset(chain[k], chain[k - 1]) || chain[k] == chain[k - 1])) {
      return CheckResult::fail("chain not strictly decreasing at k = " + std::to_string(k));
    }
    FiberFunction ce = cond_expectation(s, chain[k]);
    for (std::size_t i : fibers) {
      if (!(ce[i] > 0 && ce[i] <= dyadic(1, static_cast<unsigned>(k)))) {
        return CheckResult::fail("bound 0 < E[1_B_k|F1] <= 2^-k fails at k = " + std::to_string(k));
      }
    }
  }
  return {};
}

/// The scan finds a level with a strict sandwich; g_i(t) = K(i, A n B_t) is 1-Lipschitz
/// and nondecreasing on all dyadic pairs at `depth`, runs from 0 to K(i, A), and matches
/// its piecewise-linear profile.
inline CheckResult splitting_scan(std::uint64_t seed, unsigned depth) {
  Instance inst = generate_instance(seed, atomless_params());
  const auto& s = inst.space;
  Rng rng(mix_seed(seed, 6, 0));
  EventSet a = nonnull_event(rng, s);
  FiberFunction total = cond_expectation(s, a);

  auto found = splitting_level_scan(s, a);
  if (!found) return CheckResult::fail("scan found no level for an event of positive probability");
  if (!(found->t > 0 && found->t < 1)) return CheckResult::fail("scan level outside (0,1)");
  FiberFunction at = cond_expectation(s, set_intersect(a, set_at_level(s, found->t)));
  FiberSet strict;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (at[i] > 0 && at[i] < total[i]) strict.insert(i);
  }
  if (strict.empty() || strict != found->fibers) return CheckResult::fail("scan fiber set is not the strict-sandwich set");

  const std::size_t points = (std::size_t{1} << depth) + 1;
  std::vector<FiberFunction> g;
  g.reserve(points);
  for (std::size_t k = 0; k < points; ++k) g.push_back(cond_expectation(s, set_intersect(a, set_at_level(s, dyadic(k, depth)))));
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (g.front()[i] != 0 || g.back()[i] != total[i]) return CheckResult::fail("g_i(0) != 0 or g_i(1) != E[1_A|F1]");
    PiecewiseLinear profile = intersection_profile(s, a, i);
    // For all s <= t: g(s) <= g(t) and g(t) - t <= g(s) - s. Running extremes over s <= t
    // check every pair at once.
    Scalar max_g = g.front()[i];
    Scalar min_excess = g.front()[i];
    for (std::size_t k = 0; k < points; ++k) {
      Scalar t = dyadic(k, depth);
      Scalar excess = g[k][i] - t;
      if (g[k][i] < max_g) return CheckResult::fail("g_i decreases before t = " + to_string(t));
      if (excess > min_excess) return CheckResult::fail("g_i(t) - g_i(s) > t - s before t = " + to_string(t));
      if (profile(t) != g[k][i]) return CheckResult::fail("profile disagrees with direct g_i at t = " + to_string(t));
      max_g = g[k][i];
      min_excess = std::min(min_excess, excess);
    }
  }
  return {};
}

/// Density partitions for two positive weight vectors coincide modulo null cells, and
/// conditional expectations on a null-only refinement agree off the null cells.
inline CheckResult mixture_invariance(std::uint64_t seed) {
  GeneratorParams gp;
  gp.atom_probability = Scalar(1, 4);
  Rng rng(mix_seed(seed, 7, 0));
  gp.measure_count = static_cast<std::size_t>(rng.between(1, 4));
  Instance inst = generate_instance(seed, gp);
  MeasureFamily f = inst.measures->family();
  MeasureFamily g = f.with_lambdas(random_weights(rng, f.measure_count()));

  auto base_f = mixture(f);
  auto base_g = mixture(g);
  CellMask nulls = null_cells(base_f);
  if (nulls != null_cells(base_g)) return CheckResult::fail("null cells depend on the mixture weights");
  CellPartition pf = density_partition(density_vectors(f));
  CellPartition pg = density_partition(density_vectors(g));
  if (!inclusion_mod_null(pf, pg, nulls) || !inclusion_mod_null(pg, pf, nulls)) {
    return CheckResult::fail("density partitions differ modulo null cells");
  }
  return {};
}

/// E[xi|F] = E[xi|G] off null cells whenever F is inside G and G inside sigma(F, N).
inline CheckResult refinement_agreement(std::uint64_t seed) {
  GeneratorParams gp;
  gp.atom_probability = Scalar(1, 4);
  Rng rng(mix_seed(seed, 8, 0));
  gp.measure_count = static_cast<std::size_t>(rng.between(1, 4));
  Instance inst = generate_instance(seed, gp);
  MeasureFamily f = inst.measures->family();
  auto base = mixture(f);
  CellMask nulls = null_cells(base);
  CellPartition coarse = density_partition(density_vectors(f));

  // Refine only on null cells: each null cell gets a random fresh label.
  std::vector<std::size_t> labels(coarse.block_of);
  for (std::size_t c = 0; c < labels.size(); ++c) {
    if (nulls[c]) labels[c] = coarse.block_count + rng.below(labels.size());
  }
  CellPartition fine = CellPartition::from_labels(labels);
  const CellMask none(labels.size(), false);
  if (!inclusion_mod_null(coarse, fine, none)) return CheckResult::fail("refinement does not contain the coarse partition");
  if (!inclusion_mod_null(fine, coarse, nulls)) return CheckResult::fail("refinement not inside sigma(F, N)");

  std::vector<Scalar> xi;
  for (std::size_t c = 0; c < labels.size(); ++c) {
    Integer num = Integer(rng.between(0, 20)) - 10;
    xi.emplace_back(num, Integer(rng.between(1, 7)));
  }
  auto ef = cond_exp_on_partition(base, coarse, xi);
  auto eg = cond_exp_on_partition(base, fine, xi);
  for (std::size_t c = 0; c < labels.size(); ++c) {
    if (!nulls[c] && ef[c] != eg[c]) return CheckResult::fail("conditional expectations differ on a non-null cell");
  }
  return {};
}

/// The density verdict matches the verdict on the regrouped fibered space; when atomless,
/// the block-wise U has exactly uniform cumulative masses on a grid of levels.
inline CheckResult density_verdict(std::uint64_t seed, unsigned grid_levels) {
  GeneratorParams gp;
  Rng rng(mix_seed(seed, 9, 0));
  gp.atom_probability = rng.chance(Scalar(1, 2)) ? Scalar(0) : Scalar(1, 3);
  gp.measure_count = static_cast<std::size_t>(rng.between(1, 4));
  Instance inst = generate_instance(seed, gp);
  MeasureFamily f = inst.measures->family();
  DensityVerdict verdict = conditionally_atomless_wrt_densities(f);
  FiberedSpace regrouped = regroup_by_blocks(f, verdict.partition);
  if (verdict.atomless() != is_conditionally_atomless(regrouped).atomless()) {
    return CheckResult::fail("density verdict disagrees with the regrouped space");
  }
  if (!verdict.atomless()) return {};
  auto base = mixture(f);
  std::vector<Scalar> block_mass(verdict.partition.block_count, Scalar(0));
  for (std::size_t c = 0; c < base.size(); ++c) block_mass[verdict.partition.block_of[c]] += base[c];
  for (std::size_t b = 0; b < block_mass.size(); ++b) {
    if (block_mass[b] == 0) continue;
    for (unsigned j = 0; j <= grid_levels; ++j) {
      Scalar t = Scalar(Integer(j), Integer(grid_levels));
      if (block_uniform_cdf(base, verdict.partition, *verdict.uniform, b, t) != t) {
        return CheckResult::fail("block " + std::to_string(b) + " not uniform at t = " + to_string(t));
      }
    }
  }
  return {};
}

/// The dyadic construction and the direct left-fill give the same slice measures at
/// every dyadic level, and their symmetric difference is null.
inline CheckResult oracle_agreement(std::uint64_t seed, unsigned depth) {
  Instance inst = generate_instance(seed, atomless_params());
  const auto& s = inst.space;
  DyadicFamily family = build_dyadic_family(s, depth);
  for (std::size_t k = 0; k < family.size(); ++k) {
    EventSet direct = set_at_level(s, family.level(k));
    if (cond_expectation(s, direct) != cond_expectation(s, family.at(k))) {
      return CheckResult::fail("slice measures differ at t = " + to_string(family.level(k)));
    }
    EventSet sym = set_union(set_difference(direct, family.at(k)), set_difference(family.at(k), direct));
    if (measure(s, sym) != 0) return CheckResult::fail("symmetric difference not null at t = " + to_string(family.level(k)));
  }
  return {};
}

/// parse(serialize(scenario)) == scenario, and serializing again reproduces the bytes.
inline CheckResult scenario_round_trip(std::uint64_t seed) {
  Scenario sc = random_scenario(seed);
  std::string text = serialize_scenario(sc);
  Scenario back = parse_scenario(text);
  if (!(back == sc)) return CheckResult::fail("parsed scenario differs from the original");
  if (serialize_scenario(back) != text) return CheckResult::fail("re-serialization changed the bytes");
  return {};
}

}  // namespace props

struct Tally {
  std::string name;
  std::size_t passed = 0;
  std::size_t failed = 0;
  std::string first_failure;

  bool ok() const noexcept { return failed == 0; }
};

/// Runs `check` on `count` derived seeds. Exceptions count as failures.
inline Tally run_suite(std::string name, std::uint64_t seed, std::uint64_t stream, std::size_t count,
                       const std::function<CheckResult(std::uint64_t)>& check) {
  Tally tally{std::move(name), 0, 0, {}};
  for (std::size_t k = 0; k < count; ++k) {
    const std::uint64_t instance_seed = mix_seed(seed, stream, k);
    CheckResult r;
    try {
      r = check(instance_seed);
    } catch (const std::exception& e) {
      r = CheckResult::fail(std::string("exception: ") + e.what());
    }
    if (r.ok) {
      ++tally.passed;
    } else {
      if (tally.failed == 0) tally.first_failure = "instance " + std::to_string(k) + ": " + r.failure;
      ++tally.failed;
    }
  }
  return tally;
}

}  // namespace condatom
