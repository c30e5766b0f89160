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

// Command dispatch for the condatom CLI. Every command returns a Report: a
// JSON document with a stable key order plus an exit status
//   0  every check passed
//   1  a check failed (including a verdict that the space is not atomless)
//   2  input error: bad scenario, missing field, violated precondition

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "condatom/atomless.hpp"
#include "condatom/conditional.hpp"
#include "condatom/errors.hpp"
#include "condatom/kernel.hpp"
#include "condatom/multi_measure.hpp"
#include "condatom/properties.hpp"
#include "condatom/scenario.hpp"
#include "condatom/uniform.hpp"

namespace condatom {

enum ExitStatus : int { kExitOk = 0, kExitCheckFailed = 1, kExitInputError = 2 };

struct Report {
  Json body;
  int exit_code = kExitOk;

  std::string text() const { return body.dump(2) + "\n"; }
};

/// Command-line overrides; they win over the scenario's "params".
struct RunOptions {
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> depth;
  std::optional<std::size_t> count;
};

inline const std::vector<std::string_view>& known_commands() {
  static const std::vector<std::string_view> names{"check", "split",  "shrink",    "family",  "uniform",
                                                   "scan",  "kernel", "densities", "selftest"};
  return names;
}

namespace detail {

inline Json fiber_function_json(const FiberFunction& f) { return scalars_json(f.values()); }

inline Json fiber_set_json(const FiberSet& s) {
  Json out = Json::array();
  for (auto i : s) out.push_back(i);
  return out;
}

inline Json witness_json(const AtomWitness& w) {
  return {{"fiber", w.fiber}, {"location", to_string(w.location)}, {"weight", to_string(w.weight)}};
}

inline Json piecewise_json(const PiecewiseLinear& f) {
  return {{"nodes", scalars_json(f.nodes())}, {"values", scalars_json(f.values())}};
}

inline const EventSet& named_set(const Scenario& sc, std::string_view fallback) {
  std::string name = sc.params.set.value_or(std::string(fallback));
  auto it = sc.sets.find(name);
  if (it == sc.sets.end()) throw PreconditionViolation("command needs the event \"" + name + "\" in \"sets\" (or params.set)");
  return it->second;
}

inline const EventSet* optional_set(const Scenario& sc) {
  if (sc.params.set) return &sc.sets.at(*sc.params.set);
  return nullptr;
}

inline Report cmd_check(const Scenario& sc) {
  Report r;
  AtomlessVerdict v = is_conditionally_atomless(sc.space);
  KernelReport k = kernel_atom_scan(sc.space);
  r.body["verdict"] = v.atomless() ? "atomless" : "atom";
  if (!v.atomless()) r.body["witness"] = witness_json(*v.witness);
  r.body["kernel_agrees"] = k.atomless() == v.atomless();
  if (const EventSet* a = optional_set(sc)) {
    FiberFunction ce = cond_expectation(sc.space, *a);
    FiberSet positive;
    for (std::size_t i = 0; i < ce.size(); ++i) {
      if (ce[i] > 0) positive.insert(i);
    }
    FiberSet region = maximal_split_region(sc.space, *a);
    Json ev;
    ev["set"] = *sc.params.set;
    ev["cond_expectation"] = fiber_function_json(ce);
    ev["maximal_split_region"] = fiber_set_json(region);
    ev["definition_holds"] = region == positive;
    if (auto w = strict_split_witness(sc.space, *a)) {
      ev["strict_split"] = {{"subset", event_json(w->subset)}, {"fibers", fiber_set_json(w->fibers)}};
    } else {
      ev["strict_split"] = nullptr;
    }
    r.body["event"] = std::move(ev);
  }
  r.exit_code = v.atomless() && k.atomless() == v.atomless() ? kExitOk : kExitCheckFailed;
  return r;
}

inline Report cmd_split(const Scenario& sc) {
  Report r;
  const EventSet& c = named_set(sc, "C");
  if (!sc.h) throw PreconditionViolation("split needs the coefficient \"h\"");
  EventSet b = split(sc.space, c, *sc.h);
  FiberFunction ce_c = cond_expectation(sc.space, c);
  FiberFunction ce_b = cond_expectation(sc.space, b);
  bool exact = ce_b == *sc.h * ce_c;
  bool nested = is_subset(b, c);
  r.body["result"] = event_json(b);
  r.body["cond_expectation_C"] = fiber_function_json(ce_c);
  r.body["cond_expectation_B"] = fiber_function_json(ce_b);
  r.body["checks"] = {{"exact", exact}, {"subset", nested}};
  r.exit_code = exact && nested ? kExitOk : kExitCheckFailed;
  return r;
}

inline Report cmd_shrink(const Scenario& sc) {
  Report r;
  const EventSet& c = named_set(sc, "C");
  FiberSet fibers;
  if (sc.params.fibers) {
    fibers.insert(sc.params.fibers->begin(), sc.params.fibers->end());
  } else {
    FiberFunction ce = cond_expectation(sc.space, c);
    for (std::size_t i = 0; i < ce.size(); ++i) {
      if (ce[i] > 0) fibers.insert(i);
    }
  }
  const std::size_t n = sc.params.n.value_or(3);
  auto chain = shrink_sequence(sc.space, c, fibers, n);
  bool ok = true;
  Json steps = Json::array();
  for (std::size_t k = 0; k < chain.size(); ++k) {
    FiberFunction ce = cond_expectation(sc.space, chain[k]);
    if (k > 0 && !is_subset(chain[k], chain[k - 1])) ok = false;
    for (auto i : fibers) {
      if (!(ce[i] > 0 && ce[i] <= dyadic(1, static_cast<unsigned>(k)))) ok = false;
    }
    steps.push_back({{"k", k}, {"set", event_json(chain[k])}, {"cond_expectation", fiber_function_json(ce)}});
  }
  r.body["fibers"] = fiber_set_json(fibers);
  r.body["chain"] = std::move(steps);
  r.body["checks"] = {{"decreasing_with_bound", ok}};
  r.exit_code = ok ? kExitOk : kExitCheckFailed;
  return r;
}

inline Report cmd_family(const Scenario& sc, unsigned depth) {
  Report r;
  DyadicFamily family = build_dyadic_family(sc.space, depth);
  bool exact = true;
  bool monotone = true;
  Json levels = Json::array();
  for (std::size_t k = 0; k < family.size(); ++k) {
    FiberFunction ce = cond_expectation(sc.space, family.at(k));
    if (ce != FiberFunction::constant(sc.space.size(), family.level(k))) exact = false;
    if (k > 0 && !is_subset(family.at(k - 1), family.at(k))) monotone = false;
    levels.push_back({{"t", to_string(family.level(k))}, {"set", event_json(family.at(k))}});
  }
  r.body["depth"] = depth;
  r.body["levels"] = std::move(levels);
  if (sc.params.t) r.body["set_at_t"] = {{"t", to_string(*sc.params.t)}, {"set", event_json(set_at_level(sc.space, *sc.params.t))}};
  r.body["checks"] = {{"exact_levels", exact}, {"monotone", monotone}};
  r.exit_code = exact && monotone ? kExitOk : kExitCheckFailed;
  return r;
}

inline Report cmd_uniform(const Scenario& sc) {
  Report r;
  UniformRV u = build_uniform(sc.space);
  auto tests = standard_test_family(sc.space, u);
  auto residuals = pushforward_uniformity_check(sc.space, u, tests);
  bool zero = true;
  Json maps = Json::array();
  for (const auto& m : u.maps()) maps.push_back(piecewise_json(m));
  Json res = Json::array();
  for (const auto& row : residuals) {
    for (const auto& x : row) zero = zero && x == 0;
    res.push_back(scalars_json(row));
  }
  r.body["maps"] = std::move(maps);
  r.body["test_nodes"] = scalars_json(system_breakpoints(sc.space, u));
  r.body["residuals"] = std::move(res);
  if (sc.params.t) r.body["sublevel_set"] = {{"t", to_string(*sc.params.t)}, {"set", event_json(sublevel_set(u, *sc.params.t))}};
  r.body["checks"] = {{"residuals_zero", zero}};
  r.exit_code = zero ? kExitOk : kExitCheckFailed;
  return r;
}

inline Report cmd_scan(const Scenario& sc) {
  Report r;
  const EventSet& a = named_set(sc, "A");
  FiberFunction total = cond_expectation(sc.space, a);
  auto found = splitting_level_scan(sc.space, a);
  bool any_positive = false;
  for (const auto& v : total.values()) any_positive = any_positive || v > 0;
  r.body["cond_expectation"] = fiber_function_json(total);
  if (found) {
    FiberFunction at = cond_expectation(sc.space, set_intersect(a, set_at_level(sc.space, found->t)));
    r.body["level"] = {{"t", to_string(found->t)}, {"fibers", fiber_set_json(found->fibers)}, {"cond_expectation_at_t", fiber_function_json(at)}};
  } else {
    r.body["level"] = nullptr;
  }
  // A level must exist exactly when A has positive probability.
  bool ok = found.has_value() == any_positive;
  r.body["checks"] = {{"found_iff_positive", ok}};
  r.exit_code = ok ? kExitOk : kExitCheckFailed;
  return r;
}

inline Report cmd_kernel(const Scenario& sc) {
  Report r;
  KernelReport k = kernel_atom_scan(sc.space);
  Json fibers = Json::array();
  for (const auto& atoms : k.atoms) {
    Json list = Json::array();
    for (const auto& a : atoms) list.push_back({{"location", to_string(a.location)}, {"weight", to_string(a.weight)}});
    fibers.push_back(std::move(list));
  }
  bool agrees = k.atomless() == is_conditionally_atomless(sc.space).atomless();
  r.body["atoms"] = std::move(fibers);
  r.body["verdict"] = k.atomless() ? "atomless" : "atom";
  r.body["checks"] = {{"agrees_with_check", agrees}};
  r.exit_code = k.atomless() && agrees ? kExitOk : kExitCheckFailed;
  return r;
}

inline Report cmd_densities(const Scenario& sc) {
  Report r;
  if (!sc.measures) throw PreconditionViolation("densities needs the \"measures\" section");
  MeasureFamily f = sc.measures->family();
  auto base = mixture(f);
  auto vectors = density_vectors(f);
  DensityVerdict verdict = conditionally_atomless_wrt_densities(f);
  Json cells = Json::array();
  for (std::size_t c = 0; c < f.cell_count(); ++c) {
    const Cell& cell = f.cells()[c];
    Json j{{"fiber", cell.fiber}};
    if (cell.atom) {
      j["atom"] = to_string(cell.lo);
    } else {
      j["interval"] = {to_string(cell.lo), to_string(cell.hi)};
    }
    j["base"] = to_string(base[c]);
    j["density"] = scalars_json(vectors[c]);
    j["block"] = verdict.partition.block_of[c];
    if (verdict.uniform) j["uniform"] = {to_string(verdict.uniform->lo[c]), to_string(verdict.uniform->hi[c])};
    cells.push_back(std::move(j));
  }
  r.body["cells"] = std::move(cells);
  r.body["blocks"] = verdict.partition.block_count;
  r.body["verdict"] = verdict.atomless() ? "atomless" : "atom";
  if (verdict.atom_cell) r.body["witness_cell"] = *verdict.atom_cell;
  r.exit_code = verdict.atomless() ? kExitOk : kExitCheckFailed;
  return r;
}

}  // namespace detail

/// Runs every seeded property suite `count` times. The report is a deterministic
/// function of (seed, count, depth).
inline Report selftest(std::uint64_t seed, std::size_t count, unsigned depth) {
  using namespace props;
  std::vector<Tally> tallies;
  tallies.push_back(run_suite("split_exactness", seed, 1, count, split_exactness));
  tallies.push_back(run_suite("dyadic_family", seed, 2, count, [depth](auto s) { return dyadic_family(s, depth); }));
  tallies.push_back(run_suite("uniform_pushforward", seed, 3, count, [](auto s) { return uniform_pushforward(s, 64); }));
  tallies.push_back(run_suite("kernel_agreement", seed, 4, count, [](auto s) { return kernel_agreement(s, 5); }));
  tallies.push_back(run_suite("shrink_chain", seed, 5, count, [](auto s) { return shrink_chain(s, 10); }));
  tallies.push_back(run_suite("splitting_scan", seed, 6, count, [](auto s) { return splitting_scan(s, 4); }));
  tallies.push_back(run_suite("mixture_invariance", seed, 7, count, mixture_invariance));
  tallies.push_back(run_suite("refinement_agreement", seed, 8, count, refinement_agreement));
  tallies.push_back(run_suite("density_verdict", seed, 9, count, [](auto s) { return density_verdict(s, 64); }));
  tallies.push_back(run_suite("oracle_agreement", seed, 10, count, [depth](auto s) { return oracle_agreement(s, depth); }));
  tallies.push_back(run_suite("scenario_round_trip", seed, 11, count, scenario_round_trip));

  Report r;
  r.body["seed"] = seed;
  r.body["count"] = count;
  r.body["depth"] = depth;
  Json suites = Json::array();
  std::size_t passed = 0, failed = 0;
  for (const auto& t : tallies) {
    Json j{{"name", t.name}, {"passed", t.passed}, {"failed", t.failed}};
    if (!t.ok()) j["first_failure"] = t.first_failure;
    suites.push_back(std::move(j));
    passed += t.passed;
    failed += t.failed;
  }
  r.body["suites"] = std::move(suites);
  r.body["passed"] = passed;
  r.body["failed"] = failed;
  r.exit_code = failed == 0 ? kExitOk : kExitCheckFailed;
  return r;
}

/// Dispatches `command`. The scenario may be null only for selftest. Input and
/// precondition errors become a report with exit status 2.
inline Report run(std::string_view command, const Scenario* scenario, const RunOptions& options = {}) {
  Report r;
  try {
    const ScenarioParams none;
    const ScenarioParams& p = scenario ? scenario->params : none;
    if (command == "selftest") {
      r = selftest(options.seed.value_or(p.seed.value_or(42)), options.count.value_or(p.count.value_or(20)),
                   options.depth.value_or(p.depth.value_or(6)));
    } else if (std::find(known_commands().begin(), known_commands().end(), command) == known_commands().end()) {
      throw PreconditionViolation("unknown command \"" + std::string(command) + "\"");
    } else if (!scenario) {
      throw PreconditionViolation("command \"" + std::string(command) + "\" needs --scenario");
    } else if (command == "check") {
      r = detail::cmd_check(*scenario);
    } else if (command == "split") {
      r = detail::cmd_split(*scenario);
    } else if (command == "shrink") {
      r = detail::cmd_shrink(*scenario);
    } else if (command == "family") {
      r = detail::cmd_family(*scenario, options.depth.value_or(p.depth.value_or(3)));
    } else if (command == "uniform") {
      r = detail::cmd_uniform(*scenario);
    } else if (command == "scan") {
      r = detail::cmd_scan(*scenario);
    } else if (command == "kernel") {
      r = detail::cmd_kernel(*scenario);
    } else {
      r = detail::cmd_densities(*scenario);
    }
  } catch (const Error& e) {
    r.body = Json::object();
    r.body["error"] = e.what();
    r.exit_code = kExitInputError;
  }
  Json out;
  out["command"] = std::string(command);
  out["status"] = r.exit_code == kExitOk ? "pass" : (r.exit_code == kExitCheckFailed ? "fail" : "error");
  for (auto& [key, value] : r.body.items()) out[key] = value;
  out["exit_code"] = r.exit_code;
  r.body = std::move(out);
  return r;
}

}  // namespace condatom
