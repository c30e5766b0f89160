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

// Scenario files are JSON with the sections "space", "sets", "h", "measures"
// and "params". Every rational is a string, "num/den" or an integer, never a
// JSON number:
//
//   {
//     "space": {"fibers": [{"weight": "1", "breakpoints": ["0", "1"],
//                           "densities": ["1"], "atoms": []}]},
//     "sets": {"C": [{"intervals": [["0", "1/2"]], "atoms": []}],
//              "Omega": "full", "None": "empty"},
//     "h": ["1/2"],
//     "measures": {"lambda": ["1/2", "1/2"], "components": [<space>, <space>]},
//     "params": {"set": "C", "fibers": [0], "depth": 3, "n": 3,
//                "seed": 42, "count": 200, "t": "1/3"}
//   }
//
// Only "space" is required. Loading checks every type invariant and reports
// the one that failed.

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "condatom/conditional.hpp"
#include "condatom/errors.hpp"
#include "condatom/event_set.hpp"
#include "condatom/fibered_space.hpp"
#include "condatom/generator.hpp"
#include "condatom/scalar.hpp"

namespace condatom {

using Json = nlohmann::ordered_json;

struct ScenarioParams {
  std::optional<std::string> set;
  std::optional<std::vector<std::size_t>> fibers;
  std::optional<unsigned> depth;
  std::optional<std::size_t> n;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> count;
  std::optional<Scalar> t;

  friend bool operator==(const ScenarioParams&, const ScenarioParams&) = default;
};

struct Scenario {
  FiberedSpace space;
  std::map<std::string, EventSet> sets;
  std::optional<FiberFunction> h;
  std::optional<MeasureSpec> measures;
  ScenarioParams params;

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

// ---------------------------------------------------------------------------
// Serialization

inline Json scalar_json(const Scalar& x) { return to_string(x); }

inline Json scalars_json(const std::vector<Scalar>& xs) {
  Json out = Json::array();
  for (const auto& x : xs) out.push_back(to_string(x));
  return out;
}

inline Json space_json(const FiberedSpace& space) {
  Json fibers = Json::array();
  for (const auto& f : space.fibers()) {
    Json atoms = Json::array();
    for (const auto& a : f.measure.atoms()) atoms.push_back({{"location", to_string(a.location)}, {"weight", to_string(a.weight)}});
    fibers.push_back({{"weight", to_string(f.weight)},
                      {"breakpoints", scalars_json(f.measure.breakpoints())},
                      {"densities", scalars_json(f.measure.densities())},
                      {"atoms", std::move(atoms)}});
  }
  return {{"fibers", std::move(fibers)}};
}

inline Json event_json(const EventSet& a) {
  Json out = Json::array();
  for (const auto& s : a.slices()) {
    Json intervals = Json::array();
    for (const auto& iv : s.intervals) intervals.push_back({to_string(iv.lo), to_string(iv.hi)});
    out.push_back({{"intervals", std::move(intervals)}, {"atoms", scalars_json(s.atom_picks)}});
  }
  return out;
}

inline Json scenario_json(const Scenario& sc) {
  Json out;
  out["space"] = space_json(sc.space);
  if (!sc.sets.empty()) {
    Json sets = Json::object();
    for (const auto& [name, set] : sc.sets) sets[name] = event_json(set);
    out["sets"] = std::move(sets);
  }
  if (sc.h) out["h"] = scalars_json(sc.h->values());
  if (sc.measures) {
    Json components = Json::array();
    for (const auto& c : sc.measures->components) components.push_back(space_json(c));
    out["measures"] = {{"lambda", scalars_json(sc.measures->lambdas)}, {"components", std::move(components)}};
  }
  Json params = Json::object();
  const auto& p = sc.params;
  if (p.set) params["set"] = *p.set;
  if (p.fibers) params["fibers"] = *p.fibers;
  if (p.depth) params["depth"] = *p.depth;
  if (p.n) params["n"] = *p.n;
  if (p.seed) params["seed"] = *p.seed;
  if (p.count) params["count"] = *p.count;
  if (p.t) params["t"] = to_string(*p.t);
  if (!params.empty()) out["params"] = std::move(params);
  return out;
}

inline std::string serialize_scenario(const Scenario& sc) { return scenario_json(sc).dump(2) + "\n"; }

// ---------------------------------------------------------------------------
// Parsing

namespace detail {

inline std::pair<std::size_t, std::size_t> line_column(std::string_view text, std::size_t byte) {
  std::size_t line = 1, column = 1;
  for (std::size_t k = 0; k < byte && k < text.size(); ++k) {
    if (text[k] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return {line, column};
}

inline const Json& field(const Json& obj, const char* key, const std::string& path) {
  if (!obj.is_object() || !obj.contains(key)) throw ParseError(path + ": missing field \"" + key + "\"");
  return obj.at(key);
}

inline void only_keys(const Json& obj, std::initializer_list<std::string_view> allowed, const std::string& path) {
  if (!obj.is_object()) throw ParseError(path + ": expected an object");
  for (const auto& [key, _] : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw ParseError(path + ": unknown field \"" + key + "\"");
    }
  }
}

inline Scalar rational(const Json& j, const std::string& path) {
  if (!j.is_string()) throw ParseError(path + ": expected a rational string such as \"3/8\"");
  try {
    return parse_scalar(j.get<std::string>());
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

inline std::vector<Scalar> rationals(const Json& j, const std::string& path) {
  if (!j.is_array()) throw ParseError(path + ": expected an array of rational strings");
  std::vector<Scalar> out;
  for (std::size_t k = 0; k < j.size(); ++k) out.push_back(rational(j[k], path + "[" + std::to_string(k) + "]"));
  return out;
}

inline std::uint64_t natural(const Json& j, const std::string& path) {
  if (!j.is_number_unsigned()) throw ParseError(path + ": expected a non-negative integer");
  return j.get<std::uint64_t>();
}

/// Runs a constructor and prefixes any invariant violation with the JSON path.
template <class F>
auto checked(const std::string& path, F&& make) {
  try {
    return make();
  } catch (const InvariantViolation& e) {
    throw InvariantViolation(path + ": " + e.what());
  }
}

inline FiberedSpace parse_space(const Json& j, const std::string& path) {
  only_keys(j, {"fibers"}, path);
  const Json& fibers = field(j, "fibers", path);
  if (!fibers.is_array()) throw ParseError(path + ".fibers: expected an array");
  std::vector<Fiber> out;
  for (std::size_t i = 0; i < fibers.size(); ++i) {
    const std::string fp = path + ".fibers[" + std::to_string(i) + "]";
    const Json& f = fibers[i];
    only_keys(f, {"weight", "breakpoints", "densities", "atoms"}, fp);
    Scalar weight = rational(field(f, "weight", fp), fp + ".weight");
    std::vector<Scalar> breakpoints =
        f.contains("breakpoints") ? rationals(f.at("breakpoints"), fp + ".breakpoints") : std::vector<Scalar>{0, 1};
    std::vector<Scalar> densities = rationals(field(f, "densities", fp), fp + ".densities");
    std::vector<Atom> atoms;
    if (f.contains("atoms")) {
      const Json& aj = f.at("atoms");
      if (!aj.is_array()) throw ParseError(fp + ".atoms: expected an array");
      for (std::size_t k = 0; k < aj.size(); ++k) {
        const std::string ap = fp + ".atoms[" + std::to_string(k) + "]";
        only_keys(aj[k], {"location", "weight"}, ap);
        atoms.push_back({rational(field(aj[k], "location", ap), ap + ".location"),
                         rational(field(aj[k], "weight", ap), ap + ".weight")});
      }
    }
    out.push_back({std::move(weight), checked(fp, [&] {
                     return FiberMeasure(std::move(atoms), std::move(breakpoints), std::move(densities));
                   })});
  }
  return checked(path, [&] { return FiberedSpace(std::move(out)); });
}

inline EventSet parse_event(const Json& j, const FiberedSpace& space, const std::string& path) {
  if (j.is_string()) {
    const auto word = j.get<std::string>();
    if (word == "full") return EventSet::full(space);
    if (word == "empty") return EventSet::empty(space.size());
    throw ParseError(path + ": expected \"full\", \"empty\" or an array of fiber slices");
  }
  if (!j.is_array()) throw ParseError(path + ": expected an array of fiber slices");
  std::vector<FiberSlice> slices;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string sp = path + "[" + std::to_string(i) + "]";
    only_keys(j[i], {"intervals", "atoms"}, sp);
    FiberSlice s;
    if (j[i].contains("intervals")) {
      const Json& ivs = j[i].at("intervals");
      if (!ivs.is_array()) throw ParseError(sp + ".intervals: expected an array of [lo, hi] pairs");
      for (std::size_t k = 0; k < ivs.size(); ++k) {
        const std::string ip = sp + ".intervals[" + std::to_string(k) + "]";
        if (!ivs[k].is_array() || ivs[k].size() != 2) throw ParseError(ip + ": expected a [lo, hi] pair");
        s.intervals.push_back({rational(ivs[k][0], ip + "[0]"), rational(ivs[k][1], ip + "[1]")});
      }
    }
    if (j[i].contains("atoms")) s.atom_picks = rationals(j[i].at("atoms"), sp + ".atoms");
    slices.push_back(std::move(s));
  }
  EventSet set = checked(path, [&] { return EventSet(std::move(slices)); });
  try {
    set.check_against(space);
  } catch (const Error& e) {
    throw InvariantViolation(path + ": " + e.what());
  }
  return set;
}

}  // namespace detail

inline Scenario parse_scenario(std::string_view text) {
  Json root;
  try {
    root = Json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    auto [line, column] = detail::line_column(text, e.byte == 0 ? 0 : e.byte - 1);
    throw ParseError("malformed scenario JSON", line, column);
  }
  detail::only_keys(root, {"space", "sets", "h", "measures", "params"}, "scenario");
  Scenario sc{detail::parse_space(detail::field(root, "space", "scenario"), "space"), {}, std::nullopt, std::nullopt, {}};
  const std::size_t fibers = sc.space.size();

  if (root.contains("sets")) {
    const Json& sets = root.at("sets");
    if (!sets.is_object()) throw ParseError("sets: expected an object of named events");
    for (const auto& [name, value] : sets.items()) {
      EventSet set = detail::parse_event(value, sc.space, "sets." + name);
      sc.sets.emplace(name, std::move(set));
    }
  }

  if (root.contains("h")) {
    auto values = detail::rationals(root.at("h"), "h");
    if (values.size() != fibers) {
      throw InvariantViolation("h: has " + std::to_string(values.size()) + " values, space has " +
                               std::to_string(fibers) + " fibers");
    }
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (!in_unit_interval(values[i])) {
        throw InvariantViolation("h[" + std::to_string(i) + "]: value " + to_string(values[i]) + " outside [0,1]");
      }
    }
    sc.h = FiberFunction(std::move(values));
  }

  if (root.contains("measures")) {
    const Json& m = root.at("measures");
    detail::only_keys(m, {"lambda", "components"}, "measures");
    MeasureSpec spec;
    spec.lambdas = detail::rationals(detail::field(m, "lambda", "measures"), "measures.lambda");
    const Json& comps = detail::field(m, "components", "measures");
    if (!comps.is_array()) throw ParseError("measures.components: expected an array of spaces");
    for (std::size_t k = 0; k < comps.size(); ++k) {
      spec.components.push_back(detail::parse_space(comps[k], "measures.components[" + std::to_string(k) + "]"));
    }
    detail::checked("measures", [&] { return spec.family(); });
    sc.measures = std::move(spec);
  }

  if (root.contains("params")) {
    const Json& p = root.at("params");
    detail::only_keys(p, {"set", "fibers", "depth", "n", "seed", "count", "t"}, "params");
    if (p.contains("set")) {
      if (!p.at("set").is_string()) throw ParseError("params.set: expected a set name");
      sc.params.set = p.at("set").get<std::string>();
      if (!sc.sets.contains(*sc.params.set)) {
        throw InvariantViolation("params.set: set \"" + *sc.params.set + "\" is not defined in \"sets\"");
      }
    }
    if (p.contains("fibers")) {
      const Json& fj = p.at("fibers");
      if (!fj.is_array()) throw ParseError("params.fibers: expected an array of fiber indices");
      std::vector<std::size_t> idx;
      for (std::size_t k = 0; k < fj.size(); ++k) {
        auto v = detail::natural(fj[k], "params.fibers[" + std::to_string(k) + "]");
        if (v >= fibers) {
          throw InvariantViolation("params.fibers[" + std::to_string(k) + "]: fiber index " + std::to_string(v) +
                                   " out of range for " + std::to_string(fibers) + " fibers");
        }
        idx.push_back(static_cast<std::size_t>(v));
      }
      sc.params.fibers = std::move(idx);
    }
    if (p.contains("depth")) sc.params.depth = static_cast<unsigned>(detail::natural(p.at("depth"), "params.depth"));
    if (p.contains("n")) sc.params.n = detail::natural(p.at("n"), "params.n");
    if (p.contains("seed")) sc.params.seed = detail::natural(p.at("seed"), "params.seed");
    if (p.contains("count")) sc.params.count = detail::natural(p.at("count"), "params.count");
    if (p.contains("t")) {
      sc.params.t = detail::rational(p.at("t"), "params.t");
      if (!in_unit_interval(*sc.params.t)) throw InvariantViolation("params.t: level " + to_string(*sc.params.t) + " outside [0,1]");
    }
  }
  return sc;
}

/// A random scenario built from a generated instance; used by the round-trip suite.
inline Scenario random_scenario(std::uint64_t seed) {
  GeneratorParams gp;
  gp.atom_probability = Scalar(1, 2);
  gp.event_count = 2;
  gp.measure_count = 1 + seed % 4;
  Instance inst = generate_instance(seed, gp);
  Rng rng(mix_seed(seed, 99, 0));
  Scenario sc{inst.space, {}, random_coefficient(rng, inst.space.size()), inst.measures, {}};
  sc.sets.emplace("A", inst.events[0]);
  sc.sets.emplace("C", inst.events[1]);
  sc.params.set = "C";
  sc.params.fibers = std::vector<std::size_t>{0};
  sc.params.depth = static_cast<unsigned>(rng.below(6));
  sc.params.n = rng.below(10);
  sc.params.seed = rng.below(1000);
  sc.params.count = rng.between(1, 50);
  sc.params.t = Scalar(Integer(rng.below(9)), Integer(8));
  return sc;
}

}  // namespace condatom
