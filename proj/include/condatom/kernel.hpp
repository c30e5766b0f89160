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

// Kernel-level view: K(i, .) is atomless for every fiber iff the space is
// conditionally atomless, and in that case U is uniform under every K(i, .).
// Uniformity is tested with piecewise-linear test functions. For piecewise-
// linear U and piecewise-constant densities, hats placed on every node of the
// composed system pin down the pushforward completely.

#include <algorithm>
#include <cstddef>
#include <vector>

#include "condatom/errors.hpp"
#include "condatom/fibered_space.hpp"
#include "condatom/piecewise_linear.hpp"
#include "condatom/scalar.hpp"
#include "condatom/uniform.hpp"

namespace condatom {

using TestFunction = PiecewiseLinear;

struct KernelReport {
  std::vector<std::vector<Atom>> atoms;  // per fiber

  bool atomless() const {
    return std::all_of(atoms.begin(), atoms.end(), [](const auto& list) { return list.empty(); });
  }
};

inline KernelReport kernel_atom_scan(const FiberedSpace& space) {
  KernelReport report;
  report.atoms.reserve(space.size());
  for (const auto& f : space.fibers()) report.atoms.push_back(f.measure.atoms());
  return report;
}

/// Every node of the composed system: 0, 1, density breakpoints and the values of u_i there.
inline std::vector<Scalar> system_breakpoints(const FiberedSpace& space, const UniformRV& u) {
  if (u.size() != space.size()) {
    throw StructuralMismatch("uniform map has " + std::to_string(u.size()) + " fibers, space has " +
                             std::to_string(space.size()));
  }
  std::vector<Scalar> nodes{0, 1};
  for (std::size_t i = 0; i < space.size(); ++i) {
    const auto& bp = space.measure(i).breakpoints();
    nodes.insert(nodes.end(), bp.begin(), bp.end());
    const auto& uv = u.map(i).values();
    nodes.insert(nodes.end(), uv.begin(), uv.end());
  }
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
  return nodes;
}

/// Exact value of the integral of g(u(y)) against K(i, dy).
inline Scalar pushforward_integral(const FiberMeasure& mu, const PiecewiseLinear& u, const TestFunction& g) {
  // Refine so that the density is constant and g o u is affine on every cell.
  std::vector<Scalar> xs(mu.breakpoints());
  xs.insert(xs.end(), u.nodes().begin(), u.nodes().end());
  for (std::size_t j = 0; j + 1 < u.nodes().size(); ++j) {
    const Scalar& u0 = u.values()[j];
    const Scalar& u1 = u.values()[j + 1];
    if (u0 == u1) continue;
    const Scalar& x0 = u.nodes()[j];
    const Scalar& x1 = u.nodes()[j + 1];
    const Scalar& lo = std::min(u0, u1);
    const Scalar& hi = std::max(u0, u1);
    for (const auto& v : g.nodes()) {
      if (v > lo && v < hi) xs.push_back(x0 + (v - u0) * (x1 - x0) / (u1 - u0));
    }
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

  Scalar total = 0;
  Scalar left = g(u(xs.front()));
  for (std::size_t j = 0; j + 1 < xs.size(); ++j) {
    Scalar right = g(u(xs[j + 1]));
    const Scalar& d = mu.density_at(xs[j]);
    if (d != 0) total += d * (xs[j + 1] - xs[j]) * (left + right) / 2;
    left = std::move(right);
  }
  for (const auto& a : mu.atoms()) total += a.weight * g(u(a.location));
  return total;
}

/// residuals[i][j] = integral of g_j(u_i) dK(i,.) minus integral of g_j over [0,1].
/// All zero when U is uniform under every K(i, .).
inline std::vector<std::vector<Scalar>> pushforward_uniformity_check(const FiberedSpace& space, const UniformRV& u,
                                                                     const std::vector<TestFunction>& tests) {
  if (u.size() != space.size()) {
    throw StructuralMismatch("uniform map has " + std::to_string(u.size()) + " fibers, space has " +
                             std::to_string(space.size()));
  }
  std::vector<Scalar> lebesgue;
  lebesgue.reserve(tests.size());
  for (const auto& g : tests) lebesgue.push_back(g.integral());

  std::vector<std::vector<Scalar>> residuals(space.size());
  for (std::size_t i = 0; i < space.size(); ++i) {
    residuals[i].reserve(tests.size());
    for (std::size_t j = 0; j < tests.size(); ++j) {
      residuals[i].push_back(pushforward_integral(space.measure(i), u.map(i), tests[j]) - lebesgue[j]);
    }
  }
  return residuals;
}

/// Hats on every system node plus the constant 1 and the identity.
inline std::vector<TestFunction> standard_test_family(const FiberedSpace& space, const UniformRV& u) {
  auto nodes = system_breakpoints(space, u);
  auto tests = hat_family(nodes);
  tests.push_back(PiecewiseLinear::constant(1));
  tests.push_back(PiecewiseLinear::identity());
  return tests;
}

}  // namespace condatom
