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

// Small fixtures shared by the unit tests.

#include "condatom/condatom.hpp"

namespace fixtures {

using namespace condatom;

inline Scalar q(long num, long den = 1) { return Scalar(Integer(num), Integer(den)); }

/// Density 2 on [0,1/2), zero after.
inline FiberMeasure front_loaded() { return FiberMeasure({}, {0, q(1, 2), 1}, {2, 0}); }

/// Weights (1/2,1/2): a Lebesgue fiber and a front-loaded one.
inline FiberedSpace two_fiber() {
  return FiberedSpace({{q(1, 2), FiberMeasure::lebesgue()}, {q(1, 2), front_loaded()}});
}

inline FiberedSpace lebesgue_space() { return FiberedSpace::uniform_over({FiberMeasure::lebesgue()}); }

/// Atom of weight 1/2 at 1/2 on top of density 1 on [0,1/2).
inline FiberMeasure half_atom() { return FiberMeasure({{q(1, 2), q(1, 2)}}, {0, q(1, 2), 1}, {1, 0}); }

inline FiberSlice span(Scalar lo, Scalar hi) { return FiberSlice{{Interval{std::move(lo), std::move(hi)}}, {}}; }

inline EventSet on_one_fiber(Scalar lo, Scalar hi) { return EventSet({span(std::move(lo), std::move(hi))}); }

inline FiberFunction values(std::vector<Scalar> v) { return FiberFunction(std::move(v)); }

}  // namespace fixtures
