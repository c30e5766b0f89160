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

#include <catch2/catch_amalgamated.hpp>

#include "fixtures.hpp"
#include "oracles.hpp"

using namespace condatom;
using fixtures::q;

TEST_CASE("verdict on atomless and atomic spaces", "[atomless]") {
  CHECK(is_conditionally_atomless(fixtures::lebesgue_space()).atomless());
  FiberedSpace s({{q(1, 2), FiberMeasure::lebesgue()}, {q(1, 2), fixtures::half_atom()}});
  AtomlessVerdict v = is_conditionally_atomless(s);
  REQUIRE_FALSE(v.atomless());
  CHECK(*v.witness == AtomWitness{1, q(1, 2), q(1, 2)});
}

TEST_CASE("strict split witness", "[atomless]") {
  const FiberedSpace lebesgue = fixtures::lebesgue_space();
  auto w = strict_split_witness(lebesgue, fixtures::on_one_fiber(0, 1));
  REQUIRE(w.has_value());
  CHECK(w->subset == fixtures::on_one_fiber(0, q(1, 2)));
  CHECK(w->fibers == FiberSet{0});

  CHECK_FALSE(strict_split_witness(lebesgue, EventSet::empty(1)).has_value());

  FiberedSpace lone_atom = FiberedSpace::uniform_over({FiberMeasure({{q(1, 3), q(1, 4)}}, {0, 1}, {q(3, 4)})});
  CHECK_FALSE(strict_split_witness(lone_atom, EventSet({FiberSlice{{}, {q(1, 3)}}})).has_value());
}

TEST_CASE("two atoms in one slice split strictly", "[atomless]") {
  FiberedSpace s = FiberedSpace::uniform_over({FiberMeasure({{q(1, 4), q(1, 2)}, {q(3, 4), q(1, 2)}}, {0, 1}, {0})});
  CHECK_FALSE(is_conditionally_atomless(s).atomless());
  EventSet a({FiberSlice{{}, {q(1, 4), q(3, 4)}}});
  auto w = strict_split_witness(s, a);
  REQUIRE(w.has_value());
  CHECK(cond_expectation(s, w->subset)[0] == q(1, 2));
}

TEST_CASE("maximal split region", "[atomless]") {
  FiberedSpace s({{q(1, 2), FiberMeasure::lebesgue()}, {q(1, 2), fixtures::half_atom()}});
  EventSet a({fixtures::span(0, q(1, 2)), FiberSlice{{}, {q(1, 2)}}});
  CHECK(maximal_split_region(s, a) == FiberSet{0});
  CHECK(maximal_split_region(s, EventSet::empty(2)).empty());
  CHECK(maximal_split_region(s, EventSet::full(s)) == FiberSet{0, 1});
}

TEST_CASE("split hits the target exactly", "[atomless][oracle]") {
  const FiberedSpace lebesgue = fixtures::lebesgue_space();
  CHECK(split(lebesgue, EventSet::full(lebesgue), fixtures::values({q(1, 2)})) == fixtures::on_one_fiber(0, q(1, 2)));
  CHECK(split(lebesgue, EventSet::full(lebesgue), fixtures::values({0})).is_empty());

  const FiberedSpace front = FiberedSpace::uniform_over({fixtures::front_loaded()});
  EventSet b = split(front, fixtures::on_one_fiber(0, q(1, 2)), fixtures::values({q(3, 4)}));
  CHECK(b == fixtures::on_one_fiber(0, q(3, 8)));
  oracle::RawFiber raw{{{q(1, 2), 2}, {1, 0}}, {}};
  CHECK(oracle::mass(raw, oracle::half_open(0, q(3, 8))) == q(3, 4));
  CHECK(cond_expectation(front, b)[0] == q(3, 4));
}

TEST_CASE("split refuses atoms and out-of-range coefficients", "[atomless]") {
  FiberedSpace s = FiberedSpace::uniform_over({fixtures::half_atom()});
  EventSet all = EventSet::full(s);
  try {
    split(s, all, fixtures::values({q(1, 2)}));
    FAIL("expected an atom obstruction");
  } catch (const AtomObstruction& e) {
    CHECK(e.fiber() == 0);
    CHECK(e.location() == "1/2");
  }
  CHECK(split(s, all, fixtures::values({1})) == all);
  CHECK(split(s, all, fixtures::values({0})).is_empty());
  CHECK_THROWS_AS(split(s, all, fixtures::values({q(3, 2)})), PreconditionViolation);
  CHECK_THROWS_AS(split(s, all, fixtures::values({q(1, 2), q(1, 2)})), StructuralMismatch);
}

TEST_CASE("shrink sequence halves on the chosen fibers", "[atomless]") {
  const FiberedSpace lebesgue = fixtures::lebesgue_space();
  auto chain = shrink_sequence(lebesgue, EventSet::full(lebesgue), {0}, 3);
  REQUIRE(chain.size() == 4);
  std::vector<Scalar> masses;
  for (const auto& b : chain) masses.push_back(cond_expectation(lebesgue, b)[0]);
  CHECK(masses == std::vector<Scalar>{1, q(1, 2), q(1, 4), q(1, 8)});

  auto trivial = shrink_sequence(lebesgue, EventSet::full(lebesgue), {0}, 0);
  REQUIRE(trivial.size() == 1);
  CHECK(trivial[0] == EventSet::full(lebesgue));

  FiberedSpace two = FiberedSpace::uniform_over({FiberMeasure::lebesgue(), FiberMeasure::lebesgue()});
  EventSet c({fixtures::span(0, 1), fixtures::span(0, q(1, 2))});
  auto pair = shrink_sequence(two, c, {0, 1}, 2);
  CHECK(cond_expectation(two, pair.back()) == fixtures::values({q(1, 4), q(1, 8)}));
  for (std::size_t k = 1; k < pair.size(); ++k) CHECK(is_subset(pair[k], pair[k - 1]));
}

TEST_CASE("shrink sequence preconditions", "[atomless]") {
  FiberedSpace two = FiberedSpace::uniform_over({FiberMeasure::lebesgue(), FiberMeasure::lebesgue()});
  EventSet c({fixtures::span(0, 1), FiberSlice{}});
  CHECK_THROWS_AS(shrink_sequence(two, c, {1}, 2), PreconditionViolation);
  CHECK_THROWS_AS(shrink_sequence(two, c, {5}, 2), PreconditionViolation);
  CHECK_NOTHROW(shrink_sequence(two, c, {0}, 2));
  FiberedSpace atomic = FiberedSpace::uniform_over({fixtures::half_atom()});
  CHECK_THROWS_AS(shrink_sequence(atomic, EventSet::full(atomic), {0}, 2), AtomObstruction);
}

// Property tests.

TEST_CASE("verdict agrees with the splitting definition on random events", "[atomless][property]") {
  GeneratorParams gp;
  gp.max_fibers = 5;
  Instance inst = generate_instance(mix_seed(11, 1, 0), gp);
  const auto& s = inst.space;
  REQUIRE(is_conditionally_atomless(s).atomless());
  Rng rng(mix_seed(11, 1, 1));
  for (int k = 0; k < 100; ++k) {
    EventSet a = random_positive_event(rng, s);
    auto w = strict_split_witness(s, a);
    REQUIRE(w.has_value());
    FiberSet all;
    for (std::size_t i = 0; i < s.size(); ++i) all.insert(i);
    CHECK(w->fibers == all);
    CHECK(is_subset(w->subset, a));
  }
}

TEST_CASE("the dichotomy: region equals the support exactly when the definition holds", "[atomless][property]") {
  GeneratorParams gp;
  gp.atom_probability = q(1, 2);
  for (std::uint64_t k = 0; k < 60; ++k) {
    Instance inst = generate_instance(mix_seed(12, 2, k), gp);
    const auto& s = inst.space;
    const EventSet& a = inst.events[0];
    FiberSet support;
    FiberFunction e = cond_expectation(s, a);
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (e[i] > 0) support.insert(i);
    }
    FiberSet region = maximal_split_region(s, a);
    CHECK(std::includes(support.begin(), support.end(), region.begin(), region.end()));
    auto w = strict_split_witness(s, a);
    CHECK(w.has_value() == !region.empty());
    if (w) {
      CHECK(w->fibers == region);
      for (std::size_t i : w->fibers) {
        Scalar b = cond_expectation(s, w->subset)[i];
        CHECK((0 < b && b < e[i]));
      }
    }
    if (is_conditionally_atomless(s).atomless()) CHECK(region == support);
  }
}

TEST_CASE("split is monotone in h and exact for every coefficient", "[atomless][property]") {
  for (std::uint64_t k = 0; k < 40; ++k) {
    Instance inst = generate_instance(mix_seed(13, 3, k), GeneratorParams{});
    const auto& s = inst.space;
    const EventSet& c = inst.events[0];
    Rng rng(mix_seed(13, 4, k));
    FiberFunction h1 = random_coefficient(rng, s.size());
    FiberFunction h2 = random_coefficient(rng, s.size());
    std::vector<Scalar> lo, hi;
    for (std::size_t i = 0; i < s.size(); ++i) {
      lo.push_back(std::min(h1[i], h2[i]));
      hi.push_back(std::max(h1[i], h2[i]));
    }
    EventSet b_lo = split(s, c, FiberFunction(lo));
    EventSet b_hi = split(s, c, FiberFunction(hi));
    CHECK(is_subset(b_lo, b_hi));
    CHECK(is_subset(b_hi, c));
    CHECK(cond_expectation(s, b_lo) == FiberFunction(lo) * cond_expectation(s, c));
    CHECK(cond_expectation(s, b_hi) == FiberFunction(hi) * cond_expectation(s, c));
  }
}
