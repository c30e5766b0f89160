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

namespace {

MeasureFamily reference_family() {
  std::vector<FiberedSpace> comps{fixtures::lebesgue_space(), FiberedSpace::uniform_over({fixtures::front_loaded()})};
  return family_from_spaces(comps, {q(1, 2), q(1, 2)});
}

}  // namespace

TEST_CASE("mixture and density vectors on the reference family", "[multi]") {
  MeasureFamily f = reference_family();
  REQUIRE(f.cell_count() == 2);
  CHECK(f.cells()[0] == Cell{0, 0, q(1, 2), false});
  CHECK(f.cells()[1] == Cell{0, q(1, 2), 1, false});

  oracle::RawFiber lebesgue{{{1, 1}}, {}};
  oracle::RawFiber front{{{q(1, 2), 2}, {1, 0}}, {}};
  auto grid_base = [&](Scalar lo, Scalar hi) {
    return q(1, 2) * oracle::mass(lebesgue, oracle::half_open(lo, hi)) +
           q(1, 2) * oracle::mass(front, oracle::half_open(lo, hi));
  };
  REQUIRE(grid_base(0, q(1, 2)) == q(3, 4));
  REQUIRE(grid_base(q(1, 2), 1) == q(1, 4));
  CHECK(mixture(f) == std::vector<Scalar>{q(3, 4), q(1, 4)});

  auto v = density_vectors(f);
  CHECK(v[0] == DensityVector{q(2, 3), q(4, 3)});
  CHECK(v[1] == DensityVector{2, 0});
  CellPartition p = density_partition(v);
  CHECK(p.block_count == 2);
  CHECK(p.block_of == std::vector<std::size_t>{0, 1});
}

TEST_CASE("degenerate families", "[multi]") {
  std::vector<FiberedSpace> one{fixtures::two_fiber()};
  MeasureFamily single = family_from_spaces(one, {1});
  CHECK(mixture(single) == single.masses(0));
  for (const auto& v : density_vectors(single)) {
    CHECK((v == DensityVector{1} || v == DensityVector{0}));
  }

  std::vector<FiberedSpace> twins{fixtures::two_fiber(), fixtures::two_fiber()};
  MeasureFamily same = family_from_spaces(twins, {q(1, 3), q(2, 3)});
  CHECK(mixture(same) == same.masses(0));
  CHECK(density_partition(density_vectors(same)).block_count <= 2);
}

TEST_CASE("null cells get the zero vector", "[multi]") {
  std::vector<FiberedSpace> comps{FiberedSpace::uniform_over({fixtures::front_loaded()})};
  MeasureFamily f = family_from_spaces(comps, {1});
  auto base = mixture(f);
  REQUIRE(base[1] == 0);
  CHECK(density_vectors(f)[1] == DensityVector{0});
  CHECK(null_cells(base) == CellMask{false, true});
}

TEST_CASE("measure family invariants", "[multi]") {
  std::vector<Cell> cells{{0, 0, 1, false}};
  CHECK_THROWS_AS(MeasureFamily(cells, {{1}}, {q(1, 2)}), InvariantViolation);
  CHECK_THROWS_AS(MeasureFamily(cells, {{1}, {1}}, {1, 0}), InvariantViolation);
  CHECK_THROWS_AS(MeasureFamily(cells, {{q(1, 2)}}, {1}), InvariantViolation);
  CHECK_THROWS_AS(MeasureFamily(cells, {}, {}), InvariantViolation);
}

TEST_CASE("partition inclusion modulo null cells", "[multi]") {
  CellPartition p = CellPartition::from_labels(std::vector<std::size_t>{0, 0, 1, 1});
  CellPartition fine = CellPartition::discrete(4);
  CellMask none(4, false);
  CHECK(inclusion_mod_null(p, p, none));
  CHECK(inclusion_mod_null(CellPartition::trivial(4), p, none));
  CHECK(inclusion_mod_null(p, fine, none));
  CHECK_FALSE(inclusion_mod_null(fine, p, none));
  CHECK(inclusion_mod_null(fine, p, CellMask{true, false, true, false}));
  CHECK_THROWS_AS(inclusion_mod_null(p, CellPartition::trivial(3), none), StructuralMismatch);
}

TEST_CASE("conditional expectation on a partition", "[multi]") {
  std::vector<Scalar> base{q(1, 4), q(1, 4), q(1, 2), 0};
  std::vector<Scalar> xi{1, 3, 5, 7};
  CHECK(cond_exp_on_partition(base, CellPartition::trivial(4), xi) == std::vector<Scalar>(4, q(7, 2)));
  auto fine = cond_exp_on_partition(base, CellPartition::discrete(4), xi);
  CHECK(std::vector<Scalar>(fine.begin(), fine.begin() + 3) == std::vector<Scalar>{1, 3, 5});
  CHECK(fine[3] == 0);
  CellPartition split_on_null = CellPartition::from_labels(std::vector<std::size_t>{0, 0, 0, 1});
  auto coarse = cond_exp_on_partition(base, CellPartition::trivial(4), xi);
  auto refined = cond_exp_on_partition(base, split_on_null, xi);
  for (std::size_t c = 0; c < 3; ++c) CHECK(coarse[c] == refined[c]);
}

TEST_CASE("density verdict and the block uniform", "[multi]") {
  DensityVerdict ok = conditionally_atomless_wrt_densities(reference_family());
  REQUIRE(ok.atomless());
  REQUIRE(ok.uniform.has_value());
  auto base = mixture(reference_family());
  for (std::size_t b = 0; b < ok.partition.block_count; ++b) {
    for (long j = 0; j <= 8; ++j) CHECK(block_uniform_cdf(base, ok.partition, *ok.uniform, b, q(j, 8)) == q(j, 8));
  }

  std::vector<FiberedSpace> comps{FiberedSpace::uniform_over({fixtures::half_atom()}), fixtures::lebesgue_space()};
  DensityVerdict atom = conditionally_atomless_wrt_densities(family_from_spaces(comps, {q(1, 2), q(1, 2)}));
  REQUIRE_FALSE(atom.atomless());
  MeasureFamily f = family_from_spaces(comps, {q(1, 2), q(1, 2)});
  const Cell& witness = f.cells()[*atom.atom_cell];
  CHECK(witness.atom);
  CHECK(witness.lo == q(1, 2));
  CHECK_FALSE(atom.uniform.has_value());
}

TEST_CASE("regrouping by density blocks preserves the verdict", "[multi]") {
  MeasureFamily f = reference_family();
  CellPartition p = density_partition(density_vectors(f));
  FiberedSpace g = regroup_by_blocks(f, p);
  CHECK(g.size() == 2);
  CHECK(g.weight(0) == q(3, 4));
  CHECK(is_conditionally_atomless(g).atomless());
}

// Property tests.

TEST_CASE("density partitions do not depend on the mixture weights", "[multi][property]") {
  for (std::uint64_t k = 0; k < 30; ++k) CHECK(props::mixture_invariance(mix_seed(41, 1, k)).ok);
}

TEST_CASE("refinements on null cells leave conditional expectations unchanged", "[multi][property]") {
  for (std::uint64_t k = 0; k < 30; ++k) CHECK(props::refinement_agreement(mix_seed(41, 2, k)).ok);
}

TEST_CASE("density verdict agrees with the regrouped fibered space", "[multi][property]") {
  for (std::uint64_t k = 0; k < 30; ++k) CHECK(props::density_verdict(mix_seed(41, 3, k), 16).ok);
}
