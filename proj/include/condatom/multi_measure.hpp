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

// Finitely many probability measures Q_1..Q_n on a shared cell grid.
//
// Every measure is uniform inside each diffuse cell, so the Radon-Nikodym
// derivative dQ_k/dQ_0 against the mixture Q_0 = sum_k lambda_k Q_k is one
// number per cell. Sigma algebras generated by such densities become finite
// partitions of the cells, and the Q_0-null sets become sets of null cells.

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "condatom/atomless.hpp"
#include "condatom/errors.hpp"
#include "condatom/fibered_space.hpp"
#include "condatom/scalar.hpp"

namespace condatom {

/// A diffuse cell [lo, hi) or an atom site at lo (then hi == lo) on one fiber.
struct Cell {
  std::size_t fiber;
  Scalar lo;
  Scalar hi;
  bool atom = false;

  friend bool operator==(const Cell&, const Cell&) = default;
};

class MeasureFamily {
 public:
  /// masses[k][c] is Q_k(cell c).
  MeasureFamily(std::vector<Cell> cells, std::vector<std::vector<Scalar>> masses, std::vector<Scalar> lambdas)
      : cells_(std::move(cells)), masses_(std::move(masses)), lambdas_(std::move(lambdas)) {
    if (masses_.empty()) throw InvariantViolation("measure family needs at least one measure");
    if (lambdas_.size() != masses_.size()) {
      throw InvariantViolation("measure family has " + std::to_string(masses_.size()) + " measures but " +
                               std::to_string(lambdas_.size()) + " mixture weights");
    }
    Scalar lambda_total = 0;
    for (const auto& l : lambdas_) {
      if (l <= 0) throw InvariantViolation("mixture weight " + to_string(l) + " is not strictly positive");
      lambda_total += l;
    }
    if (lambda_total != 1) throw InvariantViolation("mixture weights sum to " + to_string(lambda_total) + ", expected 1");
    for (std::size_t k = 0; k < masses_.size(); ++k) {
      if (masses_[k].size() != cells_.size()) {
        throw InvariantViolation("measure " + std::to_string(k) + " has " + std::to_string(masses_[k].size()) +
                                 " cell masses, grid has " + std::to_string(cells_.size()) + " cells");
      }
      Scalar total = 0;
      for (const auto& m : masses_[k]) {
        if (m < 0) throw InvariantViolation("measure " + std::to_string(k) + " has negative cell mass " + to_string(m));
        total += m;
      }
      if (total != 1) {
        throw InvariantViolation("measure " + std::to_string(k) + " has total mass " + to_string(total) + ", expected 1");
      }
    }
  }

  std::size_t cell_count() const noexcept { return cells_.size(); }
  std::size_t measure_count() const noexcept { return masses_.size(); }
  const std::vector<Cell>& cells() const noexcept { return cells_; }
  const std::vector<Scalar>& masses(std::size_t k) const { return masses_.at(k); }
  const std::vector<Scalar>& lambdas() const noexcept { return lambdas_; }

  /// Same measures, different mixture weights.
  MeasureFamily with_lambdas(std::vector<Scalar> lambdas) const { return {cells_, masses_, std::move(lambdas)}; }

 private:
  std::vector<Cell> cells_;
  std::vector<std::vector<Scalar>> masses_;
  std::vector<Scalar> lambdas_;
};

/// Puts fibered spaces with a common fiber count on their common refinement. Cells
/// are ordered by fiber, then diffuse cells by left endpoint, then atom sites by location.
inline MeasureFamily family_from_spaces(std::span<const FiberedSpace> components, std::vector<Scalar> lambdas) {
  if (components.empty()) throw InvariantViolation("measure family needs at least one measure");
  const std::size_t fibers = components.front().size();
  for (const auto& s : components) {
    if (s.size() != fibers) throw StructuralMismatch("all measures of a family must share the fiber count");
  }
  std::vector<Cell> cells;
  std::vector<std::vector<Scalar>> masses(components.size());
  for (std::size_t i = 0; i < fibers; ++i) {
    std::vector<Scalar> grid;
    std::vector<Scalar> sites;
    for (const auto& s : components) {
      const auto& mu = s.measure(i);
      grid.insert(grid.end(), mu.breakpoints().begin(), mu.breakpoints().end());
      for (const auto& a : mu.atoms()) sites.push_back(a.location);
    }
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    std::sort(sites.begin(), sites.end());
    sites.erase(std::unique(sites.begin(), sites.end()), sites.end());

    for (std::size_t j = 0; j + 1 < grid.size(); ++j) {
      cells.push_back({i, grid[j], grid[j + 1], false});
      for (std::size_t k = 0; k < components.size(); ++k) {
        const auto& s = components[k];
        masses[k].push_back(s.weight(i) * s.measure(i).diffuse_mass(grid[j], grid[j + 1]));
      }
    }
    for (const auto& loc : sites) {
      cells.push_back({i, loc, loc, true});
      for (std::size_t k = 0; k < components.size(); ++k) {
        const auto& s = components[k];
        masses[k].push_back(s.weight(i) * s.measure(i).atom_weight(loc).value_or(Scalar(0)));
      }
    }
  }
  return MeasureFamily(std::move(cells), std::move(masses), std::move(lambdas));
}

/// Q_0(cell) = sum_k lambda_k Q_k(cell).
inline std::vector<Scalar> mixture(const MeasureFamily& family) {
  std::vector<Scalar> base(family.cell_count(), Scalar(0));
  for (std::size_t k = 0; k < family.measure_count(); ++k) {
    const auto& m = family.masses(k);
    for (std::size_t c = 0; c < base.size(); ++c) base[c] += family.lambdas()[k] * m[c];
  }
  return base;
}

using DensityVector = std::vector<Scalar>;

/// (dQ_1/dQ_0, ..., dQ_n/dQ_0) per cell, with the zero vector on Q_0-null cells.
inline std::vector<DensityVector> density_vectors(const MeasureFamily& family) {
  auto base = mixture(family);
  std::vector<DensityVector> out(family.cell_count(), DensityVector(family.measure_count(), Scalar(0)));
  for (std::size_t c = 0; c < base.size(); ++c) {
    if (base[c] == 0) continue;
    for (std::size_t k = 0; k < family.measure_count(); ++k) out[c][k] = family.masses(k)[c] / base[c];
  }
  return out;
}

/// Assignment of cells to blocks; block ids are numbered in order of first appearance.
struct CellPartition {
  std::vector<std::size_t> block_of;
  std::size_t block_count = 0;

  std::size_t cell_count() const noexcept { return block_of.size(); }

  /// Renumbers arbitrary labels into first-appearance order.
  static CellPartition from_labels(std::span<const std::size_t> labels) {
    CellPartition p;
    std::map<std::size_t, std::size_t> ids;
    p.block_of.reserve(labels.size());
    for (auto l : labels) {
      auto [it, fresh] = ids.emplace(l, ids.size());
      p.block_of.push_back(it->second);
    }
    p.block_count = ids.size();
    return p;
  }

  static CellPartition trivial(std::size_t cells) {
    return {std::vector<std::size_t>(cells, 0), cells == 0 ? 0u : 1u};
  }

  static CellPartition discrete(std::size_t cells) {
    CellPartition p;
    for (std::size_t c = 0; c < cells; ++c) p.block_of.push_back(c);
    p.block_count = cells;
    return p;
  }

  friend bool operator==(const CellPartition&, const CellPartition&) = default;
};

/// Cells grouped by exact equality of density vectors: the sigma algebra the densities generate.
inline CellPartition density_partition(const std::vector<DensityVector>& vectors) {
  CellPartition p;
  std::map<DensityVector, std::size_t> ids;
  p.block_of.reserve(vectors.size());
  for (const auto& v : vectors) {
    auto [it, fresh] = ids.emplace(v, ids.size());
    p.block_of.push_back(it->second);
  }
  p.block_count = ids.size();
  return p;
}

using CellMask = std::vector<bool>;

inline CellMask null_cells(const std::vector<Scalar>& base) {
  CellMask out(base.size());
  for (std::size_t c = 0; c < base.size(); ++c) out[c] = base[c] == 0;
  return out;
}

/// P is contained in sigma(Q, N): every Q-block meets at most one P-block outside the null cells.
inline bool inclusion_mod_null(const CellPartition& p, const CellPartition& q, const CellMask& nulls) {
  if (p.cell_count() != q.cell_count() || nulls.size() != p.cell_count()) {
    throw StructuralMismatch("partitions and null mask must share one cell grid");
  }
  std::vector<std::optional<std::size_t>> seen(q.block_count);
  for (std::size_t c = 0; c < p.cell_count(); ++c) {
    if (nulls[c]) continue;
    auto& s = seen.at(q.block_of[c]);
    if (!s) {
      s = p.block_of[c];
    } else if (*s != p.block_of[c]) {
      return false;
    }
  }
  return true;
}

/// E_{Q_0}[xi | P] per cell: the base-weighted block average, 0 on blocks of zero mass.
inline std::vector<Scalar> cond_exp_on_partition(const std::vector<Scalar>& base, const CellPartition& p,
                                                 const std::vector<Scalar>& xi) {
  if (base.size() != p.cell_count() || xi.size() != p.cell_count()) {
    throw StructuralMismatch("base masses, partition and integrand must share one cell grid");
  }
  std::vector<Scalar> mass(p.block_count, Scalar(0));
  std::vector<Scalar> weighted(p.block_count, Scalar(0));
  for (std::size_t c = 0; c < base.size(); ++c) {
    mass[p.block_of[c]] += base[c];
    weighted[p.block_of[c]] += base[c] * xi[c];
  }
  std::vector<Scalar> out(base.size());
  for (std::size_t c = 0; c < base.size(); ++c) {
    const auto b = p.block_of[c];
    out[c] = mass[b] == 0 ? Scalar(0) : weighted[b] / mass[b];
  }
  return out;
}

/// U on the cell grid: on cell c, U runs linearly from lo[c] to hi[c]. Cells of
/// null blocks get [0,0]. Within each positive block, Q_0(U < t | block) = t.
struct BlockUniform {
  std::vector<Scalar> lo;
  std::vector<Scalar> hi;
};

struct DensityVerdict {
  CellPartition partition;
  std::optional<std::size_t> atom_cell;  // witness: an atom cell of positive Q_0 mass
  std::optional<BlockUniform> uniform;   // present iff atomless

  bool atomless() const noexcept { return !atom_cell.has_value(); }
};

/// Cumulative-mass transform inside each density block, cells taken in grid order.
inline BlockUniform block_uniform(const std::vector<Scalar>& base, const CellPartition& p) {
  std::vector<Scalar> block_mass(p.block_count, Scalar(0));
  for (std::size_t c = 0; c < base.size(); ++c) block_mass[p.block_of[c]] += base[c];
  std::vector<Scalar> running(p.block_count, Scalar(0));
  BlockUniform u{std::vector<Scalar>(base.size(), Scalar(0)), std::vector<Scalar>(base.size(), Scalar(0))};
  for (std::size_t c = 0; c < base.size(); ++c) {
    const auto b = p.block_of[c];
    if (block_mass[b] == 0) continue;
    u.lo[c] = running[b] / block_mass[b];
    running[b] += base[c];
    u.hi[c] = running[b] / block_mass[b];
  }
  return u;
}

/// Q_0(U < t and cell in block) / Q_0(block).
inline Scalar block_uniform_cdf(const std::vector<Scalar>& base, const CellPartition& p, const BlockUniform& u,
                                std::size_t block, const Scalar& t) {
  Scalar mass = 0;
  Scalar below = 0;
  for (std::size_t c = 0; c < base.size(); ++c) {
    if (p.block_of[c] != block) continue;
    mass += base[c];
    if (base[c] == 0) continue;
    if (t >= u.hi[c]) {
      below += base[c];
    } else if (t > u.lo[c]) {
      below += base[c] * (t - u.lo[c]) / (u.hi[c] - u.lo[c]);
    }
  }
  if (mass == 0) throw PreconditionViolation("block " + std::to_string(block) + " has zero mass");
  return below / mass;
}

/// Atomless iff Q_0 puts no point mass inside a block of positive mass. When
/// atomless, also returns a U that is uniform on every block, hence independent
/// of the densities.
inline DensityVerdict conditionally_atomless_wrt_densities(const MeasureFamily& family) {
  auto base = mixture(family);
  DensityVerdict verdict{density_partition(density_vectors(family)), std::nullopt, std::nullopt};
  for (std::size_t c = 0; c < base.size(); ++c) {
    if (family.cells()[c].atom && base[c] > 0) {
      verdict.atom_cell = c;
      return verdict;
    }
  }
  verdict.uniform = block_uniform(base, verdict.partition);
  return verdict;
}

/// The fibered space whose fibers are the positive-mass blocks of `p`: fiber
/// weight is the block's Q_0 mass, diffuse cells are laid end to end on [0,1]
/// with lengths proportional to their mass, and atom cells become point masses
/// at the position where they occur in that layout.
inline FiberedSpace regroup_by_blocks(const MeasureFamily& family, const CellPartition& p) {
  auto base = mixture(family);
  std::vector<Scalar> block_mass(p.block_count, Scalar(0));
  std::vector<Scalar> block_diffuse(p.block_count, Scalar(0));
  for (std::size_t c = 0; c < base.size(); ++c) {
    block_mass[p.block_of[c]] += base[c];
    if (!family.cells()[c].atom) block_diffuse[p.block_of[c]] += base[c];
  }
  std::vector<Fiber> fibers;
  for (std::size_t b = 0; b < p.block_count; ++b) {
    if (block_mass[b] == 0) continue;
    const Scalar& total = block_mass[b];
    const Scalar& diffuse = block_diffuse[b];
    std::vector<Atom> atoms;
    std::vector<Scalar> breakpoints{0};
    std::vector<Scalar> densities;
    std::size_t atom_index = 0;
    std::size_t atom_cells = 0;
    for (std::size_t c = 0; c < base.size(); ++c) {
      if (p.block_of[c] == b && family.cells()[c].atom && base[c] > 0) ++atom_cells;
    }
    Scalar position = 0;
    for (std::size_t c = 0; c < base.size(); ++c) {
      if (p.block_of[c] != b || base[c] == 0) continue;
      Scalar share = base[c] / total;
      if (family.cells()[c].atom) {
        Scalar loc = diffuse == 0 ? Scalar(Integer(atom_index), Integer(atom_cells)) : position;
        ++atom_index;
        if (!atoms.empty() && atoms.back().location == loc) {
          atoms.back().weight += share;
        } else {
          atoms.push_back({std::move(loc), std::move(share)});
        }
      } else {
        // Length share * total / diffuse, density diffuse / total.
        position += base[c] / diffuse;
        breakpoints.push_back(position);
        densities.push_back(diffuse / total);
      }
    }
    if (densities.empty()) {
      breakpoints.push_back(1);
      densities.push_back(0);
    }
    fibers.push_back({total, FiberMeasure(std::move(atoms), std::move(breakpoints), std::move(densities))});
  }
  return FiberedSpace(std::move(fibers));
}

}  // namespace condatom
