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

#include <algorithm>
#include <cstddef>
#include <span>
#include <vector>

#include "condatom/errors.hpp"
#include "condatom/scalar.hpp"

namespace condatom {

/// Continuous piecewise-linear function on [0,1] with rational nodes.
///
/// Nodes are strictly increasing and always include 0 and 1. Between two
/// consecutive nodes the function is the straight line joining the values.
class PiecewiseLinear {
 public:
  PiecewiseLinear(std::vector<Scalar> nodes, std::vector<Scalar> values)
      : nodes_(std::move(nodes)), values_(std::move(values)) {
    if (nodes_.size() < 2) throw InvariantViolation("piecewise-linear function needs at least the nodes 0 and 1");
    if (nodes_.size() != values_.size()) {
      throw InvariantViolation("piecewise-linear function has " + std::to_string(nodes_.size()) + " nodes but " +
                               std::to_string(values_.size()) + " values");
    }
    if (nodes_.front() != 0 || nodes_.back() != 1) {
      throw InvariantViolation("piecewise-linear nodes must start at 0 and end at 1");
    }
    for (std::size_t j = 1; j < nodes_.size(); ++j) {
      if (nodes_[j - 1] >= nodes_[j]) throw InvariantViolation("piecewise-linear nodes must be strictly increasing");
    }
  }

  static PiecewiseLinear constant(const Scalar& c) { return {{0, 1}, {c, c}}; }
  static PiecewiseLinear identity() { return {{0, 1}, {0, 1}}; }

  const std::vector<Scalar>& nodes() const noexcept { return nodes_; }
  const std::vector<Scalar>& values() const noexcept { return values_; }

  /// Index j of the segment [nodes[j], nodes[j+1]] containing x; x = 1 maps to the last segment.
  std::size_t segment_of(const Scalar& x) const {
    auto it = std::upper_bound(nodes_.begin(), nodes_.end(), x);
    auto j = static_cast<std::size_t>(std::distance(nodes_.begin(), it));
    if (j == 0) return 0;
    return std::min(j - 1, nodes_.size() - 2);
  }

  Scalar operator()(const Scalar& x) const {
    if (x < 0 || x > 1) throw PreconditionViolation("piecewise-linear argument " + to_string(x) + " outside [0,1]");
    std::size_t j = segment_of(x);
    const Scalar& x0 = nodes_[j];
    const Scalar& x1 = nodes_[j + 1];
    return values_[j] + (values_[j + 1] - values_[j]) * (x - x0) / (x1 - x0);
  }

  bool is_nondecreasing() const {
    return std::adjacent_find(values_.begin(), values_.end(), std::greater<>{}) == values_.end();
  }

  /// Smallest x in [0,1] with f(x) >= level, for nondecreasing f. Returns 1 when no node reaches it.
  Scalar first_reaching(const Scalar& level) const {
    if (values_.front() >= level) return 0;
    auto it = std::lower_bound(values_.begin(), values_.end(), level);
    if (it == values_.end()) return 1;
    auto j = static_cast<std::size_t>(std::distance(values_.begin(), it));
    // values_[j-1] < level <= values_[j], so the segment is strictly rising.
    return nodes_[j - 1] + (level - values_[j - 1]) * (nodes_[j] - nodes_[j - 1]) / (values_[j] - values_[j - 1]);
  }

  /// Exact integral over [0,1].
  Scalar integral() const {
    Scalar total = 0;
    for (std::size_t j = 0; j + 1 < nodes_.size(); ++j) {
      total += (nodes_[j + 1] - nodes_[j]) * (values_[j] + values_[j + 1]) / 2;
    }
    return total;
  }

  friend bool operator==(const PiecewiseLinear&, const PiecewiseLinear&) = default;

 private:
  std::vector<Scalar> nodes_;
  std::vector<Scalar> values_;
};

/// Tent functions on a sorted node list containing 0 and 1: the j-th hat is 1 at
/// nodes[j] and 0 at every other node.
inline std::vector<PiecewiseLinear> hat_family(std::span<const Scalar> nodes) {
  std::vector<PiecewiseLinear> hats;
  hats.reserve(nodes.size());
  std::vector<Scalar> grid(nodes.begin(), nodes.end());
  for (std::size_t j = 0; j < grid.size(); ++j) {
    std::vector<Scalar> values(grid.size(), Scalar(0));
    values[j] = 1;
    hats.emplace_back(grid, std::move(values));
  }
  return hats;
}

}  // namespace condatom
