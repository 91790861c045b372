/* Copyright 2026 The mixtensor Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#pragma once

#include <cstddef>
#include <vector>

#include "mixtensor/mode_tree.hpp"

namespace mixtensor {

/// Maximal tree nodes whose labels partition an index set.
struct Tiling {
  /// Ordered by smallest element.
  std::vector<std::size_t> node_ids;
  std::vector<ModeSet> labels;

  std::size_t size() const noexcept { return node_ids.size(); }
};

/// Throws std::invalid_argument unless `set` is sorted, unique and inside [1, n].
void check_index_set(const ModeSet& set, std::size_t n);
/// As above, additionally requiring the empty set < set < [n].
void check_proper_index_set(const ModeSet& set, std::size_t n);

ModeSet complement(const ModeSet& set, std::size_t n);
bool is_subset(const ModeSet& a, const ModeSet& b);

/// A node belongs to the tiling iff its label lies inside I and its parent's
/// does not; the root counts as maximal.
Tiling tiling(const ModeTree& tree, const ModeSet& index_set);

/// Positions (1-based) within the sorted node label of the elements it shares
/// with index_set.
ModeSet reduce_index_set(const ModeSet& index_set, const ModeSet& node_label);

/// Pairs (one node tiling I, one tiling the complement) that are siblings
/// below depth 1.
std::size_t sibling_pairs_count(const ModeTree& tree, const ModeSet& index_set);

struct BoundsReport {
  std::size_t r = 0;
  std::size_t tiling_size = 0;
  std::size_t complement_tiling_size = 0;
  std::size_t upper_exponent = 0;
  std::size_t lower_exponent = 0;
  BigInt upper;
  BigInt lower;
};

BoundsReport theorem1_bounds(const ModeTree& tree, const ModeSet& index_set, std::size_t r);

BigInt power(std::size_t base, std::size_t exponent);

}  // namespace mixtensor
