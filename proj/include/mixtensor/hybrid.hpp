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

#include <map>
#include <string_view>
#include <utility>
#include <vector>

#include "mixtensor/decomposition.hpp"

namespace mixtensor {

enum class TreeTag { t, tbar };

std::string_view to_string(TreeTag tag);
TreeTag parse_tree_tag(std::string_view text);

/// A mode tree stitched from segments of the two trees of a MixSpec.
struct HybridTree {
  ModeTree tree;
  /// Source tree of every interior node.
  std::map<ModeSet, TreeTag> source;
  /// One choice per schedule step (mixture nodes in canonical inclusion order,
  /// then the root) that produced this hybrid.
  std::vector<TreeTag> choices;

  /// Same tree and same source tags; the generating choices are ignored.
  friend bool operator==(const HybridTree& a, const HybridTree& b) { return a.tree == b.tree && a.source == b.source; }
};

/// Builds the hybrid taking, at schedule step i, the segment of tree
/// choices[i].
HybridTree build_hybrid(const MixSpec& spec, const std::vector<TreeTag>& choices);

/// Throws unless `hybrid` is exactly the hybrid its choices generate.
void validate_hybrid(const MixSpec& spec, const HybridTree& hybrid);

struct HybridEnumeration {
  std::vector<HybridTree> hybrids;
  /// 2^(number of mixture nodes + 1).
  std::size_t sequences = 0;
};

/// All choice sequences in counting order (step 0 is the lowest bit, T = 0),
/// with repeated hybrids dropped after their first occurrence.
HybridEnumeration enumerate_hybrids(const MixSpec& spec);

/// Mixed-decomposition weights (size 2 r_h) under which the mixed
/// decomposition, fed zero-padded discretizers, reproduces the hybrid's tree
/// decomposition on its first r_h outputs.
std::pair<WeightSet, WeightSet> hybrid_to_mixed_weights(const MixSpec& spec, const HybridTree& hybrid,
                                                        const WeightSet& hybrid_weights);

struct LowerBoundWitness {
  WeightSet weights;
  /// I and its complement are the two children of the root, where no
  /// construction beats rank 1.
  bool degenerate = false;
};

/// Explicit weights whose grid tensors (product g, identity discretizers)
/// reach rank r^(sibling pairs) under matricization by index_set.
LowerBoundWitness lower_bound_weights(const ModeTree& tree, const ModeSet& index_set, std::size_t r);

}  // namespace mixtensor
