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
#include <functional>
#include <vector>

#include "mixtensor/decomposition.hpp"

namespace mixtensor {

/// Refuses brute-force grids with more than this many entries (M^N * r).
inline constexpr std::size_t kDefaultGridBudget = std::size_t{1} << 24;

/// Evaluates the network of a mode tree on one input window. Row j of the
/// N x r window is x_j. Leaf j carries x_j; interior node nu carries
/// g(<a^(nu,gamma,I), value(C_I)>, <a^(nu,gamma,II), value(C_II)>) per gamma.
/// Returns the root's r values as an order-1 tensor.
DenseTensor forward_tree_network(const ModeTree& tree, const WeightSet& weights, const Matrix& window,
                                 const BinaryOperator& g);

/// Mixed network: both trees evaluated segment by segment, the first r/2
/// coordinates exchanged at each mixture node, root values summed.
DenseTensor forward_mixed_network(const MixSpec& spec, const WeightSet& weights_t, const WeightSet& weights_tbar,
                                  const Matrix& window, const BinaryOperator& g,
                                  ScheduleOrder order = ScheduleOrder::canonical);

/// Fills every grid entry with a forward pass on the matching discretizer
/// assignment. Entries are partitioned across `threads` workers; the result
/// does not depend on the partition.
GridTensorBatch grid_tensor_bruteforce(const ModeTree& tree, const WeightSet& weights, const Discretizers& disc,
                                       const BinaryOperator& g, std::size_t threads = 1,
                                       std::size_t budget = kDefaultGridBudget);

GridTensorBatch mixed_grid_bruteforce(const MixSpec& spec, const WeightSet& weights_t, const WeightSet& weights_tbar,
                                      const Discretizers& disc, const BinaryOperator& g, std::size_t threads = 1,
                                      std::size_t budget = kDefaultGridBudget);

/// Per-layer dilations d_1..d_L.
using DilationProfile = std::vector<std::size_t>;

/// Layer l has dilation 2^(bit_order[L - l]). Throws for trees that are not
/// perfect bit-split trees.
DilationProfile dilation_profile(const ModeTree& tree);

/// Filter weights of layer `layer` (1-based) at time `time` (1-based), or
/// nullptr for an all-zero filter.
using LayerWeights = std::function<const NodeWeights*(std::size_t layer, std::size_t time)>;

/// Layer-by-layer dilated convolution over a whole sequence:
/// h^(0)[t] = x[t] and
/// h^(l)[t]_gamma = g(<a^I, h^(l-1)[t - d_l]>, <a^II, h^(l-1)[t]>),
/// with h[t] = 0 before the sequence starts. Returns h^(L) at the last time
/// step. Row t-1 of `sequence` is x[t].
DenseTensor forward_dilated_network(const DilationProfile& profile, const Matrix& sequence, const LayerWeights& weights,
                                    const BinaryOperator& g);

/// Maps (layer l, time t) to the weights of the depth-(L - l) node of `tree`
/// whose largest element is t. The returned lookup references both arguments.
LayerWeights tree_layer_weights(const ModeTree& tree, const WeightSet& weights);

}  // namespace mixtensor
