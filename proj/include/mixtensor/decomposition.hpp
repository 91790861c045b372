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

#include "mixtensor/tiling.hpp"
#include "mixtensor/weights.hpp"

namespace mixtensor {

/// The grid tensors A^1..A^r produced by a decomposition.
using GridTensorBatch = std::vector<DenseTensor>;

/// Two mode trees over the same [n] and the interior nodes they exchange
/// tensors at.
class MixSpec {
 public:
  /// Mixture labels are sorted and deduplicated; each must be interior to both
  /// trees and differ from the root.
  MixSpec(ModeTree tree_t, ModeTree tree_tbar, std::vector<ModeSet> mixture_nodes);

  const ModeTree& tree_t() const noexcept { return tree_t_; }
  const ModeTree& tree_tbar() const noexcept { return tree_tbar_; }
  const std::vector<ModeSet>& mixture_nodes() const noexcept { return mixture_nodes_; }
  std::size_t n() const noexcept { return tree_t_.n(); }
  bool is_mixture_node(const ModeSet& label) const;

 private:
  ModeTree tree_t_;
  ModeTree tree_tbar_;
  std::vector<ModeSet> mixture_nodes_;
};

/// How ties are broken when linearizing the inclusion order. Any choice is a
/// valid execution order; the alternative exists to test that claim.
enum class ScheduleOrder {
  /// Smallest label first; C_I visited before C_II.
  canonical,
  /// Largest label first; C_II visited before C_I.
  reversed,
};

/// One step per mixture node plus a final root step. Each segment lists the
/// interior nodes of a tree computed at that step, children first.
struct SegmentSchedule {
  std::vector<ModeSet> steps;
  std::vector<std::vector<std::size_t>> segments_t;
  std::vector<std::vector<std::size_t>> segments_tbar;
};

SegmentSchedule segment_schedule(const MixSpec& spec, ScheduleOrder order = ScheduleOrder::canonical);

/// Interior nodes of the subtree under `top` not already marked in `visited`,
/// children first; marks what it returns.
std::vector<std::size_t> collect_segment(const ModeTree& tree, std::size_t top, std::vector<bool>& visited,
                                         bool c2_first = false);

GridTensorBatch tree_decompose(const ModeTree& tree, const WeightSet& weights, const Discretizers& disc,
                               const BinaryOperator& g);

/// Requires an even r shared by both weight sets.
GridTensorBatch mixed_decompose(const MixSpec& spec, const WeightSet& weights_t, const WeightSet& weights_tbar,
                                const Discretizers& disc, const BinaryOperator& g,
                                ScheduleOrder order = ScheduleOrder::canonical);

}  // namespace mixtensor
