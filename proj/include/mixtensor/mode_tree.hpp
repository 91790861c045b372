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

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mixtensor/tensor_ops.hpp"

namespace mixtensor {

struct TreeNode {
  ModeSet label;
  /// children[0] is C_I, children[1] is C_II.
  std::optional<std::array<std::size_t, 2>> children;

  bool is_leaf() const noexcept { return !children.has_value(); }
};

/// A full binary tree over [n] whose leaves are the singletons and whose
/// interior labels are disjoint unions of their children's labels.
///
/// Construction validates every structural invariant; a ModeTree that exists
/// is valid. Node ids are positions in nodes().
class ModeTree {
 public:
  ModeTree(std::size_t n, std::vector<TreeNode> nodes, std::size_t root);

  std::size_t n() const noexcept { return n_; }
  const std::vector<TreeNode>& nodes() const noexcept { return nodes_; }
  std::size_t root() const noexcept { return root_; }
  const TreeNode& node(std::size_t id) const { return nodes_.at(id); }
  const ModeSet& label(std::size_t id) const { return nodes_.at(id).label; }
  bool is_leaf(std::size_t id) const { return nodes_.at(id).is_leaf(); }
  std::size_t child(std::size_t id, int which) const;

  std::optional<std::size_t> find(const ModeSet& label) const;
  /// Throws std::invalid_argument when no node carries `label`.
  std::size_t id_of(const ModeSet& label) const;
  bool contains(const ModeSet& label) const { return find(label).has_value(); }

  std::optional<std::size_t> parent(std::size_t id) const { return parent_.at(id); }
  /// Root has depth 0.
  std::size_t depth(std::size_t id) const { return depth_.at(id); }
  std::size_t height() const;

  /// All nodes, children before parents; C_I subtree before C_II subtree.
  std::vector<std::size_t> post_order() const;
  std::vector<std::size_t> interior_post_order() const;
  /// Ids of the nodes in the subtree rooted at id, post-order.
  std::vector<std::size_t> subtree_post_order(std::size_t id) const;
  /// Interior labels in lexicographic order.
  std::vector<ModeSet> interior_labels() const;
  std::size_t interior_count() const noexcept { return (nodes_.size() - 1) / 2; }

  /// Structural equality: same [n] and the same (label, C_I label, C_II label)
  /// triples. Node numbering is ignored.
  friend bool operator==(const ModeTree& a, const ModeTree& b);

 private:
  std::size_t n_;
  std::vector<TreeNode> nodes_;
  std::size_t root_;
  std::map<ModeSet, std::size_t> by_label_;
  std::vector<std::optional<std::size_t>> parent_;
  std::vector<std::size_t> depth_;
};

/// Splits every depth-d node on bit bit_order[d] of (element - 1); the half
/// with that bit clear becomes C_I.
ModeTree build_bit_split_tree(std::size_t n, const std::vector<int>& bit_order);
ModeTree build_baseline_tree(std::size_t n);
/// Requires log2(n) even.
ModeTree build_even_odd_swap_tree(std::size_t n);
/// Requires k to divide log2(n).
ModeTree build_k_group_swap_tree(std::size_t n, std::size_t k);

/// (L-1, ..., 0).
std::vector<int> baseline_bit_order(std::size_t levels);
std::vector<int> k_group_swap_bit_order(std::size_t levels, std::size_t k);

/// The bit order a perfect bit-split tree was built from, if any. Child order
/// is ignored: only which elements are grouped at each depth matters.
std::optional<std::vector<int>> bit_order_of(const ModeTree& tree);

/// log2(n) for a power of two, throws otherwise.
std::size_t log2_exact(std::size_t n);

std::string format_mode_set(const ModeSet& set);

}  // namespace mixtensor
