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

#include "mixtensor/mode_tree.hpp"

#include <algorithm>
#include <functional>
#include <sstream>
#include <stdexcept>

namespace mixtensor {

namespace {

[[noreturn]] void invalid(const std::string& what) { throw std::invalid_argument("invalid mode tree: " + what); }

}  // namespace

std::size_t log2_exact(std::size_t n) {
  if (n == 0 || (n & (n - 1)) != 0) throw std::invalid_argument(std::to_string(n) + " is not a power of two");
  std::size_t l = 0;
  while ((std::size_t{1} << l) < n) ++l;
  return l;
}

std::string format_mode_set(const ModeSet& set) {
  std::ostringstream os;
  os << '{';
  for (std::size_t i = 0; i < set.size(); ++i) os << (i ? "," : "") << set[i];
  os << '}';
  return os.str();
}

ModeTree::ModeTree(std::size_t n, std::vector<TreeNode> nodes, std::size_t root)
    : n_(n), nodes_(std::move(nodes)), root_(root) {
  if (n_ == 0 || (n_ & (n_ - 1)) != 0) invalid("n = " + std::to_string(n_) + " is not a positive power of two");
  if (nodes_.size() != 2 * n_ - 1) {
    invalid("a full binary tree over " + std::to_string(n_) + " leaves has " + std::to_string(2 * n_ - 1) +
            " nodes, got " + std::to_string(nodes_.size()));
  }
  if (root_ >= nodes_.size()) invalid("root id out of range");
  for (std::size_t id = 0; id < nodes_.size(); ++id) {
    const auto& label = nodes_[id].label;
    if (label.empty()) invalid("node " + std::to_string(id) + " has an empty label");
    for (std::size_t t = 0; t < label.size(); ++t) {
      if (label[t] < 1 || static_cast<std::size_t>(label[t]) > n_) invalid("label element outside [1,n]");
      if (t > 0 && label[t] <= label[t - 1]) invalid("label " + format_mode_set(label) + " is not sorted and unique");
    }
    if (!by_label_.emplace(label, id).second) invalid("duplicate label " + format_mode_set(label));
  }

  parent_.assign(nodes_.size(), std::nullopt);
  depth_.assign(nodes_.size(), 0);
  std::vector<bool> seen(nodes_.size(), false);
  std::vector<std::size_t> stack{root_};
  seen[root_] = true;
  std::size_t leaves = 0;
  while (!stack.empty()) {
    std::size_t id = stack.back();
    stack.pop_back();
    const auto& node = nodes_[id];
    if (node.is_leaf()) {
      if (node.label.size() != 1) invalid("leaf " + format_mode_set(node.label) + " is not a singleton");
      ++leaves;
      continue;
    }
    ModeSet merged;
    for (std::size_t c : *node.children) {
      if (c >= nodes_.size()) invalid("child id out of range");
      if (seen[c]) invalid("node " + std::to_string(c) + " reached twice");
      seen[c] = true;
      parent_[c] = id;
      depth_[c] = depth_[id] + 1;
      merged.insert(merged.end(), nodes_[c].label.begin(), nodes_[c].label.end());
      stack.push_back(c);
    }
    std::sort(merged.begin(), merged.end());
    if (std::adjacent_find(merged.begin(), merged.end()) != merged.end() || merged != node.label) {
      invalid("label " + format_mode_set(node.label) + " is not the disjoint union of its children");
    }
  }
  if (std::find(seen.begin(), seen.end(), false) != seen.end()) invalid("some nodes are unreachable from the root");
  if (leaves != n_ || nodes_[root_].label.size() != n_) invalid("root must be labeled [n]");
}

std::size_t ModeTree::child(std::size_t id, int which) const {
  const auto& node = nodes_.at(id);
  if (node.is_leaf()) throw std::invalid_argument("leaf " + format_mode_set(node.label) + " has no children");
  return (*node.children)[which == 0 ? 0 : 1];
}

std::optional<std::size_t> ModeTree::find(const ModeSet& label) const {
  auto it = by_label_.find(label);
  if (it == by_label_.end()) return std::nullopt;
  return it->second;
}

std::size_t ModeTree::id_of(const ModeSet& label) const {
  auto id = find(label);
  if (!id) throw std::invalid_argument("tree has no node " + format_mode_set(label));
  return *id;
}

std::size_t ModeTree::height() const { return *std::max_element(depth_.begin(), depth_.end()); }

std::vector<std::size_t> ModeTree::subtree_post_order(std::size_t id) const {
  std::vector<std::size_t> out;
  std::function<void(std::size_t)> visit = [&](std::size_t v) {
    if (!nodes_[v].is_leaf()) {
      visit((*nodes_[v].children)[0]);
      visit((*nodes_[v].children)[1]);
    }
    out.push_back(v);
  };
  visit(id);
  return out;
}

std::vector<std::size_t> ModeTree::post_order() const { return subtree_post_order(root_); }

std::vector<std::size_t> ModeTree::interior_post_order() const {
  auto all = post_order();
  std::erase_if(all, [&](std::size_t id) { return nodes_[id].is_leaf(); });
  return all;
}

std::vector<ModeSet> ModeTree::interior_labels() const {
  std::vector<ModeSet> out;
  for (const auto& [label, id] : by_label_) {
    if (!nodes_[id].is_leaf()) out.push_back(label);
  }
  return out;
}

bool operator==(const ModeTree& a, const ModeTree& b) {
  if (a.n_ != b.n_ || a.nodes_.size() != b.nodes_.size()) return false;
  for (const auto& [label, id] : a.by_label_) {
    auto other = b.find(label);
    if (!other) return false;
    const auto& x = a.nodes_[id];
    const auto& y = b.nodes_[*other];
    if (x.is_leaf() != y.is_leaf()) return false;
    if (x.is_leaf()) continue;
    for (int c = 0; c < 2; ++c) {
      if (a.label((*x.children)[c]) != b.label((*y.children)[c])) return false;
    }
  }
  return true;
}

ModeTree build_bit_split_tree(std::size_t n, const std::vector<int>& bit_order) {
  const std::size_t levels = log2_exact(n);
  if (bit_order.size() != levels) {
    throw std::invalid_argument("bit order has " + std::to_string(bit_order.size()) + " entries, expected " +
                                std::to_string(levels));
  }
  std::vector<bool> used(levels, false);
  for (int b : bit_order) {
    if (b < 0 || static_cast<std::size_t>(b) >= levels || used[b]) {
      throw std::invalid_argument("bit order is not a permutation of {0..L-1}");
    }
    used[b] = true;
  }
  std::vector<TreeNode> nodes;
  std::function<std::size_t(ModeSet, std::size_t)> grow = [&](ModeSet label, std::size_t depth) -> std::size_t {
    std::size_t id = nodes.size();
    nodes.push_back({label, std::nullopt});
    if (depth == levels) return id;
    ModeSet low, high;
    for (int e : label) ((((e - 1) >> bit_order[depth]) & 1) ? high : low).push_back(e);
    std::size_t left = grow(std::move(low), depth + 1);
    std::size_t right = grow(std::move(high), depth + 1);
    nodes[id].children = std::array<std::size_t, 2>{left, right};
    return id;
  };
  ModeSet all(n);
  for (std::size_t i = 0; i < n; ++i) all[i] = static_cast<int>(i + 1);
  grow(std::move(all), 0);
  return ModeTree(n, std::move(nodes), 0);
}

std::vector<int> baseline_bit_order(std::size_t levels) {
  std::vector<int> order(levels);
  for (std::size_t d = 0; d < levels; ++d) order[d] = static_cast<int>(levels - 1 - d);
  return order;
}

std::vector<int> k_group_swap_bit_order(std::size_t levels, std::size_t k) {
  if (k == 0 || levels % k != 0) {
    throw std::invalid_argument("group size " + std::to_string(k) + " does not divide L = " + std::to_string(levels));
  }
  auto order = baseline_bit_order(levels);
  for (std::size_t start = 0; start < levels; start += k) std::reverse(order.begin() + start, order.begin() + start + k);
  return order;
}

ModeTree build_baseline_tree(std::size_t n) { return build_bit_split_tree(n, baseline_bit_order(log2_exact(n))); }

ModeTree build_even_odd_swap_tree(std::size_t n) {
  std::size_t levels = log2_exact(n);
  if (levels % 2 != 0) throw std::invalid_argument("even/odd swap needs log2(n) even, got " + std::to_string(levels));
  return build_bit_split_tree(n, k_group_swap_bit_order(levels, 2));
}

ModeTree build_k_group_swap_tree(std::size_t n, std::size_t k) {
  return build_bit_split_tree(n, k_group_swap_bit_order(log2_exact(n), k));
}

std::optional<std::vector<int>> bit_order_of(const ModeTree& tree) {
  const std::size_t levels = log2_exact(tree.n());
  std::vector<int> order(levels, -1);
  for (std::size_t id = 0; id < tree.nodes().size(); ++id) {
    const auto& node = tree.node(id);
    std::size_t d = tree.depth(id);
    if (node.is_leaf()) {
      if (d != levels) return std::nullopt;
      continue;
    }
    if (d >= levels) return std::nullopt;
    const ModeSet& left = tree.label((*node.children)[0]);
    // The split bit is the unique bit that is constant on each child and
    // differs between them.
    int found = -1;
    for (std::size_t b = 0; b < levels && found < 0; ++b) {
      auto bit = [b](int e) { return ((e - 1) >> b) & 1; };
      int v = bit(left.front());
      bool ok = std::all_of(node.label.begin(), node.label.end(), [&](int e) {
        return std::binary_search(left.begin(), left.end(), e) == (bit(e) == v);
      });
      if (ok) found = static_cast<int>(b);
    }
    if (found < 0) return std::nullopt;
    if (order[d] >= 0 && order[d] != found) return std::nullopt;
    order[d] = found;
  }
  std::vector<bool> used(levels, false);
  for (int b : order) {
    if (b < 0 || used[b]) return std::nullopt;
    used[b] = true;
  }
  return order;
}

}  // namespace mixtensor
