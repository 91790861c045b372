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

#include "mixtensor/tiling.hpp"

#include <algorithm>
#include <stdexcept>

namespace mixtensor {

void check_index_set(const ModeSet& set, std::size_t n) {
  for (std::size_t t = 0; t < set.size(); ++t) {
    if (set[t] < 1 || static_cast<std::size_t>(set[t]) > n) {
      throw std::invalid_argument("index " + std::to_string(set[t]) + " outside [1," + std::to_string(n) + "]");
    }
    if (t > 0 && set[t] <= set[t - 1]) throw std::invalid_argument("index set must be sorted without duplicates");
  }
}

void check_proper_index_set(const ModeSet& set, std::size_t n) {
  check_index_set(set, n);
  if (set.empty()) throw std::invalid_argument("index set must be non-empty");
  if (set.size() == n) throw std::invalid_argument("index set must not be all of [1," + std::to_string(n) + "]");
}

ModeSet complement(const ModeSet& set, std::size_t n) {
  ModeSet out;
  std::size_t t = 0;
  for (int i = 1; i <= static_cast<int>(n); ++i) {
    if (t < set.size() && set[t] == i) {
      ++t;
    } else {
      out.push_back(i);
    }
  }
  return out;
}

bool is_subset(const ModeSet& a, const ModeSet& b) { return std::includes(b.begin(), b.end(), a.begin(), a.end()); }

Tiling tiling(const ModeTree& tree, const ModeSet& index_set) {
  check_index_set(index_set, tree.n());
  if (index_set.empty()) throw std::invalid_argument("tiling of an empty index set");
  Tiling out;
  std::vector<std::size_t> stack{tree.root()};
  while (!stack.empty()) {
    std::size_t id = stack.back();
    stack.pop_back();
    if (is_subset(tree.label(id), index_set)) {
      out.node_ids.push_back(id);
    } else if (!tree.is_leaf(id)) {
      stack.push_back(tree.child(id, 1));
      stack.push_back(tree.child(id, 0));
    }
  }
  std::sort(out.node_ids.begin(), out.node_ids.end(),
            [&](auto x, auto y) { return tree.label(x).front() < tree.label(y).front(); });
  for (auto id : out.node_ids) out.labels.push_back(tree.label(id));
  return out;
}

ModeSet reduce_index_set(const ModeSet& index_set, const ModeSet& node_label) {
  if (node_label.empty()) throw std::invalid_argument("reduction onto an empty node");
  ModeSet out;
  for (std::size_t j = 0; j < node_label.size(); ++j) {
    if (std::binary_search(index_set.begin(), index_set.end(), node_label[j])) out.push_back(static_cast<int>(j + 1));
  }
  return out;
}

std::size_t sibling_pairs_count(const ModeTree& tree, const ModeSet& index_set) {
  check_proper_index_set(index_set, tree.n());
  Tiling inside = tiling(tree, index_set);
  Tiling outside = tiling(tree, complement(index_set, tree.n()));
  std::size_t count = 0;
  for (auto a : inside.node_ids) {
    auto p = tree.parent(a);
    if (!p || tree.depth(a) <= 1) continue;
    std::size_t sibling = tree.child(*p, 0) == a ? tree.child(*p, 1) : tree.child(*p, 0);
    if (std::find(outside.node_ids.begin(), outside.node_ids.end(), sibling) != outside.node_ids.end()) ++count;
  }
  return count;
}

BigInt power(std::size_t base, std::size_t exponent) {
  BigInt out;
  mpz_ui_pow_ui(out.get_mpz_t(), base, exponent);
  return out;
}

BoundsReport theorem1_bounds(const ModeTree& tree, const ModeSet& index_set, std::size_t r) {
  if (r == 0) throw std::invalid_argument("size constant r must be positive");
  check_proper_index_set(index_set, tree.n());
  BoundsReport report;
  report.r = r;
  report.tiling_size = tiling(tree, index_set).size();
  report.complement_tiling_size = tiling(tree, complement(index_set, tree.n())).size();
  report.upper_exponent = std::min(report.tiling_size, report.complement_tiling_size);
  report.lower_exponent = sibling_pairs_count(tree, index_set);
  report.upper = power(r, report.upper_exponent);
  report.lower = power(r, report.lower_exponent);
  return report;
}

}  // namespace mixtensor
