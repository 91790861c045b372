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

#include "mixtensor/hybrid.hpp"

#include <optional>
#include <stdexcept>

namespace mixtensor {

std::string_view to_string(TreeTag tag) { return tag == TreeTag::t ? "T" : "Tbar"; }

TreeTag parse_tree_tag(std::string_view text) {
  if (text == "T") return TreeTag::t;
  if (text == "Tbar") return TreeTag::tbar;
  throw std::invalid_argument("unknown tree tag '" + std::string(text) + "' (expected T or Tbar)");
}

HybridTree build_hybrid(const MixSpec& spec, const std::vector<TreeTag>& choices) {
  const SegmentSchedule schedule = segment_schedule(spec);
  if (choices.size() != schedule.steps.size()) {
    throw std::invalid_argument("hybrid needs " + std::to_string(schedule.steps.size()) + " choices, got " +
                                std::to_string(choices.size()));
  }
  const std::size_t n = spec.n();
  std::vector<TreeNode> nodes;
  for (std::size_t j = 1; j <= n; ++j) nodes.push_back({ModeSet{static_cast<int>(j)}, std::nullopt});
  std::map<ModeSet, std::size_t> id_of;
  std::vector<std::array<ModeSet, 2>> child_labels;
  std::map<ModeSet, TreeTag> source;
  for (std::size_t step = 0; step < choices.size(); ++step) {
    const bool from_t = choices[step] == TreeTag::t;
    const ModeTree& tree = from_t ? spec.tree_t() : spec.tree_tbar();
    for (auto id : from_t ? schedule.segments_t[step] : schedule.segments_tbar[step]) {
      const ModeSet& label = tree.label(id);
      if (!id_of.emplace(label, nodes.size()).second) {
        throw InternalError("hybrid segments overlap at " + format_mode_set(label));
      }
      nodes.push_back({label, std::nullopt});
      child_labels.push_back({tree.label(tree.child(id, 0)), tree.label(tree.child(id, 1))});
      source.emplace(label, choices[step]);
    }
  }
  for (std::size_t k = 0; k < child_labels.size(); ++k) {
    std::array<std::size_t, 2> ids{};
    for (int c = 0; c < 2; ++c) {
      const ModeSet& label = child_labels[k][c];
      if (label.size() == 1) {
        ids[c] = static_cast<std::size_t>(label.front() - 1);
      } else if (auto it = id_of.find(label); it != id_of.end()) {
        ids[c] = it->second;
      } else {
        throw InternalError("hybrid references missing node " + format_mode_set(label));
      }
    }
    nodes[n + k].children = ids;
  }
  std::size_t root = 0;
  if (n > 1) {
    ModeSet all(n);
    for (std::size_t i = 0; i < n; ++i) all[i] = static_cast<int>(i + 1);
    root = id_of.at(all);
  }
  try {
    return HybridTree{ModeTree(n, std::move(nodes), root), std::move(source), choices};
  } catch (const std::invalid_argument& e) {
    throw InternalError(std::string("hybrid is not a mode tree: ") + e.what());
  }
}

void validate_hybrid(const MixSpec& spec, const HybridTree& hybrid) {
  if (!(build_hybrid(spec, hybrid.choices) == hybrid)) {
    throw std::invalid_argument("hybrid does not match the segments its choices select");
  }
}

HybridEnumeration enumerate_hybrids(const MixSpec& spec) {
  const std::size_t steps = spec.mixture_nodes().size() + 1;
  if (steps >= 8 * sizeof(std::size_t) - 1) throw BudgetExceededError("too many mixture nodes to enumerate");
  HybridEnumeration out;
  out.sequences = std::size_t{1} << steps;
  std::vector<TreeTag> choices(steps);
  for (std::size_t s = 0; s < out.sequences; ++s) {
    for (std::size_t i = 0; i < steps; ++i) choices[i] = (s >> i & 1) ? TreeTag::tbar : TreeTag::t;
    HybridTree h = build_hybrid(spec, choices);
    bool seen = false;
    for (const auto& other : out.hybrids) {
      if (other == h) {
        seen = true;
        break;
      }
    }
    if (!seen) out.hybrids.push_back(std::move(h));
  }
  return out;
}

namespace {

std::optional<TreeTag> tag_of(const HybridTree& h, const ModeSet& label) {
  auto it = h.source.find(label);
  if (it == h.source.end()) return std::nullopt;
  return it->second;
}

}  // namespace

std::pair<WeightSet, WeightSet> hybrid_to_mixed_weights(const MixSpec& spec, const HybridTree& hybrid,
                                                        const WeightSet& hybrid_weights) {
  validate_hybrid(spec, hybrid);
  hybrid_weights.check_keys(hybrid.tree);
  const std::size_t rh = hybrid_weights.r();
  const std::size_t rm = 2 * rh;
  const ScalarKind kind = hybrid_weights.kind();

  return dispatch_kind(kind, [&]<class T>(std::type_identity<T>) {
    // Dense staging per tree: node label -> (a_I rows, a_II rows), rm x rm each.
    std::map<ModeSet, std::array<std::vector<T>, 2>> staged[2];
    for (int side = 0; side < 2; ++side) {
      const ModeTree& tree = side == 0 ? spec.tree_t() : spec.tree_tbar();
      for (const auto& label : tree.interior_labels()) {
        staged[side][label] = {std::vector<T>(rm * rm, T(0)), std::vector<T>(rm * rm, T(0))};
      }
    }
    const ModeTree& h = hybrid.tree;
    for (auto id : h.interior_post_order()) {
      const ModeSet& label = h.label(id);
      const TreeTag own = hybrid.source.at(label);
      auto& slots = staged[own == TreeTag::t ? 0 : 1].at(label);
      const NodeWeights& w = hybrid_weights.at(label);
      for (int c = 0; c < 2; ++c) {
        const Matrix& src = c == 0 ? w.first : w.second;
        const bool same_tree = tag_of(hybrid, h.label(h.child(id, c))) == own;
        const std::size_t offset = same_tree ? rh : 0;
        for (std::size_t gamma = 0; gamma < rh; ++gamma) {
          auto row = src.row<T>(gamma);
          for (std::size_t a = 0; a < rh; ++a) slots[c][(gamma + rh) * rm + offset + a] = row[a];
        }
      }
      auto parent = h.parent(id);
      if (!parent || tag_of(hybrid, h.label(*parent)) != own) {
        for (auto& m : slots) {
          for (std::size_t gamma = 0; gamma < rh; ++gamma) {
            std::swap_ranges(m.begin() + gamma * rm, m.begin() + (gamma + 1) * rm, m.begin() + (gamma + rh) * rm);
          }
        }
      }
    }
    std::pair<WeightSet, WeightSet> out{WeightSet(rm, kind), WeightSet(rm, kind)};
    for (int side = 0; side < 2; ++side) {
      WeightSet& ws = side == 0 ? out.first : out.second;
      for (auto& [label, m] : staged[side]) {
        ws.set(label, {Matrix(rm, rm, std::move(m[0])), Matrix(rm, rm, std::move(m[1]))});
      }
    }
    return out;
  });
}

LowerBoundWitness lower_bound_weights(const ModeTree& tree, const ModeSet& index_set, std::size_t r) {
  check_proper_index_set(index_set, tree.n());
  if (r == 0) throw std::invalid_argument("size constant r must be positive");
  const Tiling inside = tiling(tree, index_set);
  const Tiling outside = tiling(tree, complement(index_set, tree.n()));
  const std::size_t count = tree.nodes().size();

  std::vector<int> tiling_side(count, -1);
  for (auto id : inside.node_ids) tiling_side[id] = 0;
  for (auto id : outside.node_ids) tiling_side[id] = 1;
  std::vector<bool> covered(count, false);
  for (const Tiling* t : {&inside, &outside}) {
    for (auto top : t->node_ids) {
      for (auto id : tree.subtree_post_order(top)) covered[id] = true;
    }
  }
  std::vector<bool> straddles(count, false);
  for (std::size_t id = 0; id < count; ++id) {
    if (tree.is_leaf(id)) continue;
    int a = tiling_side[tree.child(id, 0)], b = tiling_side[tree.child(id, 1)];
    straddles[id] = a >= 0 && b >= 0 && a != b;
  }

  auto identity = Matrix::identity(r, ScalarKind::rational);
  auto zero_row = std::vector<Rational>(r, Rational(0));
  auto head_rows = [&](std::size_t child, bool every_row) {
    // Row 1 is all-ones toward a straddling child and e^(1) otherwise.
    std::vector<Rational> row = zero_row;
    if (straddles[child]) {
      std::fill(row.begin(), row.end(), Rational(1));
    } else {
      row[0] = 1;
    }
    std::vector<Rational> data(r * r, Rational(0));
    for (std::size_t gamma = 0; gamma < (every_row ? r : 1); ++gamma) {
      std::copy(row.begin(), row.end(), data.begin() + static_cast<std::ptrdiff_t>(gamma * r));
    }
    return Matrix(r, r, std::move(data));
  };

  LowerBoundWitness out{WeightSet(r, ScalarKind::rational), straddles[tree.root()]};
  for (auto id : tree.interior_post_order()) {
    if (covered[id] || straddles[id]) {
      out.weights.set(tree.label(id), {identity, identity});
      continue;
    }
    // The root applies the row-1 rule to every row. Giving it e^(1) alone
    // would keep a single tensor from a straddling child and cap the rank at
    // 1 whenever such a child sits directly below the root.
    const bool is_root = id == tree.root();
    out.weights.set(tree.label(id),
                    {head_rows(tree.child(id, 0), is_root), head_rows(tree.child(id, 1), is_root)});
  }
  return out;
}

}  // namespace mixtensor
