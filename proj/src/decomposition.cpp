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

#include "mixtensor/decomposition.hpp"

#include <algorithm>
#include <limits>
#include <optional>
#include <stdexcept>

namespace mixtensor {

MixSpec::MixSpec(ModeTree tree_t, ModeTree tree_tbar, std::vector<ModeSet> mixture_nodes)
    : tree_t_(std::move(tree_t)), tree_tbar_(std::move(tree_tbar)), mixture_nodes_(std::move(mixture_nodes)) {
  if (tree_t_.n() != tree_tbar_.n()) throw std::invalid_argument("mixed trees must share the same [n]");
  std::sort(mixture_nodes_.begin(), mixture_nodes_.end());
  mixture_nodes_.erase(std::unique(mixture_nodes_.begin(), mixture_nodes_.end()), mixture_nodes_.end());
  for (const auto& label : mixture_nodes_) {
    if (label.size() == tree_t_.n()) throw std::invalid_argument("the root cannot be a mixture node");
    for (const ModeTree* tree : {&tree_t_, &tree_tbar_}) {
      auto id = tree->find(label);
      if (!id || tree->is_leaf(*id)) {
        throw std::invalid_argument("mixture node " + format_mode_set(label) + " is not interior to both trees");
      }
    }
  }
}

bool MixSpec::is_mixture_node(const ModeSet& label) const {
  return std::binary_search(mixture_nodes_.begin(), mixture_nodes_.end(), label);
}

std::vector<std::size_t> collect_segment(const ModeTree& tree, std::size_t top, std::vector<bool>& visited,
                                         bool c2_first) {
  std::vector<std::size_t> out;
  // Iterative post-order; a visited node is a finished segment, so its whole
  // subtree is skipped.
  std::vector<std::pair<std::size_t, bool>> stack{{top, false}};
  while (!stack.empty()) {
    auto [id, expanded] = stack.back();
    stack.pop_back();
    if (tree.is_leaf(id) || visited[id]) continue;
    if (expanded) {
      visited[id] = true;
      out.push_back(id);
      continue;
    }
    stack.push_back({id, true});
    int first = c2_first ? 1 : 0;
    stack.push_back({tree.child(id, 1 - first), false});
    stack.push_back({tree.child(id, first), false});
  }
  return out;
}

SegmentSchedule segment_schedule(const MixSpec& spec, ScheduleOrder order) {
  std::vector<ModeSet> pending = spec.mixture_nodes();
  SegmentSchedule schedule;
  // Kahn's algorithm over strict inclusion, choosing among ready nodes by
  // label order.
  while (!pending.empty()) {
    std::optional<std::size_t> pick;
    for (std::size_t i = 0; i < pending.size(); ++i) {
      bool ready = std::none_of(pending.begin(), pending.end(), [&](const ModeSet& other) {
        return other != pending[i] && is_subset(other, pending[i]);
      });
      if (!ready) continue;
      if (!pick || (order == ScheduleOrder::canonical ? pending[i] < pending[*pick] : pending[*pick] < pending[i])) {
        pick = i;
      }
    }
    schedule.steps.push_back(pending[*pick]);
    pending.erase(pending.begin() + static_cast<std::ptrdiff_t>(*pick));
  }
  schedule.steps.push_back(spec.tree_t().label(spec.tree_t().root()));

  bool c2_first = order == ScheduleOrder::reversed;
  std::vector<bool> seen_t(spec.tree_t().nodes().size(), false);
  std::vector<bool> seen_tbar(spec.tree_tbar().nodes().size(), false);
  for (const auto& mu : schedule.steps) {
    schedule.segments_t.push_back(collect_segment(spec.tree_t(), spec.tree_t().id_of(mu), seen_t, c2_first));
    schedule.segments_tbar.push_back(
        collect_segment(spec.tree_tbar(), spec.tree_tbar().id_of(mu), seen_tbar, c2_first));
  }
  return schedule;
}

namespace {

template <class T>
using Tensors = std::vector<std::vector<T>>;

// For every entry of a node tensor (modes in sorted label order), the flat
// positions in the C_I and C_II tensors it combines.
struct IndexMap {
  std::vector<std::uint32_t> left;
  std::vector<std::uint32_t> right;
};

std::size_t checked_power(std::size_t m, std::size_t e) {
  std::size_t out = 1;
  for (std::size_t i = 0; i < e; ++i) {
    if (out > std::numeric_limits<std::uint32_t>::max() / m) throw BudgetExceededError("node tensor exceeds 2^32 entries");
    out *= m;
  }
  return out;
}

IndexMap build_index_map(const ModeSet& left, const ModeSet& right, std::size_t m) {
  const std::size_t order = left.size() + right.size();
  std::vector<int> side(order);
  std::vector<std::size_t> stride(order);
  std::size_t a = 0, b = 0;
  for (std::size_t p = 0; p < order; ++p) {
    bool from_left = b == right.size() || (a < left.size() && left[a] < right[b]);
    side[p] = from_left ? 0 : 1;
    if (from_left) {
      stride[p] = checked_power(m, left.size() - 1 - a++);
    } else {
      stride[p] = checked_power(m, right.size() - 1 - b++);
    }
  }
  const std::size_t total = checked_power(m, order);
  IndexMap map;
  map.left.resize(total);
  map.right.resize(total);
  std::vector<std::size_t> idx(order, 0);
  std::size_t offset[2] = {0, 0};
  for (std::size_t k = 0; k < total; ++k) {
    map.left[k] = static_cast<std::uint32_t>(offset[0]);
    map.right[k] = static_cast<std::uint32_t>(offset[1]);
    for (std::size_t p = order; p-- > 0;) {
      if (++idx[p] < m) {
        offset[side[p]] += stride[p];
        break;
      }
      offset[side[p]] -= stride[p] * (m - 1);
      idx[p] = 0;
    }
  }
  return map;
}

// Sum over alpha of coeffs[alpha] * tensors[alpha]; nullopt when every
// coefficient is zero.
template <class T>
std::optional<std::vector<T>> weighted_sum(std::span<const T> coeffs, const Tensors<T>& tensors) {
  std::optional<std::vector<T>> out;
  for (std::size_t alpha = 0; alpha < coeffs.size(); ++alpha) {
    const T& c = coeffs[alpha];
    if (is_zero_value(c)) continue;
    const auto& x = tensors[alpha];
    if (!out) {
      out.emplace(x.size(), T(0));
    }
    auto& acc = *out;
    if constexpr (std::is_same_v<T, Rational>) {
      Rational tmp;
      bool unit = c == 1;
      for (std::size_t i = 0; i < x.size(); ++i) {
        if (sgn(x[i]) == 0) continue;
        if (unit) {
          mpq_add(acc[i].get_mpq_t(), acc[i].get_mpq_t(), x[i].get_mpq_t());
        } else {
          mpq_mul(tmp.get_mpq_t(), c.get_mpq_t(), x[i].get_mpq_t());
          mpq_add(acc[i].get_mpq_t(), acc[i].get_mpq_t(), tmp.get_mpq_t());
        }
      }
    } else {
      for (std::size_t i = 0; i < x.size(); ++i) acc[i] += c * x[i];
    }
  }
  return out;
}

template <class T>
Tensors<T> combine(const Tensors<T>& left, const Tensors<T>& right, const NodeWeights& w, const IndexMap& map,
                   const BinaryOperator& g) {
  const std::size_t r = w.first.rows();
  const std::size_t total = map.left.size();
  const std::size_t left_size = left.front().size();
  const std::size_t right_size = right.front().size();
  Tensors<T> out(r);
  for (std::size_t gamma = 0; gamma < r; ++gamma) {
    auto lsum = weighted_sum<T>(w.first.row<T>(gamma), left);
    auto rsum = weighted_sum<T>(w.second.row<T>(gamma), right);
    auto& dst = out[gamma];
    bool zero_output = g.kind() == BinaryOperator::Kind::product ? (!lsum || !rsum)
                                                                  : (g.is_builtin() && !lsum && !rsum);
    if (zero_output) {
      dst.assign(total, T(0));
      continue;
    }
    if (!lsum) lsum.emplace(left_size, T(0));
    if (!rsum) rsum.emplace(right_size, T(0));
    const auto& x = *lsum;
    const auto& y = *rsum;
    dst.resize(total);
    if constexpr (std::is_same_v<T, Rational>) {
      if (g.kind() == BinaryOperator::Kind::product) {
        for (std::size_t k = 0; k < total; ++k) {
          const Rational& u = x[map.left[k]];
          const Rational& v = y[map.right[k]];
          if (sgn(u) != 0 && sgn(v) != 0) mpq_mul(dst[k].get_mpq_t(), u.get_mpq_t(), v.get_mpq_t());
        }
        continue;
      }
    }
    g.with_kernel<T>([&](auto&& op) {
      for (std::size_t k = 0; k < total; ++k) dst[k] = op(x[map.left[k]], y[map.right[k]]);
    });
  }
  return out;
}

template <class T>
Tensors<T> leaf_tensors(const Discretizers& disc) {
  const auto& v = disc.vectors().values<T>();
  Tensors<T> out(disc.r(), std::vector<T>(disc.m()));
  for (std::size_t gamma = 0; gamma < disc.r(); ++gamma) {
    for (std::size_t i = 0; i < disc.m(); ++i) out[gamma][i] = v[i * disc.r() + gamma];
  }
  return out;
}

// Node tensors of one tree, computed on demand and released once consumed.
template <class T>
class TreeEvaluator {
 public:
  TreeEvaluator(const ModeTree& tree, const WeightSet& weights, const Discretizers& disc, const BinaryOperator& g)
      : tree_(tree), weights_(weights), disc_(disc), g_(g), tensors_(tree.nodes().size()) {
    auto leaf = leaf_tensors<T>(disc);
    for (std::size_t id = 0; id < tree.nodes().size(); ++id) {
      if (tree.is_leaf(id)) tensors_[id] = leaf;
    }
  }

  void evaluate(std::size_t id) {
    std::size_t c1 = tree_.child(id, 0), c2 = tree_.child(id, 1);
    if (!tensors_[c1] || !tensors_[c2]) throw InternalError("node evaluated before its children");
    IndexMap map = build_index_map(tree_.label(c1), tree_.label(c2), disc_.m());
    tensors_[id] = combine<T>(*tensors_[c1], *tensors_[c2], weights_.at(tree_.label(id)), map, g_);
    tensors_[c1].reset();
    tensors_[c2].reset();
  }

  Tensors<T>& at(std::size_t id) {
    if (!tensors_[id]) throw InternalError("node tensors not available");
    return *tensors_[id];
  }

 private:
  const ModeTree& tree_;
  const WeightSet& weights_;
  const Discretizers& disc_;
  const BinaryOperator& g_;
  std::vector<std::optional<Tensors<T>>> tensors_;
};

void check_inputs(const ModeTree& tree, const WeightSet& weights, const Discretizers& disc) {
  weights.check_keys(tree);
  if (disc.r() != weights.r()) {
    throw std::invalid_argument("discretizer dimension " + std::to_string(disc.r()) + " differs from r = " +
                                std::to_string(weights.r()));
  }
  require_same_kind(weights.kind(), disc.kind(), "decomposition");
}

GridTensorBatch to_batch(std::size_t n, std::size_t m, auto&& tensors) {
  GridTensorBatch out;
  for (auto& t : tensors) out.emplace_back(Shape(n, m), std::move(t));
  return out;
}

}  // namespace

GridTensorBatch tree_decompose(const ModeTree& tree, const WeightSet& weights, const Discretizers& disc,
                               const BinaryOperator& g) {
  check_inputs(tree, weights, disc);
  return dispatch_kind(disc.kind(), [&]<class T>(std::type_identity<T>) {
    TreeEvaluator<T> eval(tree, weights, disc, g);
    for (auto id : tree.interior_post_order()) eval.evaluate(id);
    return to_batch(tree.n(), disc.m(), std::move(eval.at(tree.root())));
  });
}

GridTensorBatch mixed_decompose(const MixSpec& spec, const WeightSet& weights_t, const WeightSet& weights_tbar,
                                const Discretizers& disc, const BinaryOperator& g, ScheduleOrder order) {
  check_inputs(spec.tree_t(), weights_t, disc);
  check_inputs(spec.tree_tbar(), weights_tbar, disc);
  const std::size_t r = weights_t.r();
  if (r % 2 != 0) throw std::invalid_argument("mixed decomposition needs an even r, got " + std::to_string(r));
  const SegmentSchedule schedule = segment_schedule(spec, order);
  return dispatch_kind(disc.kind(), [&]<class T>(std::type_identity<T>) {
    TreeEvaluator<T> eval_t(spec.tree_t(), weights_t, disc, g);
    TreeEvaluator<T> eval_tbar(spec.tree_tbar(), weights_tbar, disc, g);
    for (std::size_t step = 0; step < schedule.steps.size(); ++step) {
      for (auto id : schedule.segments_t[step]) eval_t.evaluate(id);
      for (auto id : schedule.segments_tbar[step]) eval_tbar.evaluate(id);
      const ModeSet& mu = schedule.steps[step];
      auto& phi = eval_t.at(spec.tree_t().id_of(mu));
      auto& phi_bar = eval_tbar.at(spec.tree_tbar().id_of(mu));
      for (std::size_t gamma = 0; gamma < r / 2; ++gamma) std::swap(phi[gamma], phi_bar[gamma]);
    }
    auto& out = eval_t.at(spec.tree_t().root());
    const auto& out_bar = eval_tbar.at(spec.tree_tbar().root());
    for (std::size_t y = 0; y < r; ++y) {
      for (std::size_t k = 0; k < out[y].size(); ++k) out[y][k] += out_bar[y][k];
    }
    return to_batch(spec.n(), disc.m(), std::move(out));
  });
}

}  // namespace mixtensor
