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

#include "mixtensor/network.hpp"

#include <stdexcept>

#include "mixtensor/parallel.hpp"

namespace mixtensor {

namespace {

template <class T>
T dot(std::span<const T> a, const std::vector<T>& x) {
  T acc(0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!is_zero_value(a[i]) && !is_zero_value(x[i])) acc += a[i] * x[i];
  }
  return acc;
}

template <class T>
std::vector<T> node_value(const NodeWeights& w, const std::vector<T>& left, const std::vector<T>& right,
                          const BinaryOperator& g) {
  const std::size_t r = w.first.rows();
  std::vector<T> out(r);
  for (std::size_t gamma = 0; gamma < r; ++gamma) {
    out[gamma] = g(dot<T>(w.first.row<T>(gamma), left), dot<T>(w.second.row<T>(gamma), right));
  }
  return out;
}

// Window rows are x_1..x_N, each of length r, concatenated.
template <class T>
std::vector<std::vector<T>> leaf_values(std::size_t n, std::size_t r, const T* window) {
  std::vector<std::vector<T>> values(n);
  for (std::size_t j = 0; j < n; ++j) values[j].assign(window + j * r, window + (j + 1) * r);
  return values;
}

template <class T>
class TreeForward {
 public:
  TreeForward(const ModeTree& tree, const WeightSet& weights, const BinaryOperator& g)
      : tree_(tree), g_(g), order_(tree.interior_post_order()) {
    for (auto id : order_) node_weights_.push_back(&weights.at(tree.label(id)));
  }

  std::vector<T> operator()(const T* window, std::size_t r) const {
    std::vector<std::vector<T>> value(tree_.nodes().size());
    for (std::size_t id = 0; id < tree_.nodes().size(); ++id) {
      if (tree_.is_leaf(id)) {
        std::size_t j = static_cast<std::size_t>(tree_.label(id).front() - 1);
        value[id].assign(window + j * r, window + (j + 1) * r);
      }
    }
    for (std::size_t k = 0; k < order_.size(); ++k) {
      auto id = order_[k];
      value[id] = node_value<T>(*node_weights_[k], value[tree_.child(id, 0)], value[tree_.child(id, 1)], g_);
    }
    return value[tree_.root()];
  }

 private:
  const ModeTree& tree_;
  const BinaryOperator& g_;
  std::vector<std::size_t> order_;
  std::vector<const NodeWeights*> node_weights_;
};

template <class T>
class MixedForward {
 public:
  MixedForward(const MixSpec& spec, const WeightSet& wt, const WeightSet& wtbar, const BinaryOperator& g,
               ScheduleOrder order)
      : spec_(spec), wt_(wt), wtbar_(wtbar), g_(g), schedule_(segment_schedule(spec, order)) {}

  std::vector<T> operator()(const T* window, std::size_t r) const {
    const ModeTree& t = spec_.tree_t();
    const ModeTree& tb = spec_.tree_tbar();
    auto value = init(t, window, r);
    auto value_bar = init(tb, window, r);
    for (std::size_t step = 0; step < schedule_.steps.size(); ++step) {
      for (auto id : schedule_.segments_t[step]) {
        value[id] = node_value<T>(wt_.at(t.label(id)), value[t.child(id, 0)], value[t.child(id, 1)], g_);
      }
      for (auto id : schedule_.segments_tbar[step]) {
        value_bar[id] = node_value<T>(wtbar_.at(tb.label(id)), value_bar[tb.child(id, 0)], value_bar[tb.child(id, 1)], g_);
      }
      auto& a = value[t.id_of(schedule_.steps[step])];
      auto& b = value_bar[tb.id_of(schedule_.steps[step])];
      for (std::size_t gamma = 0; gamma < r / 2; ++gamma) std::swap(a[gamma], b[gamma]);
    }
    std::vector<T> out = value[t.root()];
    for (std::size_t y = 0; y < r; ++y) out[y] += value_bar[tb.root()][y];
    return out;
  }

 private:
  static std::vector<std::vector<T>> init(const ModeTree& tree, const T* window, std::size_t r) {
    std::vector<std::vector<T>> value(tree.nodes().size());
    for (std::size_t id = 0; id < tree.nodes().size(); ++id) {
      if (tree.is_leaf(id)) {
        std::size_t j = static_cast<std::size_t>(tree.label(id).front() - 1);
        value[id].assign(window + j * r, window + (j + 1) * r);
      }
    }
    return value;
  }

  const MixSpec& spec_;
  const WeightSet& wt_;
  const WeightSet& wtbar_;
  const BinaryOperator& g_;
  SegmentSchedule schedule_;
};

void check_window(const Matrix& window, std::size_t n, const WeightSet& weights) {
  if (window.rows() != n || window.cols() != weights.r()) {
    throw std::invalid_argument("window must be " + std::to_string(n) + "x" + std::to_string(weights.r()) + ", got " +
                                std::to_string(window.rows()) + "x" + std::to_string(window.cols()));
  }
  require_same_kind(window.kind(), weights.kind(), "forward pass");
}

// Evaluates `forward` on every discretizer assignment. Entry f of the grid
// uses discretizer d_j for input j, where d is f written in base M with the
// last input fastest.
template <class T, class Forward>
GridTensorBatch brute_force(std::size_t n, const Discretizers& disc, const Forward& forward, std::size_t threads,
                            std::size_t budget) {
  const std::size_t m = disc.m(), r = disc.r();
  std::size_t total = 1;
  for (std::size_t j = 0; j < n; ++j) {
    if (total > budget / m) throw BudgetExceededError("grid of M^N entries exceeds the budget");
    total *= m;
  }
  if (total > budget / r) throw BudgetExceededError("grid of M^N * r entries exceeds the budget");
  const auto& v = disc.vectors().values<T>();
  std::vector<std::vector<T>> out(r, std::vector<T>(total));
  const std::size_t chunks = std::min<std::size_t>(total, 64);
  parallel_for(chunks, threads, [&](std::size_t c) {
    const std::size_t begin = total * c / chunks, end = total * (c + 1) / chunks;
    std::vector<T> window(n * r);
    for (std::size_t f = begin; f < end; ++f) {
      std::size_t rest = f;
      for (std::size_t j = n; j-- > 0;) {
        std::size_t d = rest % m;
        rest /= m;
        std::copy(v.begin() + static_cast<std::ptrdiff_t>(d * r), v.begin() + static_cast<std::ptrdiff_t>((d + 1) * r),
                  window.begin() + static_cast<std::ptrdiff_t>(j * r));
      }
      auto value = forward(window.data(), r);
      for (std::size_t y = 0; y < r; ++y) out[y][f] = std::move(value[y]);
    }
  });
  GridTensorBatch batch;
  for (auto& t : out) batch.emplace_back(Shape(n, m), std::move(t));
  return batch;
}

}  // namespace

DenseTensor forward_tree_network(const ModeTree& tree, const WeightSet& weights, const Matrix& window,
                                 const BinaryOperator& g) {
  weights.check_keys(tree);
  check_window(window, tree.n(), weights);
  return dispatch_kind(window.kind(), [&]<class T>(std::type_identity<T>) {
    TreeForward<T> forward(tree, weights, g);
    return DenseTensor::vector(forward(window.values<T>().data(), weights.r()));
  });
}

DenseTensor forward_mixed_network(const MixSpec& spec, const WeightSet& weights_t, const WeightSet& weights_tbar,
                                  const Matrix& window, const BinaryOperator& g, ScheduleOrder order) {
  weights_t.check_keys(spec.tree_t());
  weights_tbar.check_keys(spec.tree_tbar());
  if (weights_t.r() != weights_tbar.r()) throw std::invalid_argument("mixed weight sets disagree on r");
  if (weights_t.r() % 2 != 0) throw std::invalid_argument("mixed network needs an even r");
  check_window(window, spec.n(), weights_t);
  require_same_kind(weights_t.kind(), weights_tbar.kind(), "forward pass");
  return dispatch_kind(window.kind(), [&]<class T>(std::type_identity<T>) {
    MixedForward<T> forward(spec, weights_t, weights_tbar, g, order);
    return DenseTensor::vector(forward(window.values<T>().data(), weights_t.r()));
  });
}

GridTensorBatch grid_tensor_bruteforce(const ModeTree& tree, const WeightSet& weights, const Discretizers& disc,
                                       const BinaryOperator& g, std::size_t threads, std::size_t budget) {
  weights.check_keys(tree);
  if (disc.r() != weights.r()) throw std::invalid_argument("discretizer dimension differs from r");
  require_same_kind(disc.kind(), weights.kind(), "grid oracle");
  return dispatch_kind(disc.kind(), [&]<class T>(std::type_identity<T>) {
    TreeForward<T> forward(tree, weights, g);
    return brute_force<T>(tree.n(), disc, forward, threads, budget);
  });
}

GridTensorBatch mixed_grid_bruteforce(const MixSpec& spec, const WeightSet& weights_t, const WeightSet& weights_tbar,
                                      const Discretizers& disc, const BinaryOperator& g, std::size_t threads,
                                      std::size_t budget) {
  weights_t.check_keys(spec.tree_t());
  weights_tbar.check_keys(spec.tree_tbar());
  if (weights_t.r() != weights_tbar.r() || disc.r() != weights_t.r()) {
    throw std::invalid_argument("mixed oracle needs one r across weights and discretizers");
  }
  if (weights_t.r() % 2 != 0) throw std::invalid_argument("mixed network needs an even r");
  require_same_kind(disc.kind(), weights_t.kind(), "grid oracle");
  require_same_kind(disc.kind(), weights_tbar.kind(), "grid oracle");
  return dispatch_kind(disc.kind(), [&]<class T>(std::type_identity<T>) {
    MixedForward<T> forward(spec, weights_t, weights_tbar, g, ScheduleOrder::canonical);
    return brute_force<T>(spec.n(), disc, forward, threads, budget);
  });
}

DilationProfile dilation_profile(const ModeTree& tree) {
  auto order = bit_order_of(tree);
  if (!order) throw std::invalid_argument("tree is not a perfect bit-split tree; it has no dilation profile");
  const std::size_t levels = order->size();
  DilationProfile profile(levels);
  for (std::size_t l = 1; l <= levels; ++l) profile[l - 1] = std::size_t{1} << (*order)[levels - l];
  return profile;
}

DenseTensor forward_dilated_network(const DilationProfile& profile, const Matrix& sequence, const LayerWeights& weights,
                                    const BinaryOperator& g) {
  const std::size_t steps = sequence.rows(), r = sequence.cols();
  if (steps == 0) throw std::invalid_argument("empty input sequence");
  return dispatch_kind(sequence.kind(), [&]<class T>(std::type_identity<T>) {
    std::vector<std::vector<T>> h(steps);
    for (std::size_t t = 0; t < steps; ++t) {
      auto row = sequence.row<T>(t);
      h[t].assign(row.begin(), row.end());
    }
    const std::vector<T> zero(r, T(0));
    for (std::size_t l = 1; l <= profile.size(); ++l) {
      const std::size_t d = profile[l - 1];
      std::vector<std::vector<T>> next(steps);
      for (std::size_t t = 0; t < steps; ++t) {
        const NodeWeights* w = weights(l, t + 1);
        const auto& earlier = t >= d ? h[t - d] : zero;
        if (!w) {
          next[t].assign(r, g(T(0), T(0)));
          continue;
        }
        if (w->first.rows() != r) throw std::invalid_argument("filter width differs from the channel count");
        require_same_kind(w->first.kind(), sequence.kind(), "dilated network");
        next[t] = node_value<T>(*w, earlier, h[t], g);
      }
      h = std::move(next);
    }
    return DenseTensor::vector(std::vector<T>(h.back()));
  });
}

LayerWeights tree_layer_weights(const ModeTree& tree, const WeightSet& weights) {
  const std::size_t levels = log2_exact(tree.n());
  return [&tree, &weights, levels](std::size_t layer, std::size_t time) -> const NodeWeights* {
    if (layer < 1 || layer > levels) return nullptr;
    for (std::size_t id = 0; id < tree.nodes().size(); ++id) {
      if (tree.is_leaf(id) || tree.depth(id) != levels - layer) continue;
      if (static_cast<std::size_t>(tree.label(id).back()) == time) return weights.find(tree.label(id));
    }
    return nullptr;
  };
}

}  // namespace mixtensor
