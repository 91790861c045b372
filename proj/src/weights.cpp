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

#include "mixtensor/weights.hpp"

#include <stdexcept>

#include "mixtensor/random.hpp"

namespace mixtensor {

WeightSet::WeightSet(std::size_t r, ScalarKind kind) : r_(r), kind_(kind) {
  if (r == 0) throw std::invalid_argument("size constant r must be positive");
}

WeightSet WeightSet::zeros(const ModeTree& tree, std::size_t r, ScalarKind kind) {
  WeightSet out(r, kind);
  for (const auto& label : tree.interior_labels()) {
    out.set(label, {Matrix::zeros(r, r, kind), Matrix::zeros(r, r, kind)});
  }
  return out;
}

void WeightSet::set(const ModeSet& label, NodeWeights weights) {
  for (const Matrix* m : {&weights.first, &weights.second}) {
    if (m->rows() != r_ || m->cols() != r_) {
      throw std::invalid_argument("weights of node " + format_mode_set(label) + " must be " + std::to_string(r_) +
                                  "x" + std::to_string(r_));
    }
    require_same_kind(kind_, m->kind(), "WeightSet::set");
  }
  nodes_.insert_or_assign(label, std::move(weights));
}

const NodeWeights& WeightSet::at(const ModeSet& label) const {
  if (const auto* w = find(label)) return *w;
  throw std::invalid_argument("no weights for node " + format_mode_set(label));
}

const NodeWeights* WeightSet::find(const ModeSet& label) const {
  auto it = nodes_.find(label);
  return it == nodes_.end() ? nullptr : &it->second;
}

void WeightSet::check_keys(const ModeTree& tree) const {
  auto labels = tree.interior_labels();
  if (labels.size() != nodes_.size()) {
    throw std::invalid_argument("weight set has " + std::to_string(nodes_.size()) + " nodes, tree has " +
                                std::to_string(labels.size()) + " interior nodes");
  }
  for (const auto& label : labels) {
    if (!nodes_.contains(label)) throw std::invalid_argument("no weights for interior node " + format_mode_set(label));
  }
}

Discretizers::Discretizers(Matrix vectors) : vectors_(std::move(vectors)) {
  if (vectors_.rows() == 0 || vectors_.cols() == 0) throw std::invalid_argument("discretizers need M >= 1 and r >= 1");
}

Discretizers Discretizers::identity(std::size_t r, ScalarKind kind) { return Discretizers(Matrix::identity(r, kind)); }

Discretizers Discretizers::padded(std::size_t r) const {
  if (r < this->r()) throw std::invalid_argument("cannot pad discretizers to a smaller dimension");
  return dispatch_kind(kind(), [&]<class T>(std::type_identity<T>) {
    const auto& v = vectors_.values<T>();
    std::vector<T> out(m() * r, T(0));
    for (std::size_t i = 0; i < m(); ++i) {
      for (std::size_t j = 0; j < this->r(); ++j) out[i * r + j] = v[i * this->r() + j];
    }
    return Discretizers(Matrix(m(), r, std::move(out)));
  });
}

namespace {

Matrix random_matrix(std::size_t rows, std::size_t cols, Rng& rng, const WeightSampling& sampling) {
  if (sampling.distribution == WeightSampling::Distribution::integer_uniform) {
    if (sampling.bound < 1) throw std::invalid_argument("integer weight bound must be at least 1");
    std::vector<Rational> data(rows * cols);
    for (auto& x : data) x = rng.uniform_int(-sampling.bound, sampling.bound);
    return Matrix(rows, cols, std::move(data));
  }
  std::vector<double> data(rows * cols);
  for (auto& x : data) x = rng.unit();
  return Matrix(rows, cols, std::move(data));
}

}  // namespace

WeightSet random_weights(const ModeTree& tree, std::size_t r, std::uint64_t seed, WeightSampling sampling) {
  Rng rng(seed);
  WeightSet out(r, sampling.kind());
  for (const auto& label : tree.interior_labels()) {
    Matrix first = random_matrix(r, r, rng, sampling);
    Matrix second = random_matrix(r, r, rng, sampling);
    out.set(label, {std::move(first), std::move(second)});
  }
  return out;
}

Discretizers random_discretizers(std::size_t m, std::size_t r, std::uint64_t seed, WeightSampling sampling) {
  Rng rng(seed);
  return Discretizers(random_matrix(m, r, rng, sampling));
}

}  // namespace mixtensor
