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

#include <cstdint>
#include <map>
#include <vector>

#include "mixtensor/mode_tree.hpp"

namespace mixtensor {

/// Weights of one interior node: row gamma of `first` is a^(nu,gamma,I) and
/// row gamma of `second` is a^(nu,gamma,II). Both are r x r.
struct NodeWeights {
  Matrix first;
  Matrix second;

  friend bool operator==(const NodeWeights&, const NodeWeights&) = default;
};

/// Per-node weights keyed by interior label.
class WeightSet {
 public:
  explicit WeightSet(std::size_t r, ScalarKind kind = ScalarKind::rational);

  static WeightSet zeros(const ModeTree& tree, std::size_t r, ScalarKind kind = ScalarKind::rational);

  std::size_t r() const noexcept { return r_; }
  ScalarKind kind() const noexcept { return kind_; }
  const std::map<ModeSet, NodeWeights>& nodes() const noexcept { return nodes_; }

  void set(const ModeSet& label, NodeWeights weights);
  const NodeWeights& at(const ModeSet& label) const;
  const NodeWeights* find(const ModeSet& label) const;

  /// Throws unless the keys are exactly the interior labels of `tree`.
  void check_keys(const ModeTree& tree) const;

  friend bool operator==(const WeightSet&, const WeightSet&) = default;

 private:
  std::size_t r_;
  ScalarKind kind_;
  std::map<ModeSet, NodeWeights> nodes_;
};

/// M discretizer vectors of dimension r, stored as the rows of an M x r matrix.
class Discretizers {
 public:
  explicit Discretizers(Matrix vectors);

  static Discretizers identity(std::size_t r, ScalarKind kind = ScalarKind::rational);

  std::size_t m() const noexcept { return vectors_.rows(); }
  std::size_t r() const noexcept { return vectors_.cols(); }
  ScalarKind kind() const noexcept { return vectors_.kind(); }
  const Matrix& vectors() const noexcept { return vectors_; }

  /// Trailing zeros up to dimension `r`.
  Discretizers padded(std::size_t r) const;

  friend bool operator==(const Discretizers&, const Discretizers&) = default;

 private:
  Matrix vectors_;
};

struct WeightSampling {
  enum class Distribution { integer_uniform, unit_float };
  Distribution distribution = Distribution::integer_uniform;
  /// Integer draws are uniform on [-bound, bound].
  long bound = 5;

  static WeightSampling integers(long bound = 5) { return {Distribution::integer_uniform, bound}; }
  static WeightSampling unit_float() { return {Distribution::unit_float, 0}; }
  ScalarKind kind() const noexcept {
    return distribution == Distribution::integer_uniform ? ScalarKind::rational : ScalarKind::f64;
  }
};

/// Deterministic in (tree, r, seed, sampling). Nodes are filled in label
/// order, a_I before a_II, each row-major.
WeightSet random_weights(const ModeTree& tree, std::size_t r, std::uint64_t seed,
                         WeightSampling sampling = WeightSampling::integers());

Discretizers random_discretizers(std::size_t m, std::size_t r, std::uint64_t seed,
                                 WeightSampling sampling = WeightSampling::integers());

}  // namespace mixtensor
