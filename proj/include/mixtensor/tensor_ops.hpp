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

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "mixtensor/dense_tensor.hpp"

namespace mixtensor {

/// The commutative operator g combining the two halves of a size-2 filter.
///
/// Built-ins are the plain product (arithmetic circuits) and relu-sum,
/// g(a, b) = max(a + b, 0). Custom operators are accepted by the engine, but
/// only the built-ins satisfy g(0, 0) = 0 by construction.
class BinaryOperator {
 public:
  enum class Kind { product, relu_sum, custom };
  using RationalFn = std::function<Rational(const Rational&, const Rational&)>;
  using RealFn = std::function<double(double, double)>;

  static BinaryOperator product() { return BinaryOperator(Kind::product, "product", {}, {}); }
  static BinaryOperator relu_sum() { return BinaryOperator(Kind::relu_sum, "relu-sum", {}, {}); }
  static BinaryOperator custom(std::string name, RationalFn on_rational, RealFn on_real);
  /// Accepts "product" and "relu-sum".
  static BinaryOperator parse(std::string_view name);

  Kind kind() const noexcept { return kind_; }
  const std::string& name() const noexcept { return name_; }
  bool is_builtin() const noexcept { return kind_ != Kind::custom; }

  Rational operator()(const Rational& a, const Rational& b) const;
  double operator()(double a, double b) const;

  /// Hands f a concrete callable for scalar type T so hot loops avoid
  /// std::function dispatch for the built-ins.
  template <ScalarValue T, class F>
  decltype(auto) with_kernel(F&& f) const {
    switch (kind_) {
      case Kind::product:
        return std::forward<F>(f)([](const T& a, const T& b) -> T { return T(a * b); });
      case Kind::relu_sum:
        return std::forward<F>(f)([](const T& a, const T& b) -> T {
          T s = a + b;
          return s > 0 ? s : T(0);
        });
      case Kind::custom:
        break;
    }
    return std::forward<F>(f)([this](const T& a, const T& b) -> T { return (*this)(a, b); });
  }

 private:
  BinaryOperator(Kind kind, std::string name, RationalFn on_rational, RealFn on_real)
      : kind_(kind), name_(std::move(name)), on_rational_(std::move(on_rational)), on_real_(std::move(on_real)) {}

  Kind kind_;
  std::string name_;
  RationalFn on_rational_;
  RealFn on_real_;
};

/// Mode numbers (1-based) forming an index set or a tree node label.
/// Always sorted ascending without duplicates.
using ModeSet = std::vector<int>;

/// A permutation of {0, ..., N-1}.
using Permutation = std::vector<std::size_t>;

/// Outer product: dims(a) ++ dims(b), entries a(d...) * b(d'...).
DenseTensor tensor_product(const DenseTensor& a, const DenseTensor& b);

/// Outer product with multiplication replaced by g.
DenseTensor generalized_tensor_product(const DenseTensor& a, const DenseTensor& b, const BinaryOperator& g);

/// result(d_1..d_N) = a(d_sigma(1)..d_sigma(N)), sigma given 0-based.
DenseTensor mode_permute(const DenseTensor& a, const Permutation& sigma);
Permutation invert_permutation(const Permutation& sigma);

/// Reorders modes currently tagged by `mode_labels` so that the labels read
/// ascending. Result mode k holds the source mode carrying the k-th smallest
/// label.
DenseTensor align_to_sorted_modes(const DenseTensor& a, std::span<const int> mode_labels);

/// Matricization [A]_I: rows enumerate the modes in I (row-major over I),
/// columns the complement. I holds 1-based mode numbers; empty and full sets
/// give a row and a column vector respectively.
Matrix matricize(const DenseTensor& a, const ModeSet& index_set);

/// Kronecker product holding A_ij * B_kl at row i*rows(B)+k, col j*cols(B)+l.
Matrix kronecker(const Matrix& a, const Matrix& b);

Matrix matmul(const Matrix& a, const Matrix& b);

DenseTensor add(const DenseTensor& a, const DenseTensor& b);
DenseTensor scale(const DenseTensor& a, const Scalar& factor);

/// Exact-to-float conversion; f64 input is returned unchanged.
DenseTensor to_f64(const DenseTensor& a);
Matrix to_f64(const Matrix& a);

}  // namespace mixtensor
