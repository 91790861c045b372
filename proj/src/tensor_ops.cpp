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

#include "mixtensor/tensor_ops.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace mixtensor {

BinaryOperator BinaryOperator::custom(std::string name, RationalFn on_rational, RealFn on_real) {
  if (!on_rational || !on_real) throw std::invalid_argument("custom operator needs both rational and real forms");
  return BinaryOperator(Kind::custom, std::move(name), std::move(on_rational), std::move(on_real));
}

BinaryOperator BinaryOperator::parse(std::string_view name) {
  if (name == "product") return product();
  if (name == "relu-sum") return relu_sum();
  throw std::invalid_argument("unknown operator '" + std::string(name) + "' (expected product or relu-sum)");
}

Rational BinaryOperator::operator()(const Rational& a, const Rational& b) const {
  switch (kind_) {
    case Kind::product:
      return a * b;
    case Kind::relu_sum: {
      Rational s = a + b;
      return sgn(s) > 0 ? s : Rational(0);
    }
    case Kind::custom:
      break;
  }
  return on_rational_(a, b);
}

double BinaryOperator::operator()(double a, double b) const {
  switch (kind_) {
    case Kind::product:
      return a * b;
    case Kind::relu_sum:
      return std::max(a + b, 0.0);
    case Kind::custom:
      break;
  }
  return on_real_(a, b);
}

DenseTensor tensor_product(const DenseTensor& a, const DenseTensor& b) {
  return generalized_tensor_product(a, b, BinaryOperator::product());
}

DenseTensor generalized_tensor_product(const DenseTensor& a, const DenseTensor& b, const BinaryOperator& g) {
  require_same_kind(a.kind(), b.kind(), "tensor product");
  Shape dims = a.dims();
  dims.insert(dims.end(), b.dims().begin(), b.dims().end());
  return dispatch_kind(a.kind(), [&]<class T>(std::type_identity<T>) {
    const auto& x = a.values<T>();
    const auto& y = b.values<T>();
    std::vector<T> out;
    out.reserve(x.size() * y.size());
    g.with_kernel<T>([&](auto&& op) {
      for (const auto& u : x) {
        for (const auto& v : y) out.push_back(op(u, v));
      }
    });
    return DenseTensor(std::move(dims), std::move(out));
  });
}

namespace {

void check_permutation(const Permutation& sigma, std::size_t order) {
  if (sigma.size() != order) {
    throw std::invalid_argument("permutation of length " + std::to_string(sigma.size()) + " for order-" +
                                std::to_string(order) + " tensor");
  }
  std::vector<bool> seen(order, false);
  for (auto s : sigma) {
    if (s >= order || seen[s]) throw std::invalid_argument("mode permutation is not bijective");
    seen[s] = true;
  }
}

// Gathers entries so that out(e) = a(src) where src[source_mode[k]] = e[k].
// Strides of the source are walked with an odometer to avoid div/mod per entry.
DenseTensor gather_modes(const DenseTensor& a, const std::vector<std::size_t>& source_mode) {
  const Shape& in_dims = a.dims();
  const std::size_t order = in_dims.size();
  std::vector<std::size_t> in_stride(order, 1);
  for (std::size_t k = order; k-- > 1;) in_stride[k - 1] = in_stride[k] * in_dims[k];
  Shape out_dims(order);
  std::vector<std::size_t> stride(order);
  for (std::size_t k = 0; k < order; ++k) {
    out_dims[k] = in_dims[source_mode[k]];
    stride[k] = in_stride[source_mode[k]];
  }
  return dispatch_kind(a.kind(), [&]<class T>(std::type_identity<T>) {
    const auto& src = a.values<T>();
    std::vector<T> out;
    out.reserve(src.size());
    std::vector<std::size_t> idx(order, 0);
    std::size_t offset = 0;
    for (std::size_t n = 0; n < src.size(); ++n) {
      out.push_back(src[offset]);
      for (std::size_t k = order; k-- > 0;) {
        if (++idx[k] < out_dims[k]) {
          offset += stride[k];
          break;
        }
        offset -= stride[k] * (out_dims[k] - 1);
        idx[k] = 0;
      }
    }
    return DenseTensor(std::move(out_dims), std::move(out));
  });
}

}  // namespace

Permutation invert_permutation(const Permutation& sigma) {
  check_permutation(sigma, sigma.size());
  Permutation inv(sigma.size());
  for (std::size_t k = 0; k < sigma.size(); ++k) inv[sigma[k]] = k;
  return inv;
}

DenseTensor mode_permute(const DenseTensor& a, const Permutation& sigma) {
  check_permutation(sigma, a.order());
  // result(d) = a(d_sigma(1), ..., d_sigma(N)): source mode k reads result
  // mode sigma(k), so result mode m is fed by source mode sigma^-1(m).
  return gather_modes(a, invert_permutation(sigma));
}

DenseTensor align_to_sorted_modes(const DenseTensor& a, std::span<const int> mode_labels) {
  if (mode_labels.size() != a.order()) {
    throw std::invalid_argument("got " + std::to_string(mode_labels.size()) + " labels for order-" +
                                std::to_string(a.order()) + " tensor");
  }
  std::vector<std::size_t> source(a.order());
  std::iota(source.begin(), source.end(), 0);
  std::sort(source.begin(), source.end(), [&](auto x, auto y) { return mode_labels[x] < mode_labels[y]; });
  for (std::size_t k = 1; k < source.size(); ++k) {
    if (mode_labels[source[k]] == mode_labels[source[k - 1]]) throw std::invalid_argument("duplicate mode label");
  }
  return gather_modes(a, source);
}

Matrix matricize(const DenseTensor& a, const ModeSet& index_set) {
  const std::size_t order = a.order();
  if (order == 0) throw std::invalid_argument("matricization needs an order of at least 1");
  for (std::size_t t = 0; t < index_set.size(); ++t) {
    if (index_set[t] < 1 || static_cast<std::size_t>(index_set[t]) > order) {
      throw std::out_of_range("mode " + std::to_string(index_set[t]) + " outside [1," + std::to_string(order) + "]");
    }
    if (t > 0 && index_set[t] <= index_set[t - 1]) throw std::invalid_argument("index set must be sorted and unique");
  }
  std::vector<std::size_t> source;
  std::vector<bool> in_set(order, false);
  for (int i : index_set) {
    source.push_back(static_cast<std::size_t>(i - 1));
    in_set[static_cast<std::size_t>(i - 1)] = true;
  }
  std::size_t rows = 1;
  for (auto k : source) rows *= a.dims()[k];
  for (std::size_t k = 0; k < order; ++k) {
    if (!in_set[k]) source.push_back(k);
  }
  DenseTensor moved = gather_modes(a, source);
  std::size_t cols = moved.size() / rows;
  return Matrix(rows, cols, moved.buffer());
}

Matrix kronecker(const Matrix& a, const Matrix& b) {
  require_same_kind(a.kind(), b.kind(), "kronecker");
  const std::size_t rows = a.rows() * b.rows();
  const std::size_t cols = a.cols() * b.cols();
  return dispatch_kind(a.kind(), [&]<class T>(std::type_identity<T>) {
    const auto& x = a.values<T>();
    const auto& y = b.values<T>();
    std::vector<T> out(rows * cols);
    for (std::size_t i = 0; i < a.rows(); ++i) {
      for (std::size_t j = 0; j < a.cols(); ++j) {
        const T& aij = x[i * a.cols() + j];
        for (std::size_t k = 0; k < b.rows(); ++k) {
          for (std::size_t l = 0; l < b.cols(); ++l) {
            out[(i * b.rows() + k) * cols + j * b.cols() + l] = aij * y[k * b.cols() + l];
          }
        }
      }
    }
    return Matrix(rows, cols, std::move(out));
  });
}

Matrix matmul(const Matrix& a, const Matrix& b) {
  require_same_kind(a.kind(), b.kind(), "matmul");
  if (a.cols() != b.rows()) {
    throw std::invalid_argument("matmul of " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) + " by " +
                                std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
  }
  return dispatch_kind(a.kind(), [&]<class T>(std::type_identity<T>) {
    const auto& x = a.values<T>();
    const auto& y = b.values<T>();
    std::vector<T> out(a.rows() * b.cols(), T(0));
    for (std::size_t i = 0; i < a.rows(); ++i) {
      for (std::size_t k = 0; k < a.cols(); ++k) {
        const T& aik = x[i * a.cols() + k];
        if (is_zero_value(aik)) continue;
        for (std::size_t j = 0; j < b.cols(); ++j) out[i * b.cols() + j] += aik * y[k * b.cols() + j];
      }
    }
    return Matrix(a.rows(), b.cols(), std::move(out));
  });
}

DenseTensor add(const DenseTensor& a, const DenseTensor& b) {
  require_same_kind(a.kind(), b.kind(), "add");
  if (a.dims() != b.dims()) {
    throw std::invalid_argument("add of shapes " + describe_shape(a.dims()) + " and " + describe_shape(b.dims()));
  }
  return dispatch_kind(a.kind(), [&]<class T>(std::type_identity<T>) {
    std::vector<T> out = a.values<T>();
    const auto& y = b.values<T>();
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += y[i];
    return DenseTensor(a.dims(), std::move(out));
  });
}

DenseTensor scale(const DenseTensor& a, const Scalar& factor) {
  require_same_kind(a.kind(), factor.kind(), "scale");
  return dispatch_kind(a.kind(), [&]<class T>(std::type_identity<T>) {
    std::vector<T> out = a.values<T>();
    const T& c = factor.get<T>();
    for (auto& v : out) v *= c;
    return DenseTensor(a.dims(), std::move(out));
  });
}

DenseTensor to_f64(const DenseTensor& a) {
  if (a.kind() == ScalarKind::f64) return a;
  const auto& q = a.values<Rational>();
  std::vector<double> out(q.size());
  for (std::size_t i = 0; i < q.size(); ++i) out[i] = q[i].get_d();
  return DenseTensor(a.dims(), std::move(out));
}

Matrix to_f64(const Matrix& a) {
  if (a.kind() == ScalarKind::f64) return a;
  const auto& q = a.values<Rational>();
  std::vector<double> out(q.size());
  for (std::size_t i = 0; i < q.size(); ++i) out[i] = q[i].get_d();
  return Matrix(a.rows(), a.cols(), std::move(out));
}

}  // namespace mixtensor
