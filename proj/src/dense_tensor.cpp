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

#include "mixtensor/dense_tensor.hpp"

#include <sstream>
#include <stdexcept>

namespace mixtensor {

std::size_t shape_size(const Shape& dims) {
  std::size_t total = 1;
  for (auto d : dims) total *= d;
  return total;
}

std::size_t flat_index(const Shape& dims, std::span<const std::size_t> index) {
  if (index.size() != dims.size()) {
    throw std::invalid_argument("index has " + std::to_string(index.size()) + " coordinates, tensor has order " +
                                std::to_string(dims.size()));
  }
  std::size_t flat = 0;
  for (std::size_t k = 0; k < dims.size(); ++k) {
    if (index[k] >= dims[k]) throw std::out_of_range("index out of range in mode " + std::to_string(k + 1));
    flat = flat * dims[k] + index[k];
  }
  return flat;
}

std::vector<std::size_t> unflatten_index(const Shape& dims, std::size_t flat) {
  std::vector<std::size_t> index(dims.size());
  for (std::size_t k = dims.size(); k-- > 0;) {
    index[k] = flat % dims[k];
    flat /= dims[k];
  }
  return index;
}

namespace {

void check_dims(const Shape& dims, std::size_t data_size) {
  for (auto d : dims) {
    if (d == 0) throw std::invalid_argument("tensor dimensions must be positive, got " + describe_shape(dims));
  }
  if (shape_size(dims) != data_size) {
    throw std::invalid_argument("shape " + describe_shape(dims) + " needs " + std::to_string(shape_size(dims)) +
                                " entries, got " + std::to_string(data_size));
  }
}

void canonicalize_all(ScalarBuffer& data) {
  if (auto* q = std::get_if<std::vector<Rational>>(&data)) {
    for (auto& v : *q) v.canonicalize();
  }
}

}  // namespace

DenseTensor::DenseTensor(Shape dims, std::vector<Rational> data) : DenseTensor(std::move(dims), ScalarBuffer(std::move(data))) {}
DenseTensor::DenseTensor(Shape dims, std::vector<double> data) : DenseTensor(std::move(dims), ScalarBuffer(std::move(data))) {}

DenseTensor::DenseTensor(Shape dims, ScalarBuffer data) : dims_(std::move(dims)), data_(std::move(data)) {
  check_dims(dims_, buffer_size(data_));
  canonicalize_all(data_);
}

DenseTensor DenseTensor::zeros(Shape dims, ScalarKind kind) {
  auto n = shape_size(dims);
  return DenseTensor(std::move(dims), zero_buffer(kind, n));
}

DenseTensor DenseTensor::vector(std::vector<Rational> values) {
  Shape dims{values.size()};
  return DenseTensor(std::move(dims), std::move(values));
}

DenseTensor DenseTensor::vector(std::vector<double> values) {
  Shape dims{values.size()};
  return DenseTensor(std::move(dims), std::move(values));
}

Scalar DenseTensor::at(std::span<const std::size_t> index) const { return buffer_at(data_, flat_index(dims_, index)); }

bool DenseTensor::is_zero() const {
  return std::visit(
      [](const auto& v) {
        for (const auto& x : v) {
          if (!is_zero_value(x)) return false;
        }
        return true;
      },
      data_);
}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<Rational> data)
    : Matrix(rows, cols, ScalarBuffer(std::move(data))) {}
Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : Matrix(rows, cols, ScalarBuffer(std::move(data))) {}

Matrix::Matrix(std::size_t rows, std::size_t cols, ScalarBuffer data) : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (buffer_size(data_) != rows * cols) {
    throw std::invalid_argument(std::to_string(rows) + "x" + std::to_string(cols) + " matrix needs " +
                                std::to_string(rows * cols) + " entries, got " + std::to_string(buffer_size(data_)));
  }
  canonicalize_all(data_);
}

Matrix Matrix::zeros(std::size_t rows, std::size_t cols, ScalarKind kind) {
  return Matrix(rows, cols, zero_buffer(kind, rows * cols));
}

Matrix Matrix::identity(std::size_t n, ScalarKind kind) {
  return dispatch_kind(kind, [n]<class T>(std::type_identity<T>) {
    std::vector<T> data(n * n, T(0));
    for (std::size_t i = 0; i < n; ++i) data[i * n + i] = T(1);
    return Matrix(n, n, std::move(data));
  });
}

Matrix Matrix::from_rows(const std::vector<std::vector<long>>& rows, ScalarKind kind) {
  std::size_t r = rows.size();
  std::size_t c = r == 0 ? 0 : rows.front().size();
  for (const auto& row : rows) {
    if (row.size() != c) throw std::invalid_argument("ragged rows in matrix literal");
  }
  return dispatch_kind(kind, [&]<class T>(std::type_identity<T>) {
    std::vector<T> data;
    data.reserve(r * c);
    for (const auto& row : rows) {
      for (long v : row) data.push_back(T(v));
    }
    return Matrix(r, c, std::move(data));
  });
}

Matrix Matrix::with(std::size_t i, std::size_t j, const Scalar& value) const {
  if (i >= rows_ || j >= cols_) throw std::out_of_range("matrix entry out of range");
  require_same_kind(kind(), value.kind(), "Matrix::with");
  Matrix copy = *this;
  std::visit(
      [&](auto& v) {
        using T = typename std::decay_t<decltype(v)>::value_type;
        v[i * cols_ + j] = value.get<T>();
      },
      copy.data_);
  return copy;
}

Matrix Matrix::transposed() const {
  return std::visit(
      [&](const auto& v) {
        using T = typename std::decay_t<decltype(v)>::value_type;
        std::vector<T> out(v.size());
        for (std::size_t i = 0; i < rows_; ++i) {
          for (std::size_t j = 0; j < cols_; ++j) out[j * rows_ + i] = v[i * cols_ + j];
        }
        return Matrix(cols_, rows_, std::move(out));
      },
      data_);
}

std::string describe_shape(const Shape& dims) {
  std::ostringstream os;
  os << '(';
  for (std::size_t k = 0; k < dims.size(); ++k) os << (k ? "," : "") << dims[k];
  os << ')';
  return os.str();
}

}  // namespace mixtensor
