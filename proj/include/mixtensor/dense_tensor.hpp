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

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "mixtensor/scalar.hpp"

namespace mixtensor {

using Shape = std::vector<std::size_t>;

std::size_t shape_size(const Shape& dims);

/// Row-major (last index fastest) offset of a 0-based multi-index.
std::size_t flat_index(const Shape& dims, std::span<const std::size_t> index);
/// Inverse of flat_index.
std::vector<std::size_t> unflatten_index(const Shape& dims, std::size_t flat);

/// Order-N dense array of scalars of a single kind, stored row-major.
///
/// Entries are addressed with 0-based multi-indices; the order-0 tensor holds
/// exactly one entry. Values are immutable once constructed.
class DenseTensor {
 public:
  DenseTensor() : DenseTensor(Shape{}, std::vector<Rational>{Rational(0)}) {}
  DenseTensor(Shape dims, std::vector<Rational> data);
  DenseTensor(Shape dims, std::vector<double> data);
  DenseTensor(Shape dims, ScalarBuffer data);

  static DenseTensor zeros(Shape dims, ScalarKind kind);
  static DenseTensor vector(std::vector<Rational> values);
  static DenseTensor vector(std::vector<double> values);

  const Shape& dims() const noexcept { return dims_; }
  std::size_t order() const noexcept { return dims_.size(); }
  std::size_t size() const noexcept { return buffer_size(data_); }
  ScalarKind kind() const noexcept { return kind_of_buffer(data_); }
  const ScalarBuffer& buffer() const noexcept { return data_; }

  template <ScalarValue T>
  const std::vector<T>& values() const {
    return buffer_as<T>(data_);
  }

  Scalar at(std::span<const std::size_t> index) const;
  Scalar at(std::initializer_list<std::size_t> index) const {
    return at(std::span<const std::size_t>(index.begin(), index.size()));
  }
  Scalar flat(std::size_t i) const { return buffer_at(data_, i); }
  bool is_zero() const;

  friend bool operator==(const DenseTensor& a, const DenseTensor& b) = default;

 private:
  Shape dims_;
  ScalarBuffer data_;
};

/// Dense rows x cols matrix, row-major.
class Matrix {
 public:
  Matrix() : Matrix(0, 0, std::vector<Rational>{}) {}
  Matrix(std::size_t rows, std::size_t cols, std::vector<Rational> data);
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> data);
  Matrix(std::size_t rows, std::size_t cols, ScalarBuffer data);

  static Matrix zeros(std::size_t rows, std::size_t cols, ScalarKind kind);
  static Matrix identity(std::size_t n, ScalarKind kind);
  static Matrix from_rows(const std::vector<std::vector<long>>& rows, ScalarKind kind = ScalarKind::rational);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  ScalarKind kind() const noexcept { return kind_of_buffer(data_); }
  const ScalarBuffer& buffer() const noexcept { return data_; }

  template <ScalarValue T>
  const std::vector<T>& values() const {
    return buffer_as<T>(data_);
  }
  template <ScalarValue T>
  std::span<const T> row(std::size_t i) const {
    return std::span<const T>(values<T>()).subspan(i * cols_, cols_);
  }

  Scalar at(std::size_t i, std::size_t j) const { return buffer_at(data_, i * cols_ + j); }
  /// Copy with one entry replaced; kinds must match.
  Matrix with(std::size_t i, std::size_t j, const Scalar& value) const;
  Matrix transposed() const;

  friend bool operator==(const Matrix& a, const Matrix& b) = default;

 private:
  std::size_t rows_;
  std::size_t cols_;
  ScalarBuffer data_;
};

std::string describe_shape(const Shape& dims);

}  // namespace mixtensor
