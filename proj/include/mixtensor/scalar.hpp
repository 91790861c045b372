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

#include <gmpxx.h>

#include <concepts>
#include <string>
#include <string_view>
#include <type_traits>
#include <variant>
#include <vector>

#include "mixtensor/errors.hpp"

namespace mixtensor {

using Rational = mpq_class;
using BigInt = mpz_class;

enum class ScalarKind { rational, f64 };

template <class T>
concept ScalarValue = std::same_as<T, Rational> || std::same_as<T, double>;

template <ScalarValue T>
inline constexpr ScalarKind kind_of = std::same_as<T, Rational> ? ScalarKind::rational : ScalarKind::f64;

std::string_view to_string(ScalarKind kind);
ScalarKind parse_scalar_kind(std::string_view text);

/// Parses "p/q" or "p" into a reduced rational with positive denominator.
Rational parse_rational(std::string_view text);
/// Always "p/q", including q = 1.
std::string format_rational(const Rational& value);

void require_same_kind(ScalarKind a, ScalarKind b, std::string_view operation);

/// One real number, either exact or floating point. Kinds never mix silently.
class Scalar {
 public:
  Scalar() : value_(Rational(0)) {}
  Scalar(Rational value);  // NOLINT(google-explicit-constructor)
  Scalar(double value);    // NOLINT(google-explicit-constructor)
  static Scalar zero(ScalarKind kind);
  static Scalar from_integer(long value, ScalarKind kind);

  ScalarKind kind() const noexcept;
  const Rational& rational() const;
  double f64() const;

  template <ScalarValue T>
  const T& get() const {
    if (kind() != kind_of<T>) throw KindMismatchError("scalar holds " + std::string(mixtensor::to_string(kind())));
    return std::get<T>(value_);
  }

  std::string to_string() const;
  bool is_zero() const;

  friend Scalar operator+(const Scalar& a, const Scalar& b);
  friend Scalar operator*(const Scalar& a, const Scalar& b);
  friend bool operator==(const Scalar& a, const Scalar& b) = default;

 private:
  std::variant<Rational, double> value_;
};

/// Flat storage shared by tensors and matrices; one kind per buffer.
using ScalarBuffer = std::variant<std::vector<Rational>, std::vector<double>>;

ScalarKind kind_of_buffer(const ScalarBuffer& buffer) noexcept;
std::size_t buffer_size(const ScalarBuffer& buffer) noexcept;
ScalarBuffer zero_buffer(ScalarKind kind, std::size_t size);
Scalar buffer_at(const ScalarBuffer& buffer, std::size_t i);

template <ScalarValue T>
const std::vector<T>& buffer_as(const ScalarBuffer& buffer) {
  if (const auto* values = std::get_if<std::vector<T>>(&buffer)) return *values;
  throw KindMismatchError("expected " + std::string(to_string(kind_of<T>)) + " scalars, found " +
                          std::string(to_string(kind_of_buffer(buffer))));
}

/// Calls f(std::type_identity<T>{}) with the C++ type matching kind.
template <class F>
decltype(auto) dispatch_kind(ScalarKind kind, F&& f) {
  if (kind == ScalarKind::rational) return std::forward<F>(f)(std::type_identity<Rational>{});
  return std::forward<F>(f)(std::type_identity<double>{});
}

inline bool is_zero_value(const Rational& v) { return sgn(v) == 0; }
inline bool is_zero_value(double v) { return v == 0.0; }

}  // namespace mixtensor
