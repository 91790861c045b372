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

#include "mixtensor/scalar.hpp"

#include <charconv>
#include <stdexcept>

namespace mixtensor {

std::string_view to_string(ScalarKind kind) {
  return kind == ScalarKind::rational ? "rational" : "f64";
}

ScalarKind parse_scalar_kind(std::string_view text) {
  if (text == "rational") return ScalarKind::rational;
  if (text == "f64") return ScalarKind::f64;
  throw std::invalid_argument("unknown scalar kind '" + std::string(text) + "'");
}

Rational parse_rational(std::string_view text) {
  std::string s(text);
  if (s.empty()) throw std::invalid_argument("empty rational literal");
  Rational value;
  // mpq_set_str accepts "p" and "p/q" in base 10 but not a leading '+' or
  // surrounding whitespace; canonicalize rejects a zero denominator.
  if (value.set_str(s, 10) != 0) throw std::invalid_argument("malformed rational '" + s + "'");
  if (sgn(value.get_den()) == 0) throw std::invalid_argument("zero denominator in '" + s + "'");
  value.canonicalize();
  return value;
}

std::string format_rational(const Rational& value) {
  return value.get_num().get_str() + "/" + value.get_den().get_str();
}

void require_same_kind(ScalarKind a, ScalarKind b, std::string_view operation) {
  if (a != b) {
    throw KindMismatchError(std::string(operation) + ": cannot mix " + std::string(to_string(a)) + " and " +
                            std::string(to_string(b)) + " scalars");
  }
}

Scalar::Scalar(Rational value) : value_(std::move(value)) { std::get<Rational>(value_).canonicalize(); }
Scalar::Scalar(double value) : value_(value) {}

Scalar Scalar::zero(ScalarKind kind) { return from_integer(0, kind); }

Scalar Scalar::from_integer(long value, ScalarKind kind) {
  if (kind == ScalarKind::rational) return Scalar(Rational(value));
  return Scalar(static_cast<double>(value));
}

ScalarKind Scalar::kind() const noexcept {
  return std::holds_alternative<Rational>(value_) ? ScalarKind::rational : ScalarKind::f64;
}

const Rational& Scalar::rational() const { return get<Rational>(); }
double Scalar::f64() const { return get<double>(); }

std::string Scalar::to_string() const {
  if (kind() == ScalarKind::rational) return format_rational(std::get<Rational>(value_));
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), std::get<double>(value_));
  return std::string(buf, res.ptr);
}

bool Scalar::is_zero() const {
  return std::visit([](const auto& v) { return is_zero_value(v); }, value_);
}

Scalar operator+(const Scalar& a, const Scalar& b) {
  require_same_kind(a.kind(), b.kind(), "scalar addition");
  if (a.kind() == ScalarKind::rational) return Scalar(Rational(a.rational() + b.rational()));
  return Scalar(a.f64() + b.f64());
}

Scalar operator*(const Scalar& a, const Scalar& b) {
  require_same_kind(a.kind(), b.kind(), "scalar multiplication");
  if (a.kind() == ScalarKind::rational) return Scalar(Rational(a.rational() * b.rational()));
  return Scalar(a.f64() * b.f64());
}

ScalarKind kind_of_buffer(const ScalarBuffer& buffer) noexcept {
  return std::holds_alternative<std::vector<Rational>>(buffer) ? ScalarKind::rational : ScalarKind::f64;
}

std::size_t buffer_size(const ScalarBuffer& buffer) noexcept {
  return std::visit([](const auto& v) { return v.size(); }, buffer);
}

ScalarBuffer zero_buffer(ScalarKind kind, std::size_t size) {
  if (kind == ScalarKind::rational) return std::vector<Rational>(size);
  return std::vector<double>(size, 0.0);
}

Scalar buffer_at(const ScalarBuffer& buffer, std::size_t i) {
  return std::visit([i](const auto& v) { return Scalar(v.at(i)); }, buffer);
}

}  // namespace mixtensor
