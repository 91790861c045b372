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
#include <cstdint>
#include <vector>

#include "mixtensor/dense_tensor.hpp"

namespace mixtensor {

struct RankMode {
  enum class Kind { exact, numeric };
  Kind kind = Kind::exact;
  /// Relative to the largest singular value; numeric mode only.
  double tolerance = 1e-10;

  static RankMode exact() { return {Kind::exact, 0.0}; }
  static RankMode numeric(double tolerance = 1e-10) { return {Kind::numeric, tolerance}; }
};

/// Rank of m. Exact mode requires rational entries and returns the true rank;
/// numeric mode requires f64 entries and counts singular values above
/// tolerance * sigma_max.
std::size_t matrix_rank(const Matrix& m, RankMode mode = RankMode::exact());

/// Fraction-free (Bareiss) elimination over the integers after clearing
/// denominators row by row.
std::size_t bareiss_rank(const Matrix& m);

/// Exact rank through elimination modulo 62-bit primes.
///
/// Each prime gives a lower bound on the rational rank. Primes are added until
/// their product exceeds the Hadamard bound on every (R+1)-minor, R being the
/// largest modular rank seen, which proves no larger rank exists.
std::size_t multimodular_rank(const Matrix& m);

/// Rank of an integer matrix modulo a single prime p < 2^62.
std::size_t rank_mod_prime(const std::vector<BigInt>& entries, std::size_t rows, std::size_t cols,
                           std::uint64_t prime);

std::size_t numeric_rank(const Matrix& m, double tolerance);

}  // namespace mixtensor
