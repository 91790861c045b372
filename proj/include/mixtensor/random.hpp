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
#include <random>

namespace mixtensor {

/// Spreads (master, index) into an independent stream seed (SplitMix64).
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

/// mt19937_64 with hand-rolled bounded draws. The standard distributions are
/// implementation-defined, which would make artifacts differ across
/// standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  /// Uniform on [0, bound), bound > 0, by rejection.
  std::uint64_t below(std::uint64_t bound);
  /// Uniform on [lo, hi].
  long uniform_int(long lo, long hi);
  /// Uniform on [-1, 1) with 53 random bits.
  double unit();

 private:
  std::mt19937_64 engine_;
};

}  // namespace mixtensor
