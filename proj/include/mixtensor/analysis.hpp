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
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mixtensor/hybrid.hpp"
#include "mixtensor/rank.hpp"

namespace mixtensor {

/// Rank of [A^y]_I for every tensor of the batch.
std::vector<std::size_t> measured_rank(const GridTensorBatch& batch, const ModeSet& index_set,
                                       RankMode mode = RankMode::exact());

struct RankTrialReport {
  std::string subject;
  ModeSet index_set;
  std::size_t r = 0;
  BoundsReport bounds;
  std::vector<std::uint64_t> seeds;
  /// ranks[trial][y].
  std::vector<std::vector<std::size_t>> ranks;
  /// Ranks of the explicit lower-bound construction.
  std::vector<std::size_t> witness_ranks;
  bool witness_degenerate = false;

  /// Smallest rank over the outputs of one trial.
  std::size_t trial_rank(std::size_t trial) const;
  std::size_t trials_at(std::size_t rank) const;
  /// No output of any run, witness included, exceeds the upper bound.
  bool upper_ok() const;
  /// The witness's first output reaches the lower bound.
  bool witness_ok() const;
};

/// Integer range for generic-rank trials. On [-5, 5] singular 2x2 weight
/// blocks and zero coefficients are common enough that most n = 16 draws
/// fall below the generic rank; on [-100, 100] they are rare.
inline constexpr long kGenericWeightBound = 100;

struct TrialOptions {
  std::size_t trials = 10;
  std::uint64_t seed = 0;
  std::size_t threads = 1;
  WeightSampling sampling = WeightSampling::integers(kGenericWeightBound);
};

/// Random-weight tree decompositions (product g, identity discretizers) plus
/// one lower-bound witness run, all matricized by index_set. Trial i draws its
/// weights from derive_seed(seed, i).
RankTrialReport verify_theorem1(const ModeTree& tree, const ModeSet& index_set, std::size_t r,
                                const TrialOptions& options, const BinaryOperator& g = BinaryOperator::product(),
                                std::string subject = "tree");

struct Claim1Mismatch {
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  std::size_t output = 0;
  std::vector<std::size_t> index;
  std::string expected;
  std::string actual;
};

struct Claim1Result {
  std::size_t trials = 0;
  /// False for operators other than product and relu-sum: equality may still
  /// hold, but nothing here argues that it must.
  bool operator_covered = true;
  std::optional<Claim1Mismatch> mismatch;

  bool pass() const noexcept { return !mismatch; }
};

/// Random hybrid weights of size r_h and discretizers (M = r_h) per trial,
/// pushed through hybrid_to_mixed_weights; the first r_h mixed outputs must
/// equal the hybrid's tree decomposition entry for entry.
Claim1Result verify_claim1(const MixSpec& spec, const HybridTree& hybrid, std::size_t r_h,
                           const TrialOptions& options, const BinaryOperator& g);

struct GenericityReport {
  /// Rank value -> number of trials at it.
  std::map<std::size_t, std::size_t> counts;
  std::vector<std::size_t> trial_ranks;
  /// Largest observed rank.
  std::size_t modal_rank = 0;
  double fraction_at_modal = 0.0;
};

/// `decompose(trial_seed)` produces one batch per trial; a trial's rank is the
/// smallest rank over its outputs.
GenericityReport genericity_check(const std::function<GridTensorBatch(std::uint64_t)>& decompose,
                                  const ModeSet& index_set, const TrialOptions& options);

/// Convenience form over a tree with product g and identity discretizers. With
/// `include_witness` the lower-bound construction is trial 0.
GenericityReport genericity_check(const ModeTree& tree, const ModeSet& index_set, std::size_t r,
                                  const TrialOptions& options, bool include_witness = false);

/// {2k-1 : k in [n/4]} with {n/2 + 4k - k' : k in [n/8], k' in {2, 3}}.
ModeSet exemplar_index_set(std::size_t n);

/// Odd indices in the lower half; in the upper half, the indices whose bit
/// k-1 (of i-1) is clear. Equals exemplar_index_set(n) for k = 2.
ModeSet separation_index_set(std::size_t n, std::size_t k);

/// Baseline tree, k-group swap tree, and their shared depth-(L-k) nodes as
/// mixture nodes. Requires k | L and k < L.
MixSpec separation_spec(std::size_t n, std::size_t k);

/// Segments of the first half of the mixture nodes from T, the rest and the
/// root segment from Tbar.
HybridTree separating_hybrid(const MixSpec& spec);

struct SeparationReport {
  std::size_t k = 0;
  std::size_t n = 0;
  std::size_t r_mix = 0;
  std::size_t r_h = 0;
  ModeSet index_set;
  std::vector<TreeTag> hybrid_choices;
  BoundsReport bounds_t;
  BoundsReport bounds_tbar;
  BoundsReport bounds_hybrid;
  /// Exponent of the tighter of the two tree upper bounds.
  std::size_t tree_exponent = 0;
  /// Rank the mixed decomposition reaches: measured on the hybrid when the
  /// grid fits the budget, the hybrid's lower bound otherwise.
  BigInt r_mix_rank;
  bool measured = false;
  std::vector<std::size_t> hybrid_trial_ranks;
  /// Rank of the mixed decomposition itself under the hybrid-embedding weights.
  std::optional<std::size_t> mixed_realized_rank;
  /// Sum of the two tree upper bounds, and a measured sum of two tree
  /// decompositions (no mixture nodes) at r_h.
  BigInt summation_bound;
  std::optional<std::size_t> summation_rank;
  std::size_t minimal_r_prime = 0;
  double corollary_exponent = 0.0;
  double corollary_bound = 0.0;
  /// k = 1: both trees coincide and the exponent is 1.
  bool degenerate = false;

  /// The measured mixed rank beats both single trees at size r_h.
  bool separates() const;
};

struct SeparationOptions {
  std::size_t trials = 3;
  std::uint64_t seed = 0;
  std::size_t threads = 1;
  /// Skip the measurements when M^N * r exceeds this many entries.
  std::size_t budget = std::size_t{1} << 22;
};

SeparationReport separation_report(std::size_t k, std::size_t n, std::size_t r_mix, const SeparationOptions& options);

}  // namespace mixtensor
