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

#include "mixtensor/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "mixtensor/parallel.hpp"
#include "mixtensor/random.hpp"

namespace mixtensor {

std::vector<std::size_t> measured_rank(const GridTensorBatch& batch, const ModeSet& index_set, RankMode mode) {
  std::vector<std::size_t> out;
  out.reserve(batch.size());
  for (const auto& t : batch) out.push_back(matrix_rank(matricize(t, index_set), mode));
  return out;
}

std::size_t RankTrialReport::trial_rank(std::size_t trial) const {
  const auto& r = ranks.at(trial);
  return r.empty() ? 0 : *std::min_element(r.begin(), r.end());
}

std::size_t RankTrialReport::trials_at(std::size_t rank) const {
  std::size_t count = 0;
  for (std::size_t i = 0; i < ranks.size(); ++i) count += trial_rank(i) == rank;
  return count;
}

bool RankTrialReport::upper_ok() const {
  auto within = [&](std::size_t rank) { return BigInt(static_cast<unsigned long>(rank)) <= bounds.upper; };
  for (const auto& trial : ranks) {
    if (!std::all_of(trial.begin(), trial.end(), within)) return false;
  }
  return std::all_of(witness_ranks.begin(), witness_ranks.end(), within);
}

bool RankTrialReport::witness_ok() const {
  return !witness_ranks.empty() && BigInt(static_cast<unsigned long>(witness_ranks.front())) >= bounds.lower;
}

namespace {

RankMode rank_mode_for(ScalarKind kind) {
  return kind == ScalarKind::rational ? RankMode::exact() : RankMode::numeric(1e-9);
}

void require_product(const BinaryOperator& g) {
  if (g.kind() != BinaryOperator::Kind::product) {
    throw std::invalid_argument("rank bounds hold for the product operator only, got " + g.name());
  }
}

std::size_t grid_entries(std::size_t m, std::size_t n, std::size_t r) {
  std::size_t entries = r;
  for (std::size_t i = 0; i < n; ++i) {
    if (entries > std::numeric_limits<std::size_t>::max() / m) return std::numeric_limits<std::size_t>::max();
    entries *= m;
  }
  return entries;
}

}  // namespace

RankTrialReport verify_theorem1(const ModeTree& tree, const ModeSet& index_set, std::size_t r,
                                const TrialOptions& options, const BinaryOperator& g, std::string subject) {
  require_product(g);
  check_proper_index_set(index_set, tree.n());
  RankTrialReport report;
  report.subject = std::move(subject);
  report.index_set = index_set;
  report.r = r;
  report.bounds = theorem1_bounds(tree, index_set, r);
  report.seeds.resize(options.trials);
  report.ranks.resize(options.trials);

  const ScalarKind kind = options.sampling.kind();
  const auto disc = Discretizers::identity(r, kind);
  parallel_for(options.trials, options.threads, [&](std::size_t i) {
    report.seeds[i] = derive_seed(options.seed, i);
    auto weights = random_weights(tree, r, report.seeds[i], options.sampling);
    report.ranks[i] = measured_rank(tree_decompose(tree, weights, disc, g), index_set, rank_mode_for(kind));
  });

  auto witness = lower_bound_weights(tree, index_set, r);
  report.witness_degenerate = witness.degenerate;
  report.witness_ranks =
      measured_rank(tree_decompose(tree, witness.weights, Discretizers::identity(r), g), index_set);
  return report;
}

Claim1Result verify_claim1(const MixSpec& spec, const HybridTree& hybrid, std::size_t r_h,
                           const TrialOptions& options, const BinaryOperator& g) {
  if (r_h == 0) throw std::invalid_argument("hybrid size constant must be positive");
  Claim1Result result;
  result.operator_covered = g.is_builtin();
  for (std::size_t trial = 0; trial < options.trials && !result.mismatch; ++trial) {
    const std::uint64_t seed = derive_seed(options.seed, trial);
    auto weights = random_weights(hybrid.tree, r_h, derive_seed(seed, 0), options.sampling);
    auto disc = random_discretizers(2, r_h, derive_seed(seed, 1), options.sampling);
    auto [wt, wb] = hybrid_to_mixed_weights(spec, hybrid, weights);
    auto expected = tree_decompose(hybrid.tree, weights, disc, g);
    auto actual = mixed_decompose(spec, wt, wb, disc.padded(2 * r_h), g);
    ++result.trials;
    for (std::size_t y = 0; y < r_h && !result.mismatch; ++y) {
      if (expected[y] == actual[y]) continue;
      for (std::size_t f = 0; f < expected[y].size(); ++f) {
        if (expected[y].flat(f) == actual[y].flat(f)) continue;
        result.mismatch = Claim1Mismatch{trial, seed, y, unflatten_index(expected[y].dims(), f),
                                         expected[y].flat(f).to_string(), actual[y].flat(f).to_string()};
        break;
      }
      if (!result.mismatch) throw InternalError("tensors differ but no entry does");
    }
  }
  return result;
}

GenericityReport genericity_check(const std::function<GridTensorBatch(std::uint64_t)>& decompose,
                                  const ModeSet& index_set, const TrialOptions& options) {
  GenericityReport report;
  report.trial_ranks.resize(options.trials);
  parallel_for(options.trials, options.threads, [&](std::size_t i) {
    auto batch = decompose(derive_seed(options.seed, i));
    auto ranks = measured_rank(batch, index_set, rank_mode_for(batch.empty() ? ScalarKind::rational : batch[0].kind()));
    report.trial_ranks[i] = ranks.empty() ? 0 : *std::min_element(ranks.begin(), ranks.end());
  });
  for (auto rank : report.trial_ranks) ++report.counts[rank];
  if (!report.counts.empty()) {
    report.modal_rank = report.counts.rbegin()->first;
    report.fraction_at_modal =
        static_cast<double>(report.counts.rbegin()->second) / static_cast<double>(report.trial_ranks.size());
  }
  return report;
}

GenericityReport genericity_check(const ModeTree& tree, const ModeSet& index_set, std::size_t r,
                                  const TrialOptions& options, bool include_witness) {
  check_proper_index_set(index_set, tree.n());
  if (options.sampling.distribution == WeightSampling::Distribution::integer_uniform && options.sampling.bound < 3) {
    throw std::invalid_argument("genericity sampling needs integer weights in [-B, B] with B >= 3");
  }
  const auto g = BinaryOperator::product();
  const auto disc = Discretizers::identity(r, options.sampling.kind());
  GenericityReport generic = genericity_check(
      [&](std::uint64_t seed) { return tree_decompose(tree, random_weights(tree, r, seed, options.sampling), disc, g); },
      index_set, options);
  if (!include_witness) return generic;

  auto witness = lower_bound_weights(tree, index_set, r);
  auto ranks = measured_rank(tree_decompose(tree, witness.weights, Discretizers::identity(r), g), index_set);
  std::vector<std::size_t> all{ranks.front()};
  all.insert(all.end(), generic.trial_ranks.begin(), generic.trial_ranks.end());
  GenericityReport report;
  report.trial_ranks = std::move(all);
  for (auto rank : report.trial_ranks) ++report.counts[rank];
  report.modal_rank = report.counts.rbegin()->first;
  report.fraction_at_modal =
      static_cast<double>(report.counts.rbegin()->second) / static_cast<double>(report.trial_ranks.size());
  return report;
}

ModeSet exemplar_index_set(std::size_t n) {
  if (n == 0 || n % 8 != 0) throw std::invalid_argument("exemplar index set needs n divisible by 8");
  ModeSet out;
  const int half = static_cast<int>(n / 2);
  for (int k = 1; k <= static_cast<int>(n / 4); ++k) out.push_back(2 * k - 1);
  for (int k = 1; k <= static_cast<int>(n / 8); ++k) {
    for (int kp : {2, 3}) out.push_back(half + 4 * k - kp);
  }
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

void check_separation_args(std::size_t n, std::size_t k) {
  const std::size_t levels = log2_exact(n);
  if (k == 0 || k >= levels || levels % k != 0) {
    throw std::invalid_argument("separation needs 1 <= k < log2(n) with k dividing log2(n); got k = " +
                                std::to_string(k) + ", n = " + std::to_string(n));
  }
}

}  // namespace

ModeSet separation_index_set(std::size_t n, std::size_t k) {
  check_separation_args(n, k);
  ModeSet out;
  for (std::size_t i = 1; i <= n; ++i) {
    const std::size_t bit = i <= n / 2 ? 0 : k - 1;
    if (((i - 1) >> bit & 1) == 0) out.push_back(static_cast<int>(i));
  }
  return out;
}

MixSpec separation_spec(std::size_t n, std::size_t k) {
  check_separation_args(n, k);
  auto t = build_baseline_tree(n);
  auto tbar = build_k_group_swap_tree(n, k);
  const std::size_t depth = log2_exact(n) - k;
  std::vector<ModeSet> mix;
  for (std::size_t id = 0; id < t.nodes().size(); ++id) {
    if (t.depth(id) == depth && tbar.contains(t.label(id))) mix.push_back(t.label(id));
  }
  return MixSpec(std::move(t), std::move(tbar), std::move(mix));
}

HybridTree separating_hybrid(const MixSpec& spec) {
  const std::size_t m = spec.mixture_nodes().size();
  std::vector<TreeTag> choices(m + 1, TreeTag::tbar);
  // Canonical order lists disjoint mixture nodes by smallest element.
  for (std::size_t i = 0; i < m / 2; ++i) choices[i] = TreeTag::t;
  return build_hybrid(spec, choices);
}

bool SeparationReport::separates() const {
  return r_mix_rank > bounds_t.upper && r_mix_rank > bounds_tbar.upper && summation_bound < r_mix_rank;
}

SeparationReport separation_report(std::size_t k, std::size_t n, std::size_t r_mix, const SeparationOptions& options) {
  if (r_mix < 2 || r_mix % 2 != 0) throw std::invalid_argument("r_mix must be even and at least 2");
  const MixSpec spec = separation_spec(n, k);
  SeparationReport report;
  report.k = k;
  report.n = n;
  report.r_mix = r_mix;
  report.r_h = r_mix / 2;
  report.index_set = separation_index_set(n, k);
  const HybridTree hybrid = separating_hybrid(spec);
  report.hybrid_choices = hybrid.choices;
  const std::size_t rh = report.r_h;
  report.bounds_t = theorem1_bounds(spec.tree_t(), report.index_set, rh);
  report.bounds_tbar = theorem1_bounds(spec.tree_tbar(), report.index_set, rh);
  report.bounds_hybrid = theorem1_bounds(hybrid.tree, report.index_set, rh);
  report.tree_exponent = std::min(report.bounds_t.upper_exponent, report.bounds_tbar.upper_exponent);
  report.summation_bound = report.bounds_t.upper + report.bounds_tbar.upper;
  report.degenerate = k == 1;
  report.corollary_exponent = 2.0 / (1.0 + std::pow(2.0, 1.0 - static_cast<double>(k)));
  report.corollary_bound = std::pow(static_cast<double>(rh), report.corollary_exponent);

  report.r_mix_rank = report.bounds_hybrid.lower;
  if (grid_entries(rh, n, r_mix) <= options.budget) {
    report.measured = true;
    auto trials = verify_theorem1(hybrid.tree, report.index_set, rh,
                                  {options.trials, derive_seed(options.seed, 0), options.threads}, BinaryOperator::product(),
                                  "hybrid");
    std::size_t best = 0;
    for (std::size_t i = 0; i < trials.ranks.size(); ++i) {
      report.hybrid_trial_ranks.push_back(trials.trial_rank(i));
      best = std::max(best, trials.trial_rank(i));
    }
    report.r_mix_rank = BigInt(static_cast<unsigned long>(best));

    const auto g = BinaryOperator::product();
    const auto disc = Discretizers::identity(rh);
    const auto sampling = WeightSampling::integers(kGenericWeightBound);
    auto hw = random_weights(hybrid.tree, rh, derive_seed(options.seed, 1), sampling);
    auto [wt, wb] = hybrid_to_mixed_weights(spec, hybrid, hw);
    auto mixed = mixed_decompose(spec, wt, wb, disc.padded(r_mix), g);
    report.mixed_realized_rank = matrix_rank(matricize(mixed.front(), report.index_set));

    auto a = tree_decompose(spec.tree_t(), random_weights(spec.tree_t(), rh, derive_seed(options.seed, 2), sampling), disc, g);
    auto b =
        tree_decompose(spec.tree_tbar(), random_weights(spec.tree_tbar(), rh, derive_seed(options.seed, 3), sampling), disc, g);
    report.summation_rank = matrix_rank(matricize(add(a.front(), b.front()), report.index_set));
  }

  std::size_t r_prime = 1;
  while (power(r_prime, report.tree_exponent) < report.r_mix_rank) ++r_prime;
  report.minimal_r_prime = r_prime;
  return report;
}

}  // namespace mixtensor
