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

#include <doctest.h>

#include <numeric>

#include "mixtensor/analysis.hpp"
#include "oracles.hpp"

using namespace mixtensor;
using testing::random_bit_split;
using testing::random_proper_subset;

namespace {

const BinaryOperator kProduct = BinaryOperator::product();

ModeSet odd_indices(std::size_t n) {
  ModeSet out;
  for (int i = 1; i <= static_cast<int>(n); i += 2) out.push_back(i);
  return out;
}

}  // namespace

TEST_CASE("measured ranks") {
  GridTensorBatch zeros{DenseTensor::zeros({2, 2, 2, 2}, ScalarKind::rational),
                        DenseTensor::zeros({2, 2, 2, 2}, ScalarKind::rational)};
  CHECK(measured_rank(zeros, {1, 3}) == std::vector<std::size_t>{0, 0});

  auto t8 = build_baseline_tree(8);
  auto one = tree_decompose(t8, random_weights(t8, 1, 3), random_discretizers(3, 1, 4), kProduct);
  CHECK(measured_rank(one, {2, 5, 6})[0] <= 1);

  auto out = tree_decompose(t8, random_weights(t8, 2, 5, WeightSampling::integers(kGenericWeightBound)),
                            Discretizers::identity(2), kProduct);
  CHECK(measured_rank(out, odd_indices(8)) == std::vector<std::size_t>{16, 16});
  CHECK(measured_rank(GridTensorBatch{to_f64(out[0])}, odd_indices(8), RankMode::numeric()) ==
        std::vector<std::size_t>{16});
}

TEST_CASE("theorem 1 trials on the exemplar") {
  auto report = verify_theorem1(build_baseline_tree(16), exemplar_index_set(16), 2, {3, 11, 1});
  CHECK(report.bounds.lower == 64);
  CHECK(report.bounds.upper == 64);
  CHECK(report.trials_at(64) == 3);
  CHECK(report.upper_ok());
  CHECK(report.witness_ok());
  CHECK(report.witness_ranks.front() == 64);
  CHECK(report.seeds[1] == derive_seed(11, 1));

  auto single = verify_theorem1(build_even_odd_swap_tree(16), {2, 7, 8}, 1, {4, 12, 1});
  CHECK(single.bounds.upper == 1);
  CHECK(single.bounds.lower == 1);
  for (std::size_t i = 0; i < 4; ++i) CHECK(single.trial_rank(i) <= 1);

  CHECK_THROWS(verify_theorem1(build_baseline_tree(8), {1}, 2, {1, 0, 1}, BinaryOperator::relu_sum()));
  CHECK_THROWS(verify_theorem1(build_baseline_tree(8), {}, 2, {1, 0, 1}));
}

TEST_CASE("trial reports do not depend on the thread count") {
  auto tree = build_bit_split_tree(8, {0, 2, 1});
  auto set = exemplar_index_set(8);
  auto serial = verify_theorem1(tree, set, 2, {8, 13, 1});
  auto threaded = verify_theorem1(tree, set, 2, {8, 13, 3});
  CHECK(serial.ranks == threaded.ranks);
  CHECK(serial.seeds == threaded.seeds);
}

TEST_CASE("upper bound is never exceeded") {
  Rng rng(51);
  for (int trial = 0; trial < 100; ++trial) {
    auto tree = trial % 2 ? random_bit_split(8, rng) : testing::random_mode_tree(8, rng);
    auto set = random_proper_subset(8, rng);
    auto report = verify_theorem1(tree, set, 2, {1, rng.next(), 1});
    CHECK(report.upper_ok());
  }
}

TEST_CASE("explicit construction meets the lower bound") {
  Rng rng(52);
  for (int trial = 0; trial < 20; ++trial) {
    auto tree = random_bit_split(8, rng);
    auto set = random_proper_subset(8, rng);
    const std::size_t r = 2 + trial % 2;
    auto report = verify_theorem1(tree, set, r, {0, 0, 1});
    CHECK(report.witness_ok());
    CHECK(report.upper_ok());
  }
}

TEST_CASE("genericity") {
  auto t8 = build_baseline_tree(8);
  auto report = genericity_check(t8, odd_indices(8), 2, {10, 21, 1}, true);
  CHECK(report.modal_rank == 16);
  CHECK(report.fraction_at_modal == 1.0);
  CHECK(report.trial_ranks.size() == 11);
  CHECK(report.trial_ranks.front() <= report.modal_rank);

  // A zero weight anywhere zeroes an r = 1 output, so 0 can show up too.
  auto ones = genericity_check(t8, {1, 2, 7}, 1, {6, 22, 1});
  CHECK(ones.modal_rank == 1);
  CHECK(ones.counts.rbegin()->first == 1);
  auto nonzero = genericity_check(t8, {1, 2, 7}, 1, {6, 22, 1, WeightSampling::integers(3)});
  for (auto rank : nonzero.trial_ranks) CHECK(rank <= 1);

  TrialOptions narrow{2, 0, 1, WeightSampling::integers(2)};
  CHECK_THROWS(genericity_check(t8, {1}, 2, narrow));

  auto floats = genericity_check(t8, odd_indices(8), 2, {3, 23, 1, WeightSampling::unit_float()});
  CHECK(floats.modal_rank == 16);
}

TEST_CASE("sums of two trees stay below the summed bounds") {
  Rng rng(53);
  for (int trial = 0; trial < 10; ++trial) {
    auto t = random_bit_split(8, rng), tbar = random_bit_split(8, rng);
    auto set = random_proper_subset(8, rng);
    MixSpec spec(t, tbar, {});
    auto sampling = trial % 2 ? WeightSampling::unit_float() : WeightSampling::integers();
    auto wt = random_weights(t, 2, rng.next(), sampling), wb = random_weights(tbar, 2, rng.next(), sampling);
    auto out = mixed_decompose(spec, wt, wb, Discretizers::identity(2, sampling.kind()), kProduct);
    auto mode = sampling.kind() == ScalarKind::rational ? RankMode::exact() : RankMode::numeric(1e-9);
    auto bound = theorem1_bounds(t, set, 2).upper + theorem1_bounds(tbar, set, 2).upper;
    for (auto rank : measured_rank(out, set, mode)) CHECK(BigInt(static_cast<unsigned long>(rank)) <= bound);
  }
}

TEST_CASE("claim 1 checks") {
  ModeSet q1{1, 2, 3, 4}, q2{5, 6, 7, 8}, q3{9, 10, 11, 12}, q4{13, 14, 15, 16};
  MixSpec spec(build_baseline_tree(16), build_even_odd_swap_tree(16), {q1, q2, q3, q4});
  auto pure = build_hybrid(spec, std::vector<TreeTag>(5, TreeTag::t));
  auto result = verify_claim1(spec, pure, 2, {1, 31, 1}, kProduct);
  CHECK(result.pass());
  CHECK(result.trials == 1);
  CHECK(result.operator_covered);

  auto mixed = build_hybrid(spec, {TreeTag::t, TreeTag::tbar, TreeTag::tbar, TreeTag::t, TreeTag::tbar});
  CHECK(verify_claim1(spec, mixed, 2, {2, 32, 1}, BinaryOperator::relu_sum()).pass());

  // With g(0, 0) != 0 the zero slots stop being inert.
  auto shifted = BinaryOperator::custom(
      "a*b+1", [](const Rational& a, const Rational& b) { return Rational(a * b + 1); },
      [](double a, double b) { return a * b + 1; });
  MixSpec small(build_baseline_tree(8), build_bit_split_tree(8, {2, 0, 1}), {{1, 2, 3, 4}});
  auto h = enumerate_hybrids(small).hybrids[1];
  auto failed = verify_claim1(small, h, 2, {3, 33, 1}, shifted);
  CHECK_FALSE(failed.operator_covered);
  REQUIRE_FALSE(failed.pass());
  CHECK(failed.mismatch->trial == 0);
  CHECK(failed.mismatch->index.size() == 8);
  CHECK(failed.mismatch->expected != failed.mismatch->actual);
}

TEST_CASE("exemplar index set") {
  CHECK(exemplar_index_set(16) == ModeSet{1, 3, 5, 7, 9, 10, 13, 14});
  CHECK(exemplar_index_set(8) == ModeSet{1, 3, 5, 6});
  for (std::size_t n : {8u, 16u, 32u}) CHECK(exemplar_index_set(n).size() == n / 2);
  CHECK_THROWS(exemplar_index_set(12));
  CHECK_THROWS(exemplar_index_set(0));
}

TEST_CASE("separation construction") {
  CHECK(separation_index_set(16, 2) == exemplar_index_set(16));
  CHECK(separation_index_set(64, 2) == exemplar_index_set(64));
  CHECK(separation_index_set(16, 1) == odd_indices(16));
  CHECK_THROWS(separation_index_set(16, 4));
  CHECK_THROWS(separation_index_set(64, 4));
  CHECK_THROWS(separation_spec(16, 3));
  CHECK_THROWS(separation_spec(16, 0));

  for (auto [n, k] : std::vector<std::pair<std::size_t, std::size_t>>{{16, 2}, {64, 2}, {64, 3}, {256, 4}, {256, 2}}) {
    auto spec = separation_spec(n, k);
    const std::size_t levels = log2_exact(n);
    CHECK(spec.mixture_nodes().size() == std::size_t{1} << (levels - k));
    auto set = separation_index_set(n, k);
    CHECK(set.size() == n / 2);
    auto hybrid = separating_hybrid(spec);
    // Closed forms: each tree tiles I into n/4 + n/2^(k+1) pieces, the hybrid into singletons.
    const std::size_t tree_exp = n / 4 + (n >> (k + 1));
    CHECK(theorem1_bounds(spec.tree_t(), set, 2).upper_exponent == tree_exp);
    CHECK(theorem1_bounds(spec.tree_tbar(), set, 2).upper_exponent == tree_exp);
    CHECK(theorem1_bounds(spec.tree_t(), set, 2).lower_exponent == tree_exp);
    CHECK(theorem1_bounds(hybrid.tree, set, 2).lower_exponent == n / 2);
    CHECK(theorem1_bounds(hybrid.tree, set, 2).upper_exponent == n / 2);
  }
}

TEST_CASE("separation report at desk scale") {
  auto report = separation_report(2, 16, 4, {2, 41, 1});
  CHECK(report.measured);
  CHECK(report.r_mix_rank == 256);
  CHECK(report.bounds_t.upper == 64);
  CHECK(report.bounds_tbar.upper == 64);
  CHECK(report.tree_exponent == 6);
  CHECK(report.minimal_r_prime == 3);
  CHECK(report.summation_bound == 128);
  REQUIRE(report.summation_rank.has_value());
  CHECK(*report.summation_rank <= 128);
  CHECK(report.mixed_realized_rank == 256);
  CHECK(report.corollary_exponent == doctest::Approx(4.0 / 3.0));
  CHECK(report.corollary_bound == doctest::Approx(2.5198).epsilon(1e-4));
  CHECK(report.separates());
  CHECK_FALSE(report.degenerate);
  CHECK(report.hybrid_choices ==
        std::vector<TreeTag>{TreeTag::t, TreeTag::t, TreeTag::tbar, TreeTag::tbar, TreeTag::tbar});
}

TEST_CASE("separation report beyond desk scale") {
  auto report = separation_report(2, 64, 256, {1, 0, 1});
  CHECK_FALSE(report.measured);
  CHECK(report.r_mix_rank == power(128, 32));
  CHECK(report.tree_exponent == 24);
  CHECK(report.minimal_r_prime == 646);  // ceil(128^(4/3)) = 645.08.. rounded up
  auto deg = separation_report(1, 4, 2, {2, 0, 1});
  CHECK(deg.degenerate);
  CHECK(deg.corollary_exponent == 1.0);
  CHECK_FALSE(deg.separates());
  CHECK_THROWS(separation_report(2, 16, 3, {}));
  CHECK_THROWS(separation_report(4, 64, 4, {}));
}
