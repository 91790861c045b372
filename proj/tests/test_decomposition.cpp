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

#include "mixtensor/hybrid.hpp"
#include "mixtensor/rank.hpp"
#include "oracles.hpp"

using namespace mixtensor;
using testing::random_mode_tree;

namespace {

const BinaryOperator kProduct = BinaryOperator::product();
const BinaryOperator kReluSum = BinaryOperator::relu_sum();

ModeSet range(int lo, int hi) {
  ModeSet out;
  for (int i = lo; i <= hi; ++i) out.push_back(i);
  return out;
}

MixSpec quarters_spec(std::size_t n = 16) {
  std::vector<ModeSet> mix;
  const int q = static_cast<int>(n / 4);
  for (int k = 0; k < 4; ++k) mix.push_back(range(k * q + 1, (k + 1) * q));
  // For n = 8 the quarters are sibling pairs, which the even/odd swap lacks.
  auto tbar = n == 8 ? build_bit_split_tree(8, {1, 2, 0}) : build_even_odd_swap_tree(n);
  return MixSpec(build_baseline_tree(n), tbar, mix);
}

GridTensorBatch head(const GridTensorBatch& batch, std::size_t count) {
  return GridTensorBatch(batch.begin(), batch.begin() + static_cast<std::ptrdiff_t>(count));
}

GridTensorBatch sum(const GridTensorBatch& a, const GridTensorBatch& b) {
  GridTensorBatch out;
  for (std::size_t y = 0; y < a.size(); ++y) out.push_back(add(a[y], b[y]));
  return out;
}

bool all_zero(const GridTensorBatch& batch) {
  for (const auto& t : batch) {
    if (!t.is_zero()) return false;
  }
  return true;
}

WeightSet with_row(const WeightSet& w, const ModeSet& label, bool first, std::size_t gamma,
                   const std::vector<Rational>& row) {
  WeightSet out = w;
  NodeWeights nw = w.at(label);
  Matrix& m = first ? nw.first : nw.second;
  for (std::size_t a = 0; a < row.size(); ++a) m = m.with(gamma, a, row[a]);
  out.set(label, nw);
  return out;
}

}  // namespace

TEST_CASE("tree decomposition of a two-leaf tree") {
  auto tree = build_baseline_tree(2);
  WeightSet w(1);
  w.set({1, 2}, {Matrix::from_rows({{3}}), Matrix::from_rows({{1}})});
  Discretizers disc(Matrix::from_rows({{1}, {2}}));
  auto out = tree_decompose(tree, w, disc, kProduct);
  REQUIRE(out.size() == 1);
  CHECK(out[0] == DenseTensor({2, 2}, std::vector<Rational>{3, 6, 6, 12}));
}

TEST_CASE("zero weights give zero grid tensors") {
  Rng rng(31);
  for (const auto& g : {kProduct, kReluSum}) {
    auto tree = random_mode_tree(8, rng);
    auto out = tree_decompose(tree, WeightSet::zeros(tree, 3), random_discretizers(2, 3, 5), g);
    CHECK(out.size() == 3);
    CHECK(all_zero(out));
  }
}

TEST_CASE("tree decomposition input checks") {
  auto tree = build_baseline_tree(4);
  auto w = random_weights(tree, 2, 1);
  CHECK_THROWS(tree_decompose(tree, w, random_discretizers(2, 3, 1), kProduct));
  CHECK_THROWS(tree_decompose(build_even_odd_swap_tree(4), w, Discretizers::identity(2), kProduct));
  WeightSet missing(2);
  missing.set({1, 2}, w.at({1, 2}));
  CHECK_THROWS(tree_decompose(tree, missing, Discretizers::identity(2), kProduct));
}

TEST_CASE("baseline tree decomposition matches the level recursion") {
  for (std::size_t n : {4u, 8u}) {
    auto tree = build_baseline_tree(n);
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      auto w = random_weights(tree, 2, seed);
      auto disc = random_discretizers(3, 2, seed + 100);
      for (const auto& g : {kProduct, kReluSum}) {
        CHECK(tree_decompose(tree, w, disc, g) == testing::baseline_recursion(n, w, disc, g));
      }
    }
  }
}

TEST_CASE("fused kernel matches explicit products and alignment on random trees") {
  Rng rng(32);
  auto cube = BinaryOperator::custom(
      "a*a+b", [](const Rational& a, const Rational& b) { return Rational(a * a + b); },
      [](double a, double b) { return a * a + b; });
  for (int trial = 0; trial < 12; ++trial) {
    const std::size_t n = std::size_t{2} << rng.below(3);
    auto tree = random_mode_tree(n, rng);
    const std::size_t r = 1 + rng.below(3);
    auto w = random_weights(tree, r, rng.next());
    auto disc = random_discretizers(2 + rng.below(2), r, rng.next());
    for (const auto& g : {kProduct, kReluSum, cube}) {
      CHECK(tree_decompose(tree, w, disc, g) == testing::reference_tree_decompose(tree, w, disc, g));
    }
  }
}

TEST_CASE("float weights follow the same kernel") {
  auto tree = build_baseline_tree(4);
  auto w = random_weights(tree, 2, 4, WeightSampling::unit_float());
  auto disc = random_discretizers(2, 2, 5, WeightSampling::unit_float());
  auto out = tree_decompose(tree, w, disc, kProduct);
  CHECK(out[0].kind() == ScalarKind::f64);
  CHECK_THROWS_AS(tree_decompose(tree, w, Discretizers::identity(2), kProduct), KindMismatchError);
}

TEST_CASE("product decomposition is affine in each weight vector") {
  Rng rng(33);
  auto tree = build_baseline_tree(4);
  auto disc = random_discretizers(2, 2, 7);
  for (int trial = 0; trial < 10; ++trial) {
    auto w = random_weights(tree, 2, rng.next());
    auto labels = tree.interior_labels();
    const auto& label = labels[rng.below(labels.size())];
    const bool first = rng.below(2) == 0;
    const std::size_t gamma = rng.below(2);
    std::vector<Rational> base_row = {w.at(label).first.at(gamma, 0).rational(), 0};
    const Matrix& m = first ? w.at(label).first : w.at(label).second;
    base_row = {m.at(gamma, 0).rational(), m.at(gamma, 1).rational()};
    const Rational lambda(rng.uniform_int(-4, 4));
    std::vector<Rational> scaled{lambda * base_row[0], lambda * base_row[1]};
    auto at_zero = tree_decompose(tree, with_row(w, label, first, gamma, {0, 0}), disc, kProduct);
    auto at_one = tree_decompose(tree, w, disc, kProduct);
    auto at_lambda = tree_decompose(tree, with_row(w, label, first, gamma, scaled), disc, kProduct);
    for (std::size_t y = 0; y < 2; ++y) {
      auto delta = add(at_one[y], scale(at_zero[y], Rational(-1)));
      CHECK(at_lambda[y] == add(at_zero[y], scale(delta, lambda)));
    }
  }
}

TEST_CASE("mix spec validation") {
  auto t = build_baseline_tree(8);
  CHECK_THROWS(MixSpec(t, build_baseline_tree(4), {}));
  CHECK_THROWS(MixSpec(t, t, {range(1, 8)}));
  CHECK_THROWS(MixSpec(t, build_k_group_swap_tree(8, 3), {{1, 2}}));
  CHECK_THROWS(MixSpec(t, t, {{3}}));
  MixSpec spec(t, t, {{5, 6}, {1, 2}, {1, 2}});
  CHECK(spec.mixture_nodes() == std::vector<ModeSet>{{1, 2}, {5, 6}});
  CHECK(spec.is_mixture_node({5, 6}));
  CHECK_FALSE(spec.is_mixture_node({3, 4}));
}

TEST_CASE("segment schedule respects inclusion and covers every interior node") {
  auto spec = quarters_spec();
  for (auto order : {ScheduleOrder::canonical, ScheduleOrder::reversed}) {
    auto s = segment_schedule(spec, order);
    REQUIRE(s.steps.size() == 5);
    CHECK(s.steps.back() == range(1, 16));
    for (std::size_t i = 0; i < s.steps.size(); ++i) {
      for (std::size_t j = i + 1; j < s.steps.size(); ++j) CHECK_FALSE(is_subset(s.steps[j], s.steps[i]));
    }
    for (int side = 0; side < 2; ++side) {
      const auto& tree = side == 0 ? spec.tree_t() : spec.tree_tbar();
      const auto& segs = side == 0 ? s.segments_t : s.segments_tbar;
      std::vector<int> seen(tree.nodes().size(), 0);
      for (std::size_t i = 0; i < segs.size(); ++i) {
        CHECK(segs[i].back() == tree.id_of(s.steps[i]));
        for (auto id : segs[i]) ++seen[id];
      }
      for (std::size_t id = 0; id < tree.nodes().size(); ++id) CHECK(seen[id] == (tree.is_leaf(id) ? 0 : 1));
    }
  }
  auto canonical = segment_schedule(spec);
  CHECK(canonical.steps[0] == range(1, 4));
  CHECK(segment_schedule(spec, ScheduleOrder::reversed).steps[0] == range(13, 16));
}

TEST_CASE("mixed decomposition with no mixture nodes sums the two trees") {
  Rng rng(34);
  for (int trial = 0; trial < 6; ++trial) {
    const std::size_t n = std::size_t{2} << rng.below(3);
    MixSpec spec(random_mode_tree(n, rng), random_mode_tree(n, rng), {});
    auto wt = random_weights(spec.tree_t(), 2, rng.next());
    auto wb = random_weights(spec.tree_tbar(), 2, rng.next());
    auto disc = random_discretizers(2, 2, rng.next());
    for (const auto& g : {kProduct, kReluSum}) {
      auto expected = sum(tree_decompose(spec.tree_t(), wt, disc, g), tree_decompose(spec.tree_tbar(), wb, disc, g));
      CHECK(mixed_decompose(spec, wt, wb, disc, g) == expected);
    }
    auto zeros = WeightSet::zeros(spec.tree_tbar(), 2);
    CHECK(mixed_decompose(spec, wt, zeros, disc, kProduct) == tree_decompose(spec.tree_t(), wt, disc, kProduct));
  }
}

TEST_CASE("mixed decomposition rejects bad inputs") {
  auto spec = quarters_spec(8);
  auto w3 = random_weights(spec.tree_t(), 3, 1);
  auto w3b = random_weights(spec.tree_tbar(), 3, 2);
  CHECK_THROWS(mixed_decompose(spec, w3, w3b, Discretizers::identity(3), kProduct));
  auto w2 = random_weights(spec.tree_t(), 2, 1);
  CHECK_THROWS(mixed_decompose(spec, w2, w2, Discretizers::identity(2), kProduct));
  auto w4b = random_weights(spec.tree_tbar(), 4, 2);
  CHECK_THROWS(mixed_decompose(spec, random_weights(spec.tree_t(), 4, 1), w4b, Discretizers::identity(2), kProduct));
}

TEST_CASE("mixed decomposition does not depend on the linearization") {
  Rng rng(35);
  for (std::size_t n : {8u, 16u}) {
    auto spec = quarters_spec(n);
    for (int trial = 0; trial < 3; ++trial) {
      auto wt = random_weights(spec.tree_t(), 2, rng.next());
      auto wb = random_weights(spec.tree_tbar(), 2, rng.next());
      auto disc = random_discretizers(2, 2, rng.next());
      for (const auto& g : {kProduct, kReluSum}) {
        CHECK(mixed_decompose(spec, wt, wb, disc, g, ScheduleOrder::canonical) ==
              mixed_decompose(spec, wt, wb, disc, g, ScheduleOrder::reversed));
      }
    }
  }
  // Nested mixture nodes on random trees sharing a subtree.
  auto t = build_baseline_tree(8);
  MixSpec nested(t, t, {{1, 2}, {1, 2, 3, 4}, {5, 6}});
  auto wt = random_weights(t, 4, 8), wb = random_weights(t, 4, 9);
  auto disc = random_discretizers(2, 4, 10);
  CHECK(mixed_decompose(nested, wt, wb, disc, kReluSum, ScheduleOrder::canonical) ==
        mixed_decompose(nested, wt, wb, disc, kReluSum, ScheduleOrder::reversed));
}

TEST_CASE("hybrid enumeration") {
  auto t = build_baseline_tree(8);
  auto empty = enumerate_hybrids(MixSpec(t, build_bit_split_tree(8, {0, 1, 2}), {}));
  REQUIRE(empty.hybrids.size() == 2);
  CHECK(empty.sequences == 2);
  CHECK(empty.hybrids[0].tree == t);
  CHECK(empty.hybrids[1].tree == build_bit_split_tree(8, {0, 1, 2}));

  auto spec = quarters_spec();
  auto all = enumerate_hybrids(spec);
  CHECK(all.sequences == 32);
  // Independent dedupe by pairwise comparison of tree and tags.
  std::vector<HybridTree> distinct;
  for (std::uint32_t s = 0; s < 32; ++s) {
    std::vector<TreeTag> choices;
    for (int i = 0; i < 5; ++i) choices.push_back(s >> i & 1 ? TreeTag::tbar : TreeTag::t);
    auto h = build_hybrid(spec, choices);
    bool seen = false;
    for (const auto& d : distinct) seen = seen || (d.tree == h.tree && d.source == h.source);
    if (!seen) distinct.push_back(h);
  }
  CHECK(all.hybrids.size() == distinct.size());
  CHECK(all.hybrids.size() == 32);
  for (const auto& h : all.hybrids) CHECK_NOTHROW(validate_hybrid(spec, h));

  const auto& pure = all.hybrids.front();
  CHECK(pure.tree == spec.tree_t());
  for (const auto& [label, tag] : pure.source) CHECK(tag == TreeTag::t);
  CHECK(all.hybrids[31].tree == spec.tree_tbar());

  // Identical trees still give distinct hybrids: the source tags differ.
  MixSpec same(t, t, {{1, 2}, {5, 6, 7, 8}});
  auto collapsed = enumerate_hybrids(same);
  CHECK(collapsed.sequences == 8);
  CHECK(collapsed.hybrids.size() == 8);
  auto forged = all.hybrids[3];
  forged.source.begin()->second = forged.source.begin()->second == TreeTag::t ? TreeTag::tbar : TreeTag::t;
  CHECK_THROWS(validate_hybrid(spec, forged));
  CHECK(parse_tree_tag("Tbar") == TreeTag::tbar);
  CHECK_THROWS(parse_tree_tag("U"));
}

TEST_CASE("hybrid weights land in the documented slots") {
  auto spec = quarters_spec();
  // Root segment from T, first quarter from Tbar, the rest from T.
  auto h = build_hybrid(spec, {TreeTag::tbar, TreeTag::t, TreeTag::t, TreeTag::t, TreeTag::t});
  CHECK(h.source.at(range(1, 8)) == TreeTag::t);
  CHECK(h.source.at(range(1, 4)) == TreeTag::tbar);
  auto hw = random_weights(h.tree, 2, 3);
  hw = with_row(hw, range(1, 8), true, 0, {5, 7});
  auto [wt, wb] = hybrid_to_mixed_weights(spec, h, hw);
  CHECK(wt.r() == 4);
  auto row = wt.at(range(1, 8)).first.row<Rational>(2);
  CHECK(std::vector<Rational>(row.begin(), row.end()) == std::vector<Rational>{5, 7, 0, 0});
  // C_II = 5..8 comes from T as well: upper coordinates.
  auto second = wt.at(range(1, 8)).second.row<Rational>(2);
  CHECK(second[0] == 0);
  CHECK(second[2] == hw.at(range(1, 8)).second.at(0, 0).rational());
  // 1..4 hangs under a T parent, so its slots are swapped back to the low
  // half; its children share its tag, so coordinates stay upper.
  auto quarter = wb.at(range(1, 4)).first;
  CHECK(quarter.at(0, 2).rational() == hw.at(range(1, 4)).first.at(0, 0).rational());
  CHECK(quarter.at(0, 0).is_zero());
  CHECK(quarter.at(2, 2).is_zero());
  // Nodes outside the hybrid stay zero.
  CHECK(wb.at(range(9, 12)) == NodeWeights{Matrix::zeros(4, 4, ScalarKind::rational),
                                           Matrix::zeros(4, 4, ScalarKind::rational)});
  CHECK_THROWS(hybrid_to_mixed_weights(spec, h, random_weights(spec.tree_t(), 2, 1)));
}

TEST_CASE("mixed decomposition realizes hybrids") {
  auto check_spec = [](const MixSpec& spec, std::size_t stride, int seeds) {
    auto hybrids = enumerate_hybrids(spec).hybrids;
    for (std::size_t i = 0; i < hybrids.size(); i += stride) {
      const auto& h = hybrids[i];
      for (int seed = 0; seed < seeds; ++seed) {
        auto hw = random_weights(h.tree, 2, 1000 * i + seed);
        auto disc = random_discretizers(2, 2, 7 + seed);
        auto [wt, wb] = hybrid_to_mixed_weights(spec, h, hw);
        for (const auto& g : {kProduct, kReluSum}) {
          auto expected = tree_decompose(h.tree, hw, disc, g);
          auto mixed = mixed_decompose(spec, wt, wb, disc.padded(4), g);
          CHECK(head(mixed, 2) == expected);
        }
      }
    }
  };
  check_spec(quarters_spec(8), 1, 2);
  check_spec(quarters_spec(16), 7, 1);
  auto t = build_baseline_tree(8);
  check_spec(MixSpec(t, build_bit_split_tree(8, {2, 0, 1}), {{1, 2, 3, 4}}), 1, 2);
}

TEST_CASE("lower-bound witness weights") {
  auto rank_of = [](const ModeTree& tree, const ModeSet& set, std::size_t r) {
    auto witness = lower_bound_weights(tree, set, r);
    auto out = tree_decompose(tree, witness.weights, Discretizers::identity(r), kProduct);
    return matrix_rank(matricize(out[0], set));
  };
  CHECK(rank_of(build_baseline_tree(4), {1, 3}, 2) == 4);
  CHECK(rank_of(build_baseline_tree(8), {1, 3, 5, 7}, 2) >= 16);
  CHECK(rank_of(build_baseline_tree(8), {2, 3, 6}, 1) == 1);
  CHECK(rank_of(build_even_odd_swap_tree(16), {1, 3, 5, 7, 9, 10, 13, 14}, 2) >= 1);
  auto degenerate = lower_bound_weights(build_baseline_tree(8), range(1, 4), 2);
  CHECK(degenerate.degenerate);
  CHECK_FALSE(lower_bound_weights(build_baseline_tree(8), {1, 3}, 2).degenerate);
  CHECK_THROWS(lower_bound_weights(build_baseline_tree(8), {}, 2));
  CHECK_THROWS(lower_bound_weights(build_baseline_tree(8), {1}, 0));
}

TEST_CASE("random weights") {
  auto tree = build_baseline_tree(8);
  CHECK(random_weights(tree, 2, 9) == random_weights(tree, 2, 9));
  auto small = random_weights(tree, 3, 10, WeightSampling::integers(1));
  for (const auto& [label, w] : small.nodes()) {
    for (const auto* m : {&w.first, &w.second}) {
      for (const auto& x : m->values<Rational>()) CHECK(abs(x) <= 1);
    }
  }
  CHECK_NOTHROW(small.check_keys(tree));
  auto disc = Discretizers::identity(2);
  CHECK(tree_decompose(tree, random_weights(tree, 2, 11), disc, kProduct) !=
        tree_decompose(tree, random_weights(tree, 2, 12), disc, kProduct));
  auto f = random_weights(tree, 2, 13, WeightSampling::unit_float());
  for (const auto& [label, w] : f.nodes()) {
    for (double x : w.first.values<double>()) CHECK((x >= -1.0 && x < 1.0));
  }
  CHECK_THROWS(random_weights(tree, 2, 1, WeightSampling::integers(0)));
}
