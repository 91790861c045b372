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

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "mixtensor/random.hpp"
#include "mixtensor/serialization.hpp"

using namespace mixtensor;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

/// Fresh directory under the system temp dir, removed on destruction.
struct ScratchDir {
  fs::path path;
  explicit ScratchDir(const std::string& name) : path(fs::temp_directory_path() / ("mixtensor_" + name)) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~ScratchDir() { fs::remove_all(path); }
  std::string operator/(const std::string& file) const { return (path / file).string(); }
};

}  // namespace

TEST_CASE("index set literals accept ranges and the exemplar keyword") {
  CHECK(cli::parse_index_set("1-4,9,10", 16) == ModeSet{1, 2, 3, 4, 9, 10});
  CHECK(cli::parse_index_set("10,2", 16) == ModeSet{2, 10});
  CHECK(cli::parse_index_set("exemplar", 16) == ModeSet{1, 3, 5, 7, 9, 10, 13, 14});
  CHECK_THROWS_AS(cli::parse_index_set("3,3", 16), std::invalid_argument);
  CHECK_THROWS_AS(cli::parse_index_set("4-2", 16), std::invalid_argument);
  CHECK_THROWS_AS(cli::parse_index_set("1,,2", 16), std::invalid_argument);
  CHECK_THROWS_AS(cli::parse_index_set("x", 16), std::invalid_argument);
  CHECK_THROWS_AS(cli::parse_index_set("17", 16), std::invalid_argument);
  CHECK_THROWS_AS(cli::parse_index_set("0", 16), std::invalid_argument);
}

TEST_CASE("a built tree file feeds bounds and reproduces the exemplar ranks") {
  ScratchDir dir("tree_bounds");
  auto built = run({"tree", "build", "--kind", "baseline", "--n", "16", "--out", dir / "tree.json"});
  REQUIRE(built.code == cli::kExitOk);
  CHECK(built.out.find("dilations=1,2,4,8") != std::string::npos);
  CHECK(tree_from_json(read_json_file(dir / "tree.json")) == build_baseline_tree(16));

  auto bounds = run({"bounds", "--tree", dir / "tree.json", "--index-set", "exemplar", "--r", "2"});
  REQUIRE(bounds.code == cli::kExitOk);
  CHECK(bounds.out.find("lower=64 ") != std::string::npos);
  CHECK(bounds.out.find("upper=64 ") != std::string::npos);
}

TEST_CASE("tree build reports the swap dilation profiles") {
  auto even_odd = run({"tree", "build", "--kind", "even-odd", "--n", "16"});
  CHECK(even_odd.out.find("dilations=2,1,8,4") != std::string::npos);
  auto group = run({"tree", "build", "--kind", "k-group", "--n", "16", "--k", "4"});
  CHECK(group.code == cli::kExitOk);
  auto caterpillar_free = run({"tree", "build", "--kind", "bit-split", "--n", "8", "--bit-order", "2,0,1"});
  CHECK(caterpillar_free.code == cli::kExitOk);
  CHECK(run({"tree", "build", "--kind", "k-group", "--n", "16"}).code == cli::kExitUsage);
  CHECK(run({"tree", "build", "--kind", "bit-split", "--n", "8", "--bit-order", "0,0,1"}).code == cli::kExitUsage);
}

TEST_CASE("oracle agrees with brute force on the small baseline network") {
  auto r = run({"oracle", "--n", "8", "--r", "2", "--g", "product", "--seed", "7"});
  CHECK(r.code == cli::kExitOk);
  CHECK(r.out.find("# oracle seed=7") == 0);
  CHECK(r.out.find("2 tensors x 256 entries") != std::string::npos);
  CHECK(run({"oracle", "--n", "8", "--r", "2", "--g", "relu-sum", "--seed", "7"}).code == cli::kExitOk);
}

TEST_CASE("usage errors exit with code 2") {
  CHECK(run({}).code == cli::kExitUsage);
  CHECK(run({"frobnicate"}).code == cli::kExitUsage);
  CHECK(run({"oracle", "--n", "8"}).code == cli::kExitUsage);  // no seed
  CHECK(run({"bounds", "--n", "12", "--index-set", "1"}).code == cli::kExitUsage);
  CHECK(run({"bounds", "--n", "16"}).code == cli::kExitUsage);
  CHECK(run({"oracle", "--n", "8", "--seed", "1", "--g", "max"}).code == cli::kExitUsage);
  CHECK(run({"grid", "--n", "4", "--seed", "1", "--scalar", "complex"}).code == cli::kExitUsage);
  CHECK(run({"verify", "theorem1", "--n", "8", "--index-set", "1", "--seed", "1", "--g", "relu-sum"}).code ==
        cli::kExitUsage);
  CHECK(run({"--help"}).code == cli::kExitOk);
}

TEST_CASE("theorem1 rejects empty and full index sets") {
  auto empty = run({"verify", "theorem1", "--n", "8", "--index-set", "", "--seed", "1"});
  CHECK(empty.code == cli::kExitUsage);
  CHECK_FALSE(empty.err.empty());
  auto full = run({"verify", "theorem1", "--n", "8", "--index-set", "1-8", "--seed", "1"});
  CHECK(full.code == cli::kExitUsage);
  CHECK_FALSE(full.err.empty());
}

TEST_CASE("theorem1 writes a seeded artifact and a per-trial CSV") {
  ScratchDir dir("theorem1");
  auto r = run({"verify", "theorem1", "--n", "8", "--kind", "even-odd", "--index-set", "exemplar", "--r", "2",
                "--seed", "11", "--trials", "4", "--out", dir / "t1.json", "--csv", dir / "t1.csv"});
  // n=8 has an odd number of levels, so even/odd swapping is undefined.
  CHECK(r.code == cli::kExitUsage);

  r = run({"verify", "theorem1", "--n", "8", "--index-set", "exemplar", "--r", "2", "--seed", "11", "--trials", "4",
           "--out", dir / "t1.json", "--csv", dir / "t1.csv"});
  REQUIRE(r.code == cli::kExitOk);
  CHECK(r.out.find("# verify theorem1 seed=11") == 0);
  Json j = read_json_file(dir / "t1.json");
  CHECK(j["command"] == "verify theorem1");
  CHECK(j["seed"] == 11);

  std::istringstream csv(slurp(dir / "t1.csv"));
  std::string line;
  std::getline(csv, line);
  CHECK(line == "# seed=11");
  std::getline(csv, line);
  CHECK(line == "trial,seed,rank,within_upper,at_lower");
  std::size_t rows = 0;
  while (std::getline(csv, line)) {
    ++rows;
    CHECK(line.find(std::to_string(derive_seed(11, rows - 1))) != std::string::npos);
  }
  CHECK(rows == 4);
}

TEST_CASE("artifacts are byte-identical across runs and thread counts") {
  ScratchDir dir("determinism");
  auto once = [&](const std::string& file, const std::string& threads) {
    return run({"verify", "generic", "--n", "8", "--index-set", "1,2,5", "--r", "2", "--seed", "3", "--trials", "6",
                "--threads", threads, "--out", dir / file});
  };
  auto a = once("a.json", "1");
  auto b = once("b.json", "1");
  auto c = once("c.json", "3");
  REQUIRE(a.code == cli::kExitOk);
  CHECK(a.out == b.out);
  CHECK(a.out == c.out);
  CHECK(slurp(dir / "a.json") == slurp(dir / "b.json"));
  CHECK(slurp(dir / "a.json") == slurp(dir / "c.json"));

  auto g1 = run({"grid", "--n", "4", "--r", "2", "--m", "3", "--seed", "5", "--out", dir / "g1.json"});
  auto g2 = run({"grid", "--n", "4", "--r", "2", "--m", "3", "--seed", "5", "--out", dir / "g2.json"});
  auto g3 = run({"grid", "--n", "4", "--r", "2", "--m", "3", "--seed", "6", "--out", dir / "g3.json"});
  REQUIRE(g1.code == cli::kExitOk);
  CHECK(slurp(dir / "g1.json") == slurp(dir / "g2.json"));
  CHECK(slurp(dir / "g1.json") != slurp(dir / "g3.json"));
}

TEST_CASE("rank reads a grid artifact written by grid") {
  ScratchDir dir("rank");
  REQUIRE(run({"grid", "--n", "8", "--r", "2", "--seed", "9", "--bound", "100", "--out", dir / "grid.json"}).code ==
          cli::kExitOk);
  auto r = run({"rank", "--grid", dir / "grid.json", "--index-set", "exemplar"});
  REQUIRE(r.code == cli::kExitOk);
  // Baseline n=8 with the exemplar set {1,3,5,6}: tilings of sizes 3 and 3.
  auto bounds = theorem1_bounds(build_baseline_tree(8), exemplar_index_set(8), 2);
  auto batch = batch_from_json(read_json_file(dir / "grid.json")["result"]);
  auto ranks = measured_rank(batch, exemplar_index_set(8));
  for (std::size_t y = 0; y < ranks.size(); ++y) {
    CHECK(BigInt(static_cast<unsigned long>(ranks[y])) <= bounds.upper);
    CHECK(r.out.find("rank(A" + std::to_string(y + 1) + ")=" + std::to_string(ranks[y])) != std::string::npos);
  }
}

TEST_CASE("explicit weight and discretizer files drive grid") {
  ScratchDir dir("explicit");
  auto tree = build_baseline_tree(2);
  WeightSet w(1);
  w.set({1, 2}, NodeWeights{Matrix(1, 1, std::vector<Rational>{1}), Matrix(1, 1, std::vector<Rational>{3})});
  write_json_file(dir / "w.json", weights_to_json(w));
  Discretizers disc(Matrix(2, 1, std::vector<Rational>{1, 2}));
  write_json_file(dir / "d.json", discretizers_to_json(disc));
  auto r = run({"grid", "--n", "2", "--weights", dir / "w.json", "--disc", dir / "d.json", "--out", dir / "g.json"});
  REQUIRE(r.code == cli::kExitOk);
  auto batch = batch_from_json(read_json_file(dir / "g.json")["result"]);
  REQUIRE(batch.size() == 1);
  CHECK(batch[0] == tree_decompose(tree, w, disc, BinaryOperator::product())[0]);
}

TEST_CASE("mix spec files drive hybrids, oracle and claim1") {
  ScratchDir dir("mix");
  auto spec = separation_spec(16, 2);
  write_json_file(dir / "t.json", tree_to_json(spec.tree_t()));
  write_json_file(dir / "tbar.json", tree_to_json(spec.tree_tbar()));
  write_json_file(dir / "mix.json", mix_spec_to_json(spec, "t.json", "tbar.json"));

  auto h = run({"hybrids", "--mix", dir / "mix.json"});
  REQUIRE(h.code == cli::kExitOk);
  CHECK(h.out.find("sequences=32 distinct=32") != std::string::npos);

  auto small = MixSpec(build_baseline_tree(8), build_bit_split_tree(8, {2, 0, 1}), {});
  write_json_file(dir / "t8.json", tree_to_json(small.tree_t()));
  write_json_file(dir / "tbar8.json", tree_to_json(small.tree_tbar()));
  write_json_file(dir / "mix8.json", mix_spec_to_json(small, "t8.json", "tbar8.json"));
  CHECK(run({"oracle", "--mix", dir / "mix8.json", "--r", "2", "--seed", "4"}).code == cli::kExitOk);

  auto c = run({"verify", "claim1", "--mix", dir / "mix.json", "--hybrid", "5", "--trials", "1", "--seed", "2"});
  CHECK(c.code == cli::kExitOk);
  CHECK(c.out.find("claim1 holds for 1 hybrids") != std::string::npos);
  CHECK(run({"verify", "claim1", "--mix", dir / "mix.json", "--hybrid", "32", "--seed", "2"}).code == cli::kExitUsage);
}

TEST_CASE("separation prints the desk-scale certificate") {
  auto r = run({"separation", "--n", "16", "--k", "2", "--r", "4", "--seed", "1", "--trials", "1"});
  REQUIRE(r.code == cli::kExitOk);
  CHECK(r.out.find("R_mix=256 (measured)") != std::string::npos);
  CHECK(r.out.find("T=64 Tbar=64") != std::string::npos);
  CHECK(r.out.find("bound 2.51984") != std::string::npos);
  CHECK(r.out.find("separates: yes") != std::string::npos);
}
