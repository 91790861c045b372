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

#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <sstream>

#include "mixtensor/network.hpp"
#include "mixtensor/random.hpp"
#include "mixtensor/serialization.hpp"

namespace mixtensor::cli {

namespace {

class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Options {
  // Tree selection.
  std::string tree_file;
  std::string kind = "baseline";
  std::size_t n = 0;
  std::size_t k = 0;
  std::string bit_order;
  // Inputs.
  std::string mix_file;
  std::string weights_file;
  std::string weights_tbar_file;
  std::string disc_file;
  std::string grid_file;
  std::string index_set;
  std::size_t r = 2;
  std::size_t m = 0;
  std::optional<std::uint64_t> seed;
  std::size_t trials = 0;
  std::string g = "product";
  std::string scalar = "rational";
  long bound = 0;
  double tolerance = 1e-9;
  std::size_t threads = 1;
  std::optional<std::size_t> hybrid;
  bool witness = false;
  // Outputs.
  std::string out;
  std::string csv;
};

struct Io {
  std::ostream& out;
  std::ostream& err;
};

std::string join(const std::vector<std::size_t>& values, const char* sep = ",") {
  std::string s;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) s += sep;
    s += std::to_string(values[i]);
  }
  return s;
}

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 6);
  return std::string(buf, res.ptr);
}

std::size_t parse_count(const std::string& text) {
  std::size_t value = 0;
  auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size() || text.empty()) {
    throw UsageError("malformed integer '" + text + "'");
  }
  return value;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::stringstream in(text);
  std::string part;
  while (std::getline(in, part, sep)) parts.push_back(part);
  return parts;
}

ScalarKind scalar_kind(const Options& o) {
  try {
    return parse_scalar_kind(o.scalar);
  } catch (const std::invalid_argument&) {
    throw UsageError("--scalar must be rational or f64");
  }
}

WeightSampling sampling(const Options& o, long default_bound) {
  if (scalar_kind(o) == ScalarKind::f64) return WeightSampling::unit_float();
  const long bound = o.bound > 0 ? o.bound : default_bound;
  return WeightSampling::integers(bound);
}

std::uint64_t require_seed(const Options& o) {
  if (!o.seed) throw UsageError("this command draws random values and needs --seed");
  return *o.seed;
}

ModeTree resolve_tree(const Options& o) {
  if (!o.tree_file.empty()) return tree_from_json(read_json_file(o.tree_file));
  if (o.n == 0) throw UsageError("give --tree FILE or --n with --kind");
  if (o.kind == "baseline") return build_baseline_tree(o.n);
  if (o.kind == "even-odd") return build_even_odd_swap_tree(o.n);
  if (o.kind == "k-group") {
    if (o.k == 0) throw UsageError("--kind k-group needs --k");
    return build_k_group_swap_tree(o.n, o.k);
  }
  if (o.kind == "bit-split") {
    std::vector<int> order;
    for (const auto& part : split(o.bit_order, ',')) order.push_back(static_cast<int>(parse_count(part)));
    return build_bit_split_tree(o.n, order);
  }
  if (o.kind == "separating-hybrid") {
    if (o.k == 0) throw UsageError("--kind separating-hybrid needs --k");
    return separating_hybrid(separation_spec(o.n, o.k)).tree;
  }
  throw UsageError("unknown tree kind '" + o.kind + "'");
}

std::optional<MixSpec> resolve_mix(const Options& o) {
  if (!o.mix_file.empty()) return load_mix_spec(o.mix_file);
  if (o.n != 0 && o.k != 0) return separation_spec(o.n, o.k);
  return std::nullopt;
}

MixSpec require_mix(const Options& o) {
  auto spec = resolve_mix(o);
  if (!spec) throw UsageError("give --mix FILE or --n with --k");
  return *spec;
}

ModeSet resolve_index_set(const Options& o, std::size_t n) {
  if (o.index_set.empty()) throw UsageError("--index-set is required");
  return parse_index_set(o.index_set, n);
}

BinaryOperator resolve_g(const Options& o) {
  try {
    return BinaryOperator::parse(o.g);
  } catch (const std::invalid_argument&) {
    throw UsageError("--g must be product or relu-sum");
  }
}

WeightSet resolve_weights(const Options& o, const std::string& file, const ModeTree& tree, std::uint64_t stream) {
  if (!file.empty()) return weights_from_json(read_json_file(file));
  return random_weights(tree, o.r, derive_seed(require_seed(o), stream), sampling(o, 5));
}

Discretizers resolve_disc(const Options& o, std::size_t r) {
  if (!o.disc_file.empty()) return discretizers_from_json(read_json_file(o.disc_file));
  if (o.m == 0) return Discretizers::identity(r, scalar_kind(o));
  return random_discretizers(o.m, r, derive_seed(require_seed(o), 9), sampling(o, 5));
}

RankMode rank_mode(const Options& o, ScalarKind kind) {
  return kind == ScalarKind::rational ? RankMode::exact() : RankMode::numeric(o.tolerance);
}

/// Wraps a command result with the command name and, when set, the seed.
Json artifact(const std::string& command, const Options& o, Json result) {
  Json j{{"command", command}, {"result", std::move(result)}};
  j["seed"] = o.seed ? Json(*o.seed) : Json(nullptr);
  return j;
}

void write_outputs(const std::string& command, const Options& o, Json result) {
  if (!o.out.empty()) write_json_file(o.out, artifact(command, o, std::move(result)));
}

void header(const Io& io, const std::string& command, const Options& o) {
  io.out << "# " << command;
  if (o.seed) io.out << " seed=" << *o.seed;
  io.out << '\n';
}

void write_trial_csv(const Options& o, const RankTrialReport& report) {
  if (o.csv.empty()) return;
  std::ofstream csv(o.csv);
  if (!csv) throw std::runtime_error("cannot write " + o.csv);
  csv << "# seed=" << (o.seed ? std::to_string(*o.seed) : "none") << '\n';
  csv << "trial,seed,rank,within_upper,at_lower\n";
  for (std::size_t i = 0; i < report.ranks.size(); ++i) {
    const BigInt rank(static_cast<unsigned long>(report.trial_rank(i)));
    csv << i << ',' << report.seeds[i] << ',' << report.trial_rank(i) << ',' << (rank <= report.bounds.upper) << ','
        << (rank >= report.bounds.lower) << '\n';
  }
}

// ---- commands ----

int cmd_tree_build(const Options& o, const Io& io) {
  auto tree = resolve_tree(o);
  io.out << "tree n=" << tree.n() << " interior=" << tree.interior_count() << " height=" << tree.height()
         << '\n';
  Json result = tree_to_json(tree);
  if (auto order = bit_order_of(tree)) {
    std::vector<std::size_t> bits(order->begin(), order->end());
    io.out << "bit_order=" << join(bits) << '\n';
    io.out << "dilations=" << join(dilation_profile(tree)) << '\n';
  }
  if (!o.out.empty()) write_json_file(o.out, result);
  return kExitOk;
}

int cmd_tiling(const Options& o, const Io& io) {
  auto tree = resolve_tree(o);
  auto set = resolve_index_set(o, tree.n());
  check_proper_index_set(set, tree.n());
  auto inside = tiling(tree, set);
  auto outside = tiling(tree, complement(set, tree.n()));
  auto print = [&](const char* name, const Tiling& t) {
    io.out << name << " size=" << t.size() << ':';
    for (const auto& label : t.labels) io.out << ' ' << format_mode_set(label);
    io.out << '\n';
  };
  io.out << "I=" << format_mode_set(set) << '\n';
  print("tiling(I)", inside);
  print("tiling(Ic)", outside);
  const std::size_t pairs = sibling_pairs_count(tree, set);
  io.out << "sibling_pairs=" << pairs << '\n';
  write_outputs("tiling", o,
                {{"index_set", set}, {"tiling", tiling_to_json(inside)}, {"complement_tiling", tiling_to_json(outside)},
                 {"sibling_pairs", pairs}});
  return kExitOk;
}

int cmd_bounds(const Options& o, const Io& io) {
  auto tree = resolve_tree(o);
  auto set = resolve_index_set(o, tree.n());
  auto b = theorem1_bounds(tree, set, o.r);
  io.out << "I=" << format_mode_set(set) << " r=" << o.r << '\n';
  io.out << "tiling sizes: " << b.tiling_size << " / " << b.complement_tiling_size << '\n';
  io.out << "lower=" << b.lower.get_str() << " (r^" << b.lower_exponent << ") upper=" << b.upper.get_str() << " (r^"
         << b.upper_exponent << ")\n";
  write_outputs("bounds", o, bounds_to_json(b));
  return kExitOk;
}

GridTensorBatch compute_grid(const Options& o, std::string& description) {
  const auto g = resolve_g(o);
  if (auto spec = resolve_mix(o); spec && !o.mix_file.empty()) {
    auto wt = resolve_weights(o, o.weights_file, spec->tree_t(), 0);
    auto wb = resolve_weights(o, o.weights_tbar_file, spec->tree_tbar(), 1);
    description = "mixed";
    return mixed_decompose(*spec, wt, wb, resolve_disc(o, wt.r()), g);
  }
  auto tree = resolve_tree(o);
  auto w = resolve_weights(o, o.weights_file, tree, 0);
  description = "tree";
  return tree_decompose(tree, w, resolve_disc(o, w.r()), g);
}

int cmd_grid(const Options& o, const Io& io) {
  std::string description;
  auto batch = compute_grid(o, description);
  if (o.seed) header(io, "grid", o);
  const auto& first = batch.front();
  io.out << description << " grid tensors=" << batch.size() << " order=" << first.order()
         << " entries=" << first.size() << " scalar=" << to_string(first.kind()) << '\n';
  for (std::size_t y = 0; y < batch.size(); ++y) {
    std::size_t nonzero = 0;
    for (std::size_t f = 0; f < batch[y].size(); ++f) nonzero += !batch[y].flat(f).is_zero();
    io.out << "A" << y + 1 << ": nonzero=" << nonzero << '\n';
  }
  write_outputs("grid", o, batch_to_json(batch));
  return kExitOk;
}

int cmd_rank(const Options& o, const Io& io) {
  GridTensorBatch batch;
  std::string description = "file";
  if (!o.grid_file.empty()) {
    Json j = read_json_file(o.grid_file);
    batch = batch_from_json(j.contains("result") ? j.at("result") : j);
  } else {
    batch = compute_grid(o, description);
  }
  if (batch.empty()) throw UsageError("no grid tensors to rank");
  if (o.seed) header(io, "rank", o);
  auto set = resolve_index_set(o, batch.front().order());
  check_proper_index_set(set, batch.front().order());
  auto ranks = measured_rank(batch, set, rank_mode(o, batch.front().kind()));
  io.out << "I=" << format_mode_set(set) << '\n';
  for (std::size_t y = 0; y < ranks.size(); ++y) io.out << "rank(A" << y + 1 << ")=" << ranks[y] << '\n';
  write_outputs("rank", o, {{"index_set", set}, {"ranks", ranks}});
  return kExitOk;
}

int cmd_hybrids(const Options& o, const Io& io) {
  auto spec = require_mix(o);
  auto e = enumerate_hybrids(spec);
  io.out << "mixture_nodes=" << spec.mixture_nodes().size() << " sequences=" << e.sequences
         << " distinct=" << e.hybrids.size() << '\n';
  Json list = Json::array();
  for (std::size_t i = 0; i < e.hybrids.size(); ++i) {
    io.out << "hybrid " << i << ":";
    for (auto tag : e.hybrids[i].choices) io.out << ' ' << to_string(tag);
    io.out << '\n';
    list.push_back(hybrid_to_json(e.hybrids[i]));
  }
  write_outputs("hybrids", o, {{"sequences", e.sequences}, {"hybrids", list}});
  return kExitOk;
}

int cmd_oracle(const Options& o, const Io& io) {
  const std::uint64_t seed = require_seed(o);
  const auto g = resolve_g(o);
  const std::size_t m = o.m ? o.m : o.r;
  GridTensorBatch decomposed, brute;
  std::string what;
  if (!o.mix_file.empty()) {
    auto spec = load_mix_spec(o.mix_file);
    auto wt = random_weights(spec.tree_t(), o.r, derive_seed(seed, 0), sampling(o, 5));
    auto wb = random_weights(spec.tree_tbar(), o.r, derive_seed(seed, 1), sampling(o, 5));
    auto disc = random_discretizers(m, o.r, derive_seed(seed, 2), sampling(o, 5));
    decomposed = mixed_decompose(spec, wt, wb, disc, g);
    brute = mixed_grid_bruteforce(spec, wt, wb, disc, g, o.threads);
    what = "mixed";
  } else {
    auto tree = resolve_tree(o);
    auto w = random_weights(tree, o.r, derive_seed(seed, 0), sampling(o, 5));
    auto disc = random_discretizers(m, o.r, derive_seed(seed, 2), sampling(o, 5));
    decomposed = tree_decompose(tree, w, disc, g);
    brute = grid_tensor_bruteforce(tree, w, disc, g, o.threads);
    what = "tree";
  }
  header(io, "oracle", o);
  std::size_t entries = 0;
  for (std::size_t y = 0; y < brute.size(); ++y) {
    for (std::size_t f = 0; f < brute[y].size(); ++f, ++entries) {
      if (brute[y].flat(f) == decomposed[y].flat(f)) continue;
      auto index = unflatten_index(brute[y].dims(), f);
      for (auto& d : index) ++d;
      io.out << "MISMATCH " << what << " A" << y + 1 << '(' << join(index) << "): decomposition="
             << decomposed[y].flat(f).to_string() << " brute-force=" << brute[y].flat(f).to_string() << '\n';
      write_outputs("oracle", o,
                    {{"match", false}, {"output", y + 1}, {"index", index},
                     {"decomposition", decomposed[y].flat(f).to_string()}, {"brute_force", brute[y].flat(f).to_string()}});
      return kExitCheckFailed;
    }
  }
  io.out << what << " decomposition matches brute force on " << brute.size() << " tensors x " << brute.front().size()
         << " entries (g=" << g.name() << ")\n";
  write_outputs("oracle", o, {{"match", true}, {"entries", entries}});
  return kExitOk;
}

int cmd_verify_claim1(const Options& o, const Io& io) {
  const std::uint64_t seed = require_seed(o);
  auto spec = require_mix(o);
  const auto g = resolve_g(o);
  auto hybrids = enumerate_hybrids(spec).hybrids;
  std::vector<std::size_t> chosen;
  if (o.hybrid) {
    if (*o.hybrid >= hybrids.size()) throw UsageError("--hybrid out of range");
    chosen.push_back(*o.hybrid);
  } else {
    for (std::size_t i = 0; i < hybrids.size(); ++i) chosen.push_back(i);
  }
  header(io, "verify claim1", o);
  TrialOptions options{o.trials ? o.trials : 5, 0, o.threads, sampling(o, 5)};
  Json results = Json::array();
  bool pass = true;
  for (auto i : chosen) {
    options.seed = derive_seed(seed, i);
    auto result = verify_claim1(spec, hybrids[i], o.r, options, g);
    io.out << "hybrid " << i << ": " << (result.pass() ? "pass" : "FAIL") << " (" << result.trials << " trials)\n";
    if (const auto& m = result.mismatch) {
      auto index = m->index;
      for (auto& d : index) ++d;
      io.out << "  trial " << m->trial << " A" << m->output + 1 << '(' << join(index) << "): hybrid=" << m->expected
             << " mixed=" << m->actual << '\n';
    }
    Json entry = claim1_to_json(result);
    entry["hybrid"] = i;
    results.push_back(entry);
    pass = pass && result.pass();
  }
  io.out << "claim1 " << (pass ? "holds" : "FAILS") << " for " << chosen.size() << " hybrids, r_h=" << o.r
         << ", g=" << g.name() << '\n';
  write_outputs("verify claim1", o, {{"pass", pass}, {"r_h", o.r}, {"g", g.name()}, {"hybrids", results}});
  return pass ? kExitOk : kExitCheckFailed;
}

int cmd_verify_theorem1(const Options& o, const Io& io) {
  const std::uint64_t seed = require_seed(o);
  auto tree = resolve_tree(o);
  auto set = resolve_index_set(o, tree.n());
  check_proper_index_set(set, tree.n());
  TrialOptions options{o.trials ? o.trials : 10, seed, o.threads, sampling(o, kGenericWeightBound)};
  auto report = verify_theorem1(tree, set, o.r, options, resolve_g(o), o.kind);
  header(io, "verify theorem1", o);
  io.out << "I=" << format_mode_set(set) << " r=" << o.r << '\n';
  io.out << "bounds: lower=" << report.bounds.lower.get_str() << " upper=" << report.bounds.upper.get_str() << '\n';
  std::vector<std::size_t> trial_ranks;
  for (std::size_t i = 0; i < report.ranks.size(); ++i) trial_ranks.push_back(report.trial_rank(i));
  io.out << "trial ranks: " << join(trial_ranks, " ") << '\n';
  const std::size_t lower = static_cast<std::size_t>(report.bounds.lower.get_ui());
  if (report.bounds.lower.fits_ulong_p()) {
    io.out << "trials at lower bound: " << report.trials_at(lower) << '/' << report.ranks.size() << '\n';
  }
  io.out << "witness rank: " << (report.witness_ranks.empty() ? 0 : report.witness_ranks.front())
         << (report.witness_degenerate ? " (degenerate split at the root)" : "") << '\n';
  io.out << "upper bound " << (report.upper_ok() ? "respected" : "VIOLATED") << "; witness "
         << (report.witness_ok() ? "reaches" : "MISSES") << " the lower bound\n";
  write_trial_csv(o, report);
  write_outputs("verify theorem1", o, rank_report_to_json(report));
  return report.upper_ok() && report.witness_ok() ? kExitOk : kExitCheckFailed;
}

int cmd_verify_generic(const Options& o, const Io& io) {
  const std::uint64_t seed = require_seed(o);
  auto tree = resolve_tree(o);
  auto set = resolve_index_set(o, tree.n());
  TrialOptions options{o.trials ? o.trials : 10, seed, o.threads, sampling(o, kGenericWeightBound)};
  auto report = genericity_check(tree, set, o.r, options, o.witness);
  header(io, "verify generic", o);
  io.out << "I=" << format_mode_set(set) << " r=" << o.r << '\n';
  io.out << "trial ranks: " << join(report.trial_ranks, " ") << '\n';
  for (const auto& [rank, count] : report.counts) io.out << "rank " << rank << ": " << count << '\n';
  io.out << "modal rank " << report.modal_rank << " at fraction " << format_double(report.fraction_at_modal) << '\n';
  write_outputs("verify generic", o, genericity_to_json(report));
  return kExitOk;
}

int cmd_separation(const Options& o, const Io& io) {
  const std::uint64_t seed = require_seed(o);
  if (o.n == 0 || o.k == 0) throw UsageError("separation needs --n and --k");
  SeparationOptions options{o.trials ? o.trials : 3, seed, o.threads};
  auto rep = separation_report(o.k, o.n, o.r, options);
  header(io, "separation", o);
  io.out << "k=" << rep.k << " n=" << rep.n << " r_mix=" << rep.r_mix << " r_h=" << rep.r_h << '\n';
  io.out << "I=" << format_mode_set(rep.index_set) << '\n';
  io.out << "tree upper bounds at r_h: T=" << rep.bounds_t.upper.get_str() << " Tbar=" << rep.bounds_tbar.upper.get_str()
         << " (exponent " << rep.tree_exponent << ")\n";
  io.out << "hybrid bounds: lower=" << rep.bounds_hybrid.lower.get_str() << " upper=" << rep.bounds_hybrid.upper.get_str()
         << '\n';
  io.out << "R_mix=" << rep.r_mix_rank.get_str() << (rep.measured ? " (measured)" : " (bound, not measured)") << '\n';
  if (rep.measured) {
    io.out << "hybrid trial ranks: " << join(rep.hybrid_trial_ranks, " ") << '\n';
    io.out << "mixed decomposition rank: " << *rep.mixed_realized_rank << '\n';
    io.out << "sum of two trees rank: " << *rep.summation_rank << " (bound " << rep.summation_bound.get_str() << ")\n";
  } else {
    io.out << "summation bound: " << rep.summation_bound.get_str() << '\n';
  }
  io.out << "minimal r' with r'^" << rep.tree_exponent << " >= R_mix: " << rep.minimal_r_prime << '\n';
  io.out << "corollary exponent " << format_double(rep.corollary_exponent) << ", bound "
         << format_double(rep.corollary_bound) << '\n';
  io.out << (rep.degenerate ? "degenerate: k=1 swaps nothing\n" : "")
         << "separates: " << (rep.separates() ? "yes" : "no") << '\n';
  write_outputs("separation", o, separation_to_json(rep));

  bool ok = true;
  if (rep.measured) {
    for (auto rank : rep.hybrid_trial_ranks) ok = ok && BigInt(static_cast<unsigned long>(rank)) <= rep.bounds_hybrid.upper;
    ok = ok && BigInt(static_cast<unsigned long>(*rep.summation_rank)) <= rep.summation_bound;
  }
  return ok ? kExitOk : kExitCheckFailed;
}

// ---- option wiring ----

void add_tree_options(CLI::App* app, Options& o) {
  app->add_option("--tree", o.tree_file, "Mode tree JSON file");
  app->add_option("--kind", o.kind, "baseline | even-odd | k-group | bit-split | separating-hybrid")
      ->check(CLI::IsMember({"baseline", "even-odd", "k-group", "bit-split", "separating-hybrid"}));
  app->add_option("--n", o.n, "Number of modes (a power of two)");
  app->add_option("--k", o.k, "Group size for k-group swaps");
  app->add_option("--bit-order", o.bit_order, "Split bits from the root down, e.g. 2,0,1");
}

void add_seed(CLI::App* app, Options& o) { app->add_option("--seed", o.seed, "Master seed"); }

void add_outputs(CLI::App* app, Options& o) { app->add_option("--out", o.out, "Write a JSON artifact here"); }

void add_scalar(CLI::App* app, Options& o) {
  app->add_option("--scalar", o.scalar, "rational | f64")->check(CLI::IsMember({"rational", "f64"}));
  app->add_option("--bound", o.bound, "Integer weights are drawn from [-B, B]")->check(CLI::PositiveNumber);
}

void add_inputs(CLI::App* app, Options& o) {
  app->add_option("--mix", o.mix_file, "Mix spec JSON file");
  app->add_option("--weights", o.weights_file, "Weight set JSON file");
  app->add_option("--weights-tbar", o.weights_tbar_file, "Second weight set for --mix");
  app->add_option("--disc", o.disc_file, "Discretizers JSON file");
  app->add_option("--m", o.m, "Number of random discretizers (identity when omitted)");
  app->add_option("--r", o.r, "Size constant for random weights");
  app->add_option("--g", o.g, "product | relu-sum");
}

}  // namespace

std::vector<int> parse_index_set(const std::string& text, std::size_t n) {
  if (text == "exemplar") return exemplar_index_set(n);
  std::vector<int> out;
  for (const auto& part : split(text, ',')) {
    if (part.empty()) throw UsageError("empty entry in index set '" + text + "'");
    auto dash = part.find('-');
    if (dash == std::string::npos) {
      out.push_back(static_cast<int>(parse_count(part)));
      continue;
    }
    const std::size_t lo = parse_count(part.substr(0, dash)), hi = parse_count(part.substr(dash + 1));
    if (lo > hi) throw UsageError("descending range '" + part + "'");
    for (std::size_t i = lo; i <= hi; ++i) out.push_back(static_cast<int>(i));
  }
  std::sort(out.begin(), out.end());
  if (std::adjacent_find(out.begin(), out.end()) != out.end()) throw UsageError("repeated index in '" + text + "'");
  check_index_set(out, n);
  return out;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  Io io{out, err};
  std::function<int(const Options&, const Io&)> action;

  CLI::App app{"Tree and mixed tensor decompositions of dilated convolutional networks", "mixtensor"};
  app.require_subcommand(1);
  auto bind = [&](CLI::App* sub, int (*fn)(const Options&, const Io&)) { sub->callback([&action, fn] { action = fn; }); };

  auto* tree = app.add_subcommand("tree", "Mode tree utilities")->require_subcommand(1);
  auto* build = tree->add_subcommand("build", "Build a mode tree and print its structure");
  add_tree_options(build, o);
  add_outputs(build, o);
  bind(build, cmd_tree_build);

  auto* til = app.add_subcommand("tiling", "Tilings of an index set and its complement");
  add_tree_options(til, o);
  til->add_option("--index-set", o.index_set, "e.g. 1-4,9,10 or exemplar");
  add_outputs(til, o);
  bind(til, cmd_tiling);

  auto* bounds = app.add_subcommand("bounds", "Matricization rank bounds for a tree and index set");
  add_tree_options(bounds, o);
  bounds->add_option("--index-set", o.index_set, "e.g. 1-4,9,10 or exemplar");
  bounds->add_option("--r", o.r, "Size constant");
  add_outputs(bounds, o);
  bind(bounds, cmd_bounds);

  auto* grid = app.add_subcommand("grid", "Grid tensors of a tree or mixed decomposition");
  add_tree_options(grid, o);
  add_inputs(grid, o);
  add_seed(grid, o);
  add_scalar(grid, o);
  add_outputs(grid, o);
  bind(grid, cmd_grid);

  auto* rank = app.add_subcommand("rank", "Matricization ranks of grid tensors");
  add_tree_options(rank, o);
  add_inputs(rank, o);
  rank->add_option("--grid", o.grid_file, "Grid tensor JSON file");
  rank->add_option("--index-set", o.index_set, "e.g. 1-4,9,10 or exemplar");
  rank->add_option("--tol", o.tolerance, "Relative singular value cutoff for f64 ranks");
  add_seed(rank, o);
  add_scalar(rank, o);
  add_outputs(rank, o);
  bind(rank, cmd_rank);

  auto* hyb = app.add_subcommand("hybrids", "Enumerate the hybrid trees of a mix spec");
  add_tree_options(hyb, o);
  hyb->add_option("--mix", o.mix_file, "Mix spec JSON file");
  add_outputs(hyb, o);
  bind(hyb, cmd_hybrids);

  auto* oracle = app.add_subcommand("oracle", "Compare a decomposition with brute-force forward passes");
  add_tree_options(oracle, o);
  oracle->add_option("--mix", o.mix_file, "Mix spec JSON file");
  oracle->add_option("--r", o.r, "Size constant");
  oracle->add_option("--m", o.m, "Number of discretizers (default r)");
  oracle->add_option("--g", o.g, "product | relu-sum");
  oracle->add_option("--threads", o.threads, "Worker threads");
  add_seed(oracle, o);
  add_scalar(oracle, o);
  add_outputs(oracle, o);
  bind(oracle, cmd_oracle);

  auto* verify = app.add_subcommand("verify", "Property checks")->require_subcommand(1);
  auto* claim1 = verify->add_subcommand("claim1", "Mixed decompositions reproduce every hybrid");
  add_tree_options(claim1, o);
  claim1->add_option("--mix", o.mix_file, "Mix spec JSON file");
  claim1->add_option("--r", o.r, "Hybrid size constant; the mixed decomposition uses twice this");
  claim1->add_option("--hybrid", o.hybrid, "Check only this hybrid (index from `hybrids`)");
  claim1->add_option("--trials", o.trials, "Weight draws per hybrid (default 5)");
  claim1->add_option("--g", o.g, "product | relu-sum");
  add_seed(claim1, o);
  add_scalar(claim1, o);
  add_outputs(claim1, o);
  bind(claim1, cmd_verify_claim1);

  auto* th1 = verify->add_subcommand("theorem1", "Measured ranks against the tiling bounds");
  add_tree_options(th1, o);
  th1->add_option("--index-set", o.index_set, "e.g. 1-4,9,10 or exemplar");
  th1->add_option("--r", o.r, "Size constant");
  th1->add_option("--trials", o.trials, "Random weight draws (default 10)");
  th1->add_option("--g", o.g, "Only product is accepted");
  th1->add_option("--threads", o.threads, "Worker threads");
  th1->add_option("--csv", o.csv, "Write one row per trial here");
  add_seed(th1, o);
  add_scalar(th1, o);
  add_outputs(th1, o);
  bind(th1, cmd_verify_theorem1);

  auto* gen = verify->add_subcommand("generic", "Rank frequencies over random weight draws");
  add_tree_options(gen, o);
  gen->add_option("--index-set", o.index_set, "e.g. 1-4,9,10 or exemplar");
  gen->add_option("--r", o.r, "Size constant");
  gen->add_option("--trials", o.trials, "Random weight draws (default 10)");
  gen->add_option("--threads", o.threads, "Worker threads");
  gen->add_flag("--witness", o.witness, "Include the lower-bound construction as trial 0");
  add_seed(gen, o);
  add_scalar(gen, o);
  add_outputs(gen, o);
  bind(gen, cmd_verify_generic);

  auto* sep = app.add_subcommand("separation", "Mixed versus single-tree ranks for k-group swaps");
  sep->add_option("--n", o.n, "Number of modes");
  sep->add_option("--k", o.k, "Group size");
  sep->add_option("--r", o.r, "Size constant of the mixed decomposition (even)");
  sep->add_option("--trials", o.trials, "Hybrid rank draws (default 3)");
  sep->add_option("--threads", o.threads, "Worker threads");
  add_seed(sep, o);
  add_outputs(sep, o);
  bind(sep, cmd_separation);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
  }
  if (o.threads == 0) o.threads = 1;
  try {
    return action(o, io);
  } catch (const InternalError& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitCheckFailed;
  } catch (const BudgetExceededError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Json::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}

}  // namespace mixtensor::cli
