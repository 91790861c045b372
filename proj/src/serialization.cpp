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

#include "mixtensor/serialization.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace mixtensor {

namespace {

Scalar scalar_from_json(const Json& j) {
  if (j.is_string()) return Scalar(parse_rational(j.get<std::string>()));
  if (j.is_number_integer()) return Scalar(Rational(j.get<long>()));
  if (j.is_number_float()) return Scalar(j.get<double>());
  throw std::invalid_argument("expected a scalar, found " + j.dump());
}

ScalarBuffer buffer_from_json(const Json& values) {
  if (!values.is_array()) throw std::invalid_argument("expected an array of scalars");
  if (values.empty()) return std::vector<Rational>{};
  const ScalarKind kind = scalar_from_json(values.front()).kind();
  return dispatch_kind(kind, [&]<class T>(std::type_identity<T>) -> ScalarBuffer {
    std::vector<T> out;
    out.reserve(values.size());
    for (const auto& v : values) {
      Scalar s = scalar_from_json(v);
      require_same_kind(kind, s.kind(), "JSON array");
      out.push_back(s.get<T>());
    }
    return out;
  });
}

Json buffer_to_json(const ScalarBuffer& buffer, std::size_t begin, std::size_t end) {
  Json out = Json::array();
  for (std::size_t i = begin; i < end; ++i) out.push_back(scalar_to_json(buffer_at(buffer, i)));
  return out;
}

const Json& field(const Json& j, const char* name) {
  if (!j.is_object() || !j.contains(name)) throw std::invalid_argument(std::string("missing field '") + name + "'");
  return j.at(name);
}

ScalarKind kind_field(const Json& j, ScalarKind fallback) {
  return j.contains("scalar") ? parse_scalar_kind(j.at("scalar").get<std::string>()) : fallback;
}

ScalarBuffer as_kind(ScalarBuffer buffer, ScalarKind kind) {
  if (buffer_size(buffer) == 0) return zero_buffer(kind, 0);
  require_same_kind(kind_of_buffer(buffer), kind, "JSON data");
  return buffer;
}

Json big_to_json(const BigInt& v) { return v.get_str(); }

}  // namespace

Json scalar_to_json(const Scalar& value) {
  if (value.kind() == ScalarKind::rational) return format_rational(value.rational());
  return value.f64();
}

Json tensor_to_json(const DenseTensor& tensor) {
  return Json{{"dims", tensor.dims()},
              {"scalar", std::string(to_string(tensor.kind()))},
              {"data", buffer_to_json(tensor.buffer(), 0, tensor.size())}};
}

DenseTensor tensor_from_json(const Json& j) {
  auto dims = field(j, "dims").get<Shape>();
  auto data = buffer_from_json(field(j, "data"));
  const ScalarKind kind = kind_field(j, kind_of_buffer(data));
  return DenseTensor(std::move(dims), as_kind(std::move(data), kind));
}

Json batch_to_json(const GridTensorBatch& batch) {
  Json out = Json::array();
  for (const auto& t : batch) out.push_back(tensor_to_json(t));
  return out;
}

GridTensorBatch batch_from_json(const Json& j) {
  if (!j.is_array()) throw std::invalid_argument("expected an array of tensors");
  GridTensorBatch out;
  for (const auto& t : j) out.push_back(tensor_from_json(t));
  return out;
}

Json matrix_to_json(const Matrix& m) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) rows.push_back(buffer_to_json(m.buffer(), i * m.cols(), (i + 1) * m.cols()));
  return rows;
}

Matrix matrix_from_json(const Json& j) {
  if (!j.is_array()) throw std::invalid_argument("expected a matrix as an array of rows");
  Json flat = Json::array();
  std::size_t cols = j.empty() ? 0 : j.front().size();
  for (const auto& row : j) {
    if (!row.is_array() || row.size() != cols) throw std::invalid_argument("matrix rows must be arrays of equal length");
    for (const auto& v : row) flat.push_back(v);
  }
  return Matrix(j.size(), cols, buffer_from_json(flat));
}

Json mode_set_to_json(const ModeSet& set) { return Json(set); }

std::string label_key(const ModeSet& label) {
  std::string out;
  for (std::size_t i = 0; i < label.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(label[i]);
  }
  return out;
}

ModeSet parse_label_key(const std::string& key) {
  ModeSet out;
  std::stringstream in(key);
  std::string part;
  while (std::getline(in, part, ',')) {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(part, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != part.size()) throw std::invalid_argument("malformed node label '" + key + "'");
    out.push_back(v);
  }
  return out;
}

Json tree_to_json(const ModeTree& tree) {
  Json nodes = Json::array();
  for (const auto& node : tree.nodes()) {
    Json children = nullptr;
    if (node.children) children = Json::array({(*node.children)[0], (*node.children)[1]});
    nodes.push_back({{"label", node.label}, {"children", children}});
  }
  return Json{{"n", tree.n()}, {"nodes", nodes}, {"root", tree.root()}};
}

ModeTree tree_from_json(const Json& j) {
  std::vector<TreeNode> nodes;
  for (const auto& node : field(j, "nodes")) {
    TreeNode t{field(node, "label").get<ModeSet>(), std::nullopt};
    if (node.contains("children") && !node.at("children").is_null()) {
      const auto& c = node.at("children");
      if (!c.is_array() || c.size() != 2) throw std::invalid_argument("children must be a pair of node indices");
      t.children = std::array<std::size_t, 2>{c[0].get<std::size_t>(), c[1].get<std::size_t>()};
    }
    nodes.push_back(std::move(t));
  }
  return ModeTree(field(j, "n").get<std::size_t>(), std::move(nodes), field(j, "root").get<std::size_t>());
}

Json weights_to_json(const WeightSet& weights) {
  Json nodes = Json::object();
  for (const auto& [label, w] : weights.nodes()) {
    nodes[label_key(label)] = {{"aI", matrix_to_json(w.first)}, {"aII", matrix_to_json(w.second)}};
  }
  return Json{{"r", weights.r()}, {"scalar", std::string(to_string(weights.kind()))}, {"nodes", nodes}};
}

WeightSet weights_from_json(const Json& j) {
  const std::size_t r = field(j, "r").get<std::size_t>();
  std::optional<ScalarKind> kind;
  if (j.contains("scalar")) kind = parse_scalar_kind(j.at("scalar").get<std::string>());
  std::vector<std::pair<ModeSet, NodeWeights>> parsed;
  for (const auto& [key, value] : field(j, "nodes").items()) {
    NodeWeights w{matrix_from_json(field(value, "aI")), matrix_from_json(field(value, "aII"))};
    if (!kind) kind = w.first.kind();
    parsed.emplace_back(parse_label_key(key), std::move(w));
  }
  WeightSet out(r, kind.value_or(ScalarKind::rational));
  for (auto& [label, w] : parsed) out.set(label, std::move(w));
  return out;
}

Json discretizers_to_json(const Discretizers& disc) { return Json{{"vectors", matrix_to_json(disc.vectors())}}; }

Discretizers discretizers_from_json(const Json& j) { return Discretizers(matrix_from_json(field(j, "vectors"))); }

Json mix_spec_to_json(const MixSpec& spec, const std::string& tree_t_path, const std::string& tree_tbar_path) {
  Json mix = Json::array();
  for (const auto& label : spec.mixture_nodes()) mix.push_back(label);
  return Json{{"tree_t", tree_t_path}, {"tree_tbar", tree_tbar_path}, {"mixture_nodes", mix}};
}

MixSpec load_mix_spec(const std::filesystem::path& path) {
  Json j = read_json_file(path);
  auto base = path.parent_path();
  auto t = tree_from_json(read_json_file(base / field(j, "tree_t").get<std::string>()));
  auto tbar = tree_from_json(read_json_file(base / field(j, "tree_tbar").get<std::string>()));
  return MixSpec(std::move(t), std::move(tbar), field(j, "mixture_nodes").get<std::vector<ModeSet>>());
}

Json hybrid_to_json(const HybridTree& hybrid) {
  Json source = Json::object();
  for (const auto& [label, tag] : hybrid.source) source[label_key(label)] = std::string(to_string(tag));
  Json choices = Json::array();
  for (auto tag : hybrid.choices) choices.push_back(std::string(to_string(tag)));
  return Json{{"tree", tree_to_json(hybrid.tree)}, {"source", source}, {"choices", choices}};
}

Json bounds_to_json(const BoundsReport& b) {
  return Json{{"r", b.r},
              {"tiling_size", b.tiling_size},
              {"complement_tiling_size", b.complement_tiling_size},
              {"upper_exponent", b.upper_exponent},
              {"lower_exponent", b.lower_exponent},
              {"upper", big_to_json(b.upper)},
              {"lower", big_to_json(b.lower)}};
}

Json tiling_to_json(const Tiling& tiling) {
  Json labels = Json::array();
  for (const auto& label : tiling.labels) labels.push_back(label);
  return Json{{"size", tiling.size()}, {"nodes", labels}};
}

Json rank_report_to_json(const RankTrialReport& report) {
  Json trials = Json::array();
  for (std::size_t i = 0; i < report.ranks.size(); ++i) {
    const BigInt rank(static_cast<unsigned long>(report.trial_rank(i)));
    trials.push_back({{"seed", report.seeds[i]},
                      {"ranks", report.ranks[i]},
                      {"within_upper", rank <= report.bounds.upper},
                      {"at_lower", rank >= report.bounds.lower}});
  }
  return Json{{"subject", report.subject},
              {"index_set", report.index_set},
              {"r", report.r},
              {"bounds", bounds_to_json(report.bounds)},
              {"trials", trials},
              {"witness", {{"ranks", report.witness_ranks}, {"degenerate", report.witness_degenerate}}},
              {"upper_ok", report.upper_ok()},
              {"witness_ok", report.witness_ok()}};
}

Json claim1_to_json(const Claim1Result& result) {
  Json out{{"trials", result.trials}, {"pass", result.pass()}, {"operator_covered", result.operator_covered}};
  if (result.mismatch) {
    const auto& m = *result.mismatch;
    out["mismatch"] = {{"trial", m.trial},       {"seed", m.seed},         {"output", m.output},
                       {"index", m.index},       {"expected", m.expected}, {"actual", m.actual}};
  }
  return out;
}

Json genericity_to_json(const GenericityReport& report) {
  Json counts = Json::object();
  for (const auto& [rank, count] : report.counts) counts[std::to_string(rank)] = count;
  return Json{{"trial_ranks", report.trial_ranks},
              {"counts", counts},
              {"modal_rank", report.modal_rank},
              {"fraction_at_modal", report.fraction_at_modal}};
}

Json separation_to_json(const SeparationReport& r) {
  Json choices = Json::array();
  for (auto tag : r.hybrid_choices) choices.push_back(std::string(to_string(tag)));
  Json out{{"k", r.k},
           {"n", r.n},
           {"r_mix", r.r_mix},
           {"r_h", r.r_h},
           {"index_set", r.index_set},
           {"hybrid_choices", choices},
           {"bounds_t", bounds_to_json(r.bounds_t)},
           {"bounds_tbar", bounds_to_json(r.bounds_tbar)},
           {"bounds_hybrid", bounds_to_json(r.bounds_hybrid)},
           {"tree_exponent", r.tree_exponent},
           {"r_mix_rank", big_to_json(r.r_mix_rank)},
           {"measured", r.measured},
           {"hybrid_trial_ranks", r.hybrid_trial_ranks},
           {"summation_bound", big_to_json(r.summation_bound)},
           {"minimal_r_prime", r.minimal_r_prime},
           {"corollary_exponent", r.corollary_exponent},
           {"corollary_bound", r.corollary_bound},
           {"degenerate", r.degenerate},
           {"separates", r.separates()}};
  out["mixed_realized_rank"] = r.mixed_realized_rank ? Json(*r.mixed_realized_rank) : Json(nullptr);
  out["summation_rank"] = r.summation_rank ? Json(*r.summation_rank) : Json(nullptr);
  return out;
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw std::invalid_argument(path.string() + ": " + e.what());
  }
}

void write_json_file(const std::filesystem::path& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << j.dump(2) << '\n';
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace mixtensor
