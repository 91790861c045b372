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

#include <filesystem>
#include <string>

#include <json.hpp>

#include "mixtensor/analysis.hpp"

namespace mixtensor {

using Json = nlohmann::json;

// Rationals are written as "p/q" strings and f64 values as JSON numbers.
// Readers accept "p/q" or "p" strings and integer numbers as rationals.

Json scalar_to_json(const Scalar& value);

Json tensor_to_json(const DenseTensor& tensor);
DenseTensor tensor_from_json(const Json& j);

Json batch_to_json(const GridTensorBatch& batch);
GridTensorBatch batch_from_json(const Json& j);

/// Array of rows.
Json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const Json& j);

Json tree_to_json(const ModeTree& tree);
ModeTree tree_from_json(const Json& j);

/// Node keys are labels written as comma lists, e.g. "1,2".
Json weights_to_json(const WeightSet& weights);
WeightSet weights_from_json(const Json& j);

Json discretizers_to_json(const Discretizers& disc);
Discretizers discretizers_from_json(const Json& j);

Json mode_set_to_json(const ModeSet& set);
std::string label_key(const ModeSet& label);
ModeSet parse_label_key(const std::string& key);

/// MixSpec files reference the two tree files by path, resolved relative to
/// the spec file's directory.
Json mix_spec_to_json(const MixSpec& spec, const std::string& tree_t_path, const std::string& tree_tbar_path);
MixSpec load_mix_spec(const std::filesystem::path& path);

Json hybrid_to_json(const HybridTree& hybrid);

Json bounds_to_json(const BoundsReport& bounds);
Json tiling_to_json(const Tiling& tiling);
Json rank_report_to_json(const RankTrialReport& report);
Json claim1_to_json(const Claim1Result& result);
Json genericity_to_json(const GenericityReport& report);
Json separation_to_json(const SeparationReport& report);

Json read_json_file(const std::filesystem::path& path);
/// Two-space indentation and a trailing newline; object keys are sorted, so
/// equal documents serialize to identical bytes.
void write_json_file(const std::filesystem::path& path, const Json& j);

}  // namespace mixtensor
