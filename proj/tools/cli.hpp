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

#include <iosfwd>
#include <string>
#include <vector>

namespace mixtensor::cli {

/// Exit codes: 0 success, 1 a checked property failed, 2 bad usage or input.
inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitUsage = 2;

/// Runs one command line (without the program name). Summaries go to `out`,
/// diagnostics to `err`; artifacts go to the files named by --out and --csv.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Parses "1-4,9,10" into a sorted set; "exemplar" expands for the given n.
std::vector<int> parse_index_set(const std::string& text, std::size_t n);

}  // namespace mixtensor::cli
