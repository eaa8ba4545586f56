// Copyright 2026 The Krauscope Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <string>

#include <json.hpp>

#include "krauscope/harness.hpp"
#include "krauscope/matrix.hpp"

namespace krauscope {

using json = nlohmann::json;

/// {"dims": [rows, cols], "entries": [[re, im], ...]} row-major. Entries
/// round-trip exactly (shortest-round-trip decimal output).
json operator_to_json(const CMatrix& m);

/// Parses and shape-checks; throws ConfigError naming `path` on violations.
CMatrix operator_from_json(const json& j, const std::string& path);

/// Fully resolved config, defaults included.
json config_to_json(const ExperimentConfig& cfg);

/// Parses, rejects unknown fields, applies defaults, and re-validates all
/// explicitly supplied operators (unitarity / positivity / completeness).
/// Throws ConfigError with the JSON path of the offending field.
ExperimentConfig config_from_json(const json& j,
                                  const std::string& path = "config");

ExperimentConfig load_config(const std::string& file);
void save_config(const ExperimentConfig& cfg, const std::string& file);

/// Full report. The canonical form (include_timing = false) is
/// byte-reproducible for a fixed config and execution-policy independent.
json report_to_json(const ExperimentReport& report, bool include_timing = true);

/// Flat table: seed,sweep_value,series,i,j,k,re_est,im_est,re_true,im_true,
/// abs_err. Single runs emit one row per element; delta-theta sweeps one row
/// per (seed, point, method); shot sweeps one row per (seed, level).
std::string report_to_csv(const ExperimentReport& report);

}  // namespace krauscope
