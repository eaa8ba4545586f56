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
#include <utility>
#include <vector>

#include "krauscope/quantum.hpp"

namespace krauscope {

struct CheckResult {
  std::string name;
  bool passed = false;
  double seconds = 0.0;
  std::string detail;
};

/// The end-to-end verification battery: every cross-module guarantee the
/// library makes, each with its tolerance and runtime budget pinned in code.
/// Used by both the `verify` CLI subcommand and the acceptance test binary.
std::vector<CheckResult> run_full_verification();

/// Two complete three-outcome Kraus families whose leading operators differ
/// by more than 0.5 in Frobenius distance yet share the same first effect
/// (both square to I/2). The canonical fixture for showing that the
/// framework resolves operators, not just their effects.
std::pair<KrausSet, KrausSet> shared_effect_pair();

}  // namespace krauscope
