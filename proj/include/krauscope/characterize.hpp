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

#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "krauscope/matrix.hpp"
#include "krauscope/protocol.hpp"
#include "krauscope/quantum.hpp"

namespace krauscope {

enum class TargetKind { Kraus, Povm, Unitary, Observable, Density };
const char* to_string(TargetKind kind);

/// Finite-statistics mode: shots per expectation estimate plus the master
/// seed from which every per-element stream is derived.
struct SampleSpec {
  long shots = 0;
  std::uint64_t seed = 0;
};

/// Characterization of the operators realized by a black-box coupling. The
/// input state is known (it is prepared); everything about the coupling is
/// accessed only through protocol runs.
struct KrausSetup {
  Dilation dilation;
  DensityMatrix input_state;
  CMatrix probe_state = plus_state();
  double theta = 1.5707963267948966;  // pi/2
  std::optional<SampleSpec> sampling;
};

/// Characterization of an unknown system unitary; no environment involved.
struct UnitarySetup {
  CMatrix target;
  DensityMatrix input_state;
  CMatrix probe_state = plus_state();
  double theta = 1.5707963267948966;
  std::optional<SampleSpec> sampling;
};

enum class ObservableMethod { FirstOrder, Refined };
const char* to_string(ObservableMethod method);

/// The observable is accessed through the gates exp(-i*theta1*A) and
/// exp(+i*theta2*A); their concatenation is a net rotation by
/// delta = theta1 - theta2, and the matrix elements of A follow from the
/// reconstructed rotation by series inversion.
struct ObservableEstimatorConfig {
  double theta1 = 0.525;
  double theta2 = 0.475;
  ObservableMethod method = ObservableMethod::Refined;
  double series_guard = 1.0;  ///< |theta1 - theta2| must stay below this

  double delta() const { return theta1 - theta2; }
  void validate() const;
};

struct ObservableSetup {
  CMatrix generator;  ///< Hermitian A, reached only via its evolution gates
  ObservableEstimatorConfig estimator;
  DensityMatrix input_state;
  CMatrix probe_state = plus_state();
  double theta = 1.5707963267948966;
  std::optional<SampleSpec> sampling;
};

/// Characterization of an unknown state: the state itself is the prepared
/// input, and a known reference unitary with no vanishing adjoint elements
/// provides the baseline branch. The transform matrix default satisfies
/// that for every dimension.
struct DensitySetup {
  DensityMatrix input_state;    ///< the unknown being reconstructed
  CMatrix reference_unitary;    ///< known; use dft_matrix(d) unless overridden
  CMatrix probe_state = plus_state();
  double theta = 1.5707963267948966;
  std::optional<SampleSpec> sampling;
};

/// Sampled-mode reliability flag: the exact denominator of this element is
/// within 3 standard errors of the statistical noise on its numerator, so
/// the division amplifies noise beyond the nominal shot budget.
struct ElementFlag {
  int row = 0;
  int col = 0;
  double denominator_magnitude = 0.0;
  double stderr_estimate = 0.0;
};

struct Residuals {
  std::optional<double> hermiticity;
  std::optional<double> trace_deviation;
  std::optional<double> completeness;
  std::optional<double> unitarity;
};

/// A full-matrix reconstruction with its provenance: which projector-gate
/// settings were used (always d_s + 1 distinct ones), the per-row baseline
/// subtraction terms, and residual diagnostics appropriate to the target.
struct Reconstruction {
  TargetKind kind = TargetKind::Density;
  int kraus_index = -1;  ///< outcome index for kraus/povm targets
  CMatrix elements;
  int settings_used = 0;
  bool sampled = false;
  long shots = 0;
  std::uint64_t seed = 0;
  std::map<std::pair<int, int>, c64> baselines;  ///< (row, outcome or -1)
  std::vector<ElementFlag> flags;
  Residuals residuals;
};

// Element-wise estimators. In sampled mode these reproduce the exact same
// values as the corresponding full reconstructions: streams are keyed by
// what is physically measured, not by which API requested it.
c64 kraus_element(const KrausSetup& setup, int i, int j, int k);
c64 povm_element(const KrausSetup& setup, int i, int j, int k);
c64 unitary_element(const UnitarySetup& setup, int i, int j);
c64 observable_element(const ObservableSetup& setup, int i, int j);
c64 density_element(const DensitySetup& setup, int i, int j);

// Full-matrix reconstructions, d_s + 1 settings each.
Reconstruction kraus_full(const KrausSetup& setup, int k);
std::vector<Reconstruction> kraus_full_set(const KrausSetup& setup);
Reconstruction povm_full(const KrausSetup& setup, int k);
std::vector<Reconstruction> povm_full_set(const KrausSetup& setup);
Reconstruction unitary_full(const UnitarySetup& setup);
Reconstruction observable_full(const ObservableSetup& setup);
Reconstruction density_full(const DensitySetup& setup);

}  // namespace krauscope
