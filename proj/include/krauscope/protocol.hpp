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
#include <optional>

#include "krauscope/matrix.hpp"
#include "krauscope/quantum.hpp"

namespace krauscope {

/// One run of the probe-controlled evolution: a qubit probe selects between
/// two conditional branches acting on the system (and, when a dilation is
/// present, the environment). With no dilation the environment is dropped
/// from the simulation entirely rather than carried as a trivial factor.
struct ProtocolInstance {
  CMatrix probe_state;               ///< 2 x 1, both components nonzero
  std::optional<Dilation> dilation;  ///< nullopt: probe-system only
  CMatrix branch0;  ///< system unitary applied on the probe-|0> branch
  CMatrix branch1;  ///< system unitary preceding the coupling on the |1> branch
  DensityMatrix input_state;
  double theta = 0.0;  ///< projector-gate angle used to build the branches

  int system_dim() const { return input_state.dim(); }
  int env_dim() const { return dilation ? dilation->env_dim() : 1; }

  /// Throws std::invalid_argument when the probe overlaps vanish, the
  /// branches are not unitary, or dimensions are inconsistent.
  void validate() const;
};

/// Result of one expectation evaluation: the complex pairing of the two
/// probe quadratures against the chosen system/environment projectors, and
/// the normalization it must be divided by.
struct ExpectationRecord {
  c64 value{0.0, 0.0};
  c64 normalization{0.0, 0.0};
  bool sampled = false;
  long shots = 0;
  std::uint64_t seed = 0;
  double se_x = 0.0;  ///< standard error of the first-quadrature estimate
  double se_y = 0.0;  ///< standard error of the second-quadrature estimate

  /// value / normalization; throws when |normalization| <= 1e-10.
  c64 ratio() const;
};

/// The block unitary |0><0| (x) branch0 (x) I  +  |1><1| (x) coupling *
/// (branch1 (x) I). Without a dilation the blocks are just branch0 and
/// branch1 on the system alone.
CMatrix build_controlled_evolution(const ProtocolInstance& inst);

/// Evolves the product input (probe (x) system (x) environment) through the
/// controlled evolution.
DensityMatrix evolve(const ProtocolInstance& inst);

/// Exact trace evaluation of the probe-quadrature expectation with the
/// system projected on |sys_index> and the environment on pointer state
/// env_index (omitted entirely when nullopt).
ExpectationRecord exact_expectation(const ProtocolInstance& inst,
                                    const DensityMatrix& rho_t, int sys_index,
                                    std::optional<int> env_index);

/// Finite-shot estimate of the same record. Shots are split evenly between
/// the two probe quadrature settings (remainder to the first); outcomes are
/// drawn from the exact Born distribution of each setting. Deterministic
/// for a fixed seed, independent of thread count.
ExpectationRecord sampled_expectation(const ProtocolInstance& inst,
                                      const DensityMatrix& rho_t,
                                      int sys_index,
                                      std::optional<int> env_index, long shots,
                                      std::uint64_t seed);

/// Direct arithmetic evaluation of <i| A_k B1 rho B0' |i> (with the env
/// overlaps summed in when env_index is nullopt but a dilation is present).
/// Ground truth for the protocol identity.
c64 lhs_oracle(const ProtocolInstance& inst, int sys_index,
               std::optional<int> env_index);

/// Diagonal gate exp(-i*theta*|j><j|): identity except entry j, which is
/// exp(-i*theta).
CMatrix projector_unitary(int j, double theta, int d);

/// (|0> + |1>)/sqrt(2), the default probe state: it maximizes the probe
/// overlap product in the normalization.
CMatrix plus_state();

}  // namespace krauscope
