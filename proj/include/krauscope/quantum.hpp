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
#include <vector>

#include "krauscope/matrix.hpp"

namespace krauscope {

/// Validated density operator: Hermitian within 1e-10, unit trace within
/// 1e-10, eigenvalues >= -1e-10. Immutable after construction.
class DensityMatrix {
 public:
  explicit DensityMatrix(CMatrix m);

  static DensityMatrix pure(const CMatrix& state_column);
  static DensityMatrix maximally_mixed(int d);

  const CMatrix& mat() const { return mat_; }
  int dim() const { return mat_.rows(); }
  c64 entry(int i, int j) const { return mat_(i, j); }

 private:
  CMatrix mat_;
};

/// Ordered set of Kraus operators {A_k}, all d_s x d_s. Construction
/// enforces the completeness relation sum_k A_k' A_k = I within 1e-9.
class KrausSet {
 public:
  explicit KrausSet(std::vector<CMatrix> operators);

  int env_dim() const { return static_cast<int>(ops_.size()); }
  int system_dim() const { return ops_.front().rows(); }
  const std::vector<CMatrix>& ops() const { return ops_; }
  const CMatrix& op(int k) const { return ops_.at(k); }
  double completeness_residual() const { return completeness_residual_; }

 private:
  std::vector<CMatrix> ops_;
  double completeness_residual_ = 0.0;
};

/// A system-environment coupling together with a fixed environment state and
/// pointer basis. Measuring the environment in the pointer basis after the
/// coupling realizes one Kraus operator per outcome; changing the basis
/// changes which set is realized, so the basis is part of the record.
struct Dilation {
  CMatrix coupling;   ///< unitary on system (x) environment
  CMatrix env_state;  ///< d_e x 1, unit norm
  CMatrix env_basis;  ///< d_e x d_e unitary; columns are the pointer states

  Dilation(CMatrix coupling_in, CMatrix env_state_in);
  Dilation(CMatrix coupling_in, CMatrix env_state_in, CMatrix env_basis_in);

  int env_dim() const { return env_state.rows(); }
  int system_dim() const { return coupling.rows() / env_dim(); }

  /// Pointer-basis column |k_E>.
  CMatrix pointer_state(int k) const;
};

/// The Kraus operator realized by outcome k: the system block obtained by
/// contracting the coupling with the environment state on the right and the
/// pointer state on the left. Computed by direct contraction; the rest of
/// the library treats this as ground truth.
CMatrix kraus_from_dilation(const Dilation& dil, int k);

/// Builds a dilation that realizes exactly the given operators under the
/// requested environment state (all pointer-basis components of which must
/// be nonzero, so that downstream normalizations never vanish). Round trip
/// through kraus_from_dilation reproduces the inputs to ~1e-12.
Dilation dilation_from_kraus(const KrausSet& ks, const CMatrix& env_state);

/// Same with the default environment state (uniform superposition, the
/// best-conditioned choice with all components nonzero).
Dilation dilation_from_kraus(const KrausSet& ks);

/// E = A' A.
CMatrix povm_from_kraus(const CMatrix& a);

/// tr(rho * e), validated real and clamped to [0, 1] near the boundary.
/// Throws if e is visibly non-Hermitian or yields a probability below
/// -1e-10.
double born_probability(const DensityMatrix& rho, const CMatrix& e);

/// sum_k A_k rho A_k'. Output is a validated DensityMatrix.
DensityMatrix apply_channel(const KrausSet& ks, const DensityMatrix& rho);

/// Permutation taking system(x)env indices to env(x)system indices.
CMatrix swap_factors(int dim_first, int dim_second);

}  // namespace krauscope
