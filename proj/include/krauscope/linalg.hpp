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

struct EighResult {
  std::vector<double> eigenvalues;  // ascending
  CMatrix eigenvectors;             // columns, h = V diag(w) V'
};

/// Hermitian eigendecomposition by cyclic Jacobi rotations. Throws on
/// non-Hermitian input (residual above herm_tol).
EighResult eigh(const CMatrix& h, double herm_tol = 1e-10);

/// exp(-i * scale * h) for Hermitian h, via eigendecomposition. Exact for
/// any angle, no series truncation.
CMatrix expm_hermitian(const CMatrix& h, double scale);

/// Principal square root of a Hermitian PSD matrix (small negative
/// eigenvalues are clamped to zero).
CMatrix hermitian_sqrt(const CMatrix& psd);

/// Haar-distributed unitary: Gram-Schmidt orthonormalization of a Ginibre
/// matrix. The triangular factor's diagonal is real positive by
/// construction, which is exactly the phase convention that makes the
/// result Haar. Bit-identical across runs for a fixed seed.
CMatrix random_unitary(int d, std::uint64_t seed);

/// G G' / tr(G G') for Ginibre G: Hermitian, PSD, unit trace, generically
/// full. Bit-identical across runs for a fixed seed.
CMatrix random_density(int d, std::uint64_t seed);

/// (G + G')/2 for Ginibre G, rescaled to unit spectral norm.
CMatrix random_hermitian(int d, std::uint64_t seed);

/// Extends a matrix with orthonormal columns (iso' iso = I within 1e-10,
/// cols <= rows) to a square unitary whose first cols columns equal iso
/// exactly. The completion is a deterministic seeded orthonormalization, so
/// repeated calls agree.
CMatrix complete_to_unitary(const CMatrix& iso);

/// Discrete Fourier transform matrix, F[a,b] = exp(-2*pi*i*a*b/d)/sqrt(d).
/// Every entry has magnitude 1/sqrt(d).
CMatrix dft_matrix(int d);

}  // namespace krauscope
