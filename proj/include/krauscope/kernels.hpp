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

#include <complex>
#include <cstdint>

namespace krauscope::kernels {

using c64 = std::complex<double>;

/// Execution policy for the data-parallel kernels. The parallel variants
/// partition work so that every output element is computed by the same
/// serial inner loop as the reference implementation; results are therefore
/// bit-identical across policies and thread counts.
enum class Execution {
  Serial,    ///< reference implementations only
  Parallel,  ///< OpenMP variants regardless of size
  Auto,      ///< OpenMP above a size threshold (default)
};

void set_execution(Execution mode);
Execution execution();

/// True when the current policy allows coarse-grained parallel loops
/// (the experiment harness uses this for its seed/repetition sweeps).
bool parallel_enabled();

// out[m x n] = a[m x k] * b[k x n], all row-major.
void matmul_serial(const c64* a, const c64* b, c64* out, int m, int k, int n);
void matmul_parallel(const c64* a, const c64* b, c64* out, int m, int k, int n);
void matmul(const c64* a, const c64* b, c64* out, int m, int k, int n);

// out[(i*br+p)*(ac*bc) + (j*bc+q)] = a[i*ac+j] * b[p*bc+q].
void kron_serial(const c64* a, int ar, int ac, const c64* b, int br, int bc,
                 c64* out);
void kron_parallel(const c64* a, int ar, int ac, const c64* b, int br, int bc,
                   c64* out);
void kron(const c64* a, int ar, int ac, const c64* b, int br, int bc, c64* out);

}  // namespace krauscope::kernels
