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

#include "krauscope/kernels.hpp"

#include <atomic>
#include <cstdint>

namespace krauscope::kernels {

namespace {

std::atomic<Execution> g_execution{Execution::Auto};

// Work sizes below these run serially under Auto; the crossover was measured
// with the bundled benchmark (tools/kernel_bench.cpp).
constexpr std::int64_t kMatmulFlopThreshold = 64LL * 64 * 64;
constexpr std::int64_t kKronSizeThreshold = 64LL * 64;

bool use_parallel(std::int64_t work, std::int64_t threshold) {
  switch (g_execution.load(std::memory_order_relaxed)) {
    case Execution::Serial:
      return false;
    case Execution::Parallel:
      return true;
    case Execution::Auto:
      return work >= threshold;
  }
  return false;
}

}  // namespace

void set_execution(Execution mode) {
  g_execution.store(mode, std::memory_order_relaxed);
}

Execution execution() { return g_execution.load(std::memory_order_relaxed); }

bool parallel_enabled() {
  return g_execution.load(std::memory_order_relaxed) != Execution::Serial;
}

void matmul_serial(const c64* a, const c64* b, c64* out, int m, int k, int n) {
  for (int i = 0; i < m; ++i) {
    c64* row = out + static_cast<std::size_t>(i) * n;
    for (int j = 0; j < n; ++j) row[j] = c64{0.0, 0.0};
    for (int p = 0; p < k; ++p) {
      const c64 aip = a[static_cast<std::size_t>(i) * k + p];
      if (aip == c64{0.0, 0.0}) continue;
      const c64* brow = b + static_cast<std::size_t>(p) * n;
      for (int j = 0; j < n; ++j) row[j] += aip * brow[j];
    }
  }
}

void matmul_parallel(const c64* a, const c64* b, c64* out, int m, int k,
                     int n) {
  // Rows are independent and each row is computed exactly as in the serial
  // kernel, so the result does not depend on the thread count.
#pragma omp parallel for schedule(static)
  for (int i = 0; i < m; ++i) {
    c64* row = out + static_cast<std::size_t>(i) * n;
    for (int j = 0; j < n; ++j) row[j] = c64{0.0, 0.0};
    for (int p = 0; p < k; ++p) {
      const c64 aip = a[static_cast<std::size_t>(i) * k + p];
      if (aip == c64{0.0, 0.0}) continue;
      const c64* brow = b + static_cast<std::size_t>(p) * n;
      for (int j = 0; j < n; ++j) row[j] += aip * brow[j];
    }
  }
}

void matmul(const c64* a, const c64* b, c64* out, int m, int k, int n) {
  const std::int64_t work =
      static_cast<std::int64_t>(m) * static_cast<std::int64_t>(k) * n;
  if (use_parallel(work, kMatmulFlopThreshold)) {
    matmul_parallel(a, b, out, m, k, n);
  } else {
    matmul_serial(a, b, out, m, k, n);
  }
}

void kron_serial(const c64* a, int ar, int ac, const c64* b, int br, int bc,
                 c64* out) {
  const int cols = ac * bc;
  for (int i = 0; i < ar; ++i) {
    for (int p = 0; p < br; ++p) {
      c64* row = out + (static_cast<std::size_t>(i) * br + p) * cols;
      for (int j = 0; j < ac; ++j) {
        const c64 aij = a[static_cast<std::size_t>(i) * ac + j];
        const c64* brow = b + static_cast<std::size_t>(p) * bc;
        c64* block = row + static_cast<std::size_t>(j) * bc;
        for (int q = 0; q < bc; ++q) block[q] = aij * brow[q];
      }
    }
  }
}

void kron_parallel(const c64* a, int ar, int ac, const c64* b, int br, int bc,
                   c64* out) {
  const int cols = ac * bc;
#pragma omp parallel for schedule(static)
  for (int i = 0; i < ar; ++i) {
    for (int p = 0; p < br; ++p) {
      c64* row = out + (static_cast<std::size_t>(i) * br + p) * cols;
      for (int j = 0; j < ac; ++j) {
        const c64 aij = a[static_cast<std::size_t>(i) * ac + j];
        const c64* brow = b + static_cast<std::size_t>(p) * bc;
        c64* block = row + static_cast<std::size_t>(j) * bc;
        for (int q = 0; q < bc; ++q) block[q] = aij * brow[q];
      }
    }
  }
}

void kron(const c64* a, int ar, int ac, const c64* b, int br, int bc,
          c64* out) {
  const std::int64_t work = static_cast<std::int64_t>(ar) * ac * br * bc;
  if (use_parallel(work, kKronSizeThreshold)) {
    kron_parallel(a, ar, ac, b, br, bc, out);
  } else {
    kron_serial(a, ar, ac, b, br, bc, out);
  }
}

}  // namespace krauscope::kernels
